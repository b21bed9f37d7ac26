#include "zerolab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zerolab/errors.hpp"

namespace zerolab {
namespace {

constexpr int kScanPerDecade = 64;

template <class F>
double scan_extreme(const F& f, double lo, double hi, bool want_max) {
  const int n = std::max(2, static_cast<int>(std::ceil(kScanPerDecade * std::log10(hi / lo))) + 1);
  double best = f(lo);
  for (int i = 1; i < n; ++i) {
    const double v = f(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    best = want_max ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

}  // namespace

PotentialModel PotentialModel::hypergeometric(const eigenpair::EigenpairSpec& spec) {
  PotentialModel m;
  m.family = PotentialFamily::hypergeometric;
  m.spec = spec;
  return m;
}

PotentialModel PotentialModel::power(double beta, double r0) {
  PotentialModel m;
  m.family = PotentialFamily::power;
  m.beta = beta;
  m.r0 = r0;
  return m;
}

PotentialModel PotentialModel::power_log(double alpha, double delta, double r0) {
  PotentialModel m;
  m.family = PotentialFamily::power_log;
  m.alpha = alpha;
  m.delta = delta;
  m.r0 = r0;
  return m;
}

PotentialModel PotentialModel::constant(double level) {
  PotentialModel m;
  m.family = PotentialFamily::constant;
  m.level = level;
  return m;
}

void PotentialModel::validate() const {
  if (!(r0 >= 1.0)) throw ConfigError("potential: r0 must be >= 1");
  switch (family) {
    case PotentialFamily::hypergeometric:
      spec.validate_classification_range();
      break;
    case PotentialFamily::power:
      if (!(beta > 0.0)) throw ConfigError("potential: power beta must be positive");
      break;
    case PotentialFamily::power_log:
      if (!(alpha > 0.0)) throw ConfigError("potential: power_log alpha must be positive");
      if (delta <= 0.0 && !(r0 > 1.0)) throw ConfigError("potential: power_log with delta <= 0 needs r0 > 1");
      break;
    case PotentialFamily::constant:
      if (!std::isfinite(level)) throw ConfigError("potential: constant level must be finite");
      break;
  }
}

double PotentialModel::value(double r) const {
  switch (family) {
    case PotentialFamily::hypergeometric:
      return eigenpair::potential_radial(spec, r);
    case PotentialFamily::power:
      return std::pow(std::max(r, r0), -beta);
    case PotentialFamily::power_log: {
      const double s = std::max(r, r0);
      return std::pow(s, -alpha) * std::pow(std::log(s), delta);
    }
    case PotentialFamily::constant:
      return level;
  }
  return 0.0;
}

eigenpair::Sign PotentialModel::sign_at_infinity() const {
  if (family == PotentialFamily::hypergeometric) return eigenpair::decay_class(spec).sign_at_infinity;
  if (family == PotentialFamily::constant && level < 0.0) return eigenpair::Sign::negative;
  return eigenpair::Sign::positive;
}

double PotentialModel::tail_power() const {
  switch (family) {
    case PotentialFamily::hypergeometric:
      return eigenpair::decay_class(spec).rate.a;
    case PotentialFamily::power:
      return beta;
    case PotentialFamily::power_log:
      return alpha;
    case PotentialFamily::constant:
      return 0.0;
  }
  return 0.0;
}

double PotentialModel::log_power() const {
  switch (family) {
    case PotentialFamily::hypergeometric:
      return eigenpair::decay_class(spec).degenerate_log_case ? 1.0 : 0.0;
    case PotentialFamily::power_log:
      return delta;
    default:
      return 0.0;
  }
}

RateFunction PotentialModel::tail_rate() const {
  const double q = log_power();
  if (q == 0.0) return RateFunction::power(tail_power(), r0);
  return RateFunction::power_log(tail_power(), -q, std::max(r0, 1.0));
}

double PotentialModel::outer_sup(double r) const {
  const double lo = 0.5 * r;
  switch (family) {
    case PotentialFamily::hypergeometric: {
      // Every classified row decays to 0, so the supremum is at least that limit.
      const double hi = std::max(lo, 1.0) * 1e8;
      return std::max(0.0, scan_extreme([&](double s) { return value(s); }, std::max(lo, 1e-8), hi, true));
    }
    case PotentialFamily::power:
      return value(lo);
    case PotentialFamily::power_log: {
      // r^{-alpha} (log r)^delta peaks at exp(delta/alpha) when delta > 0.
      const double peak = delta > 0.0 ? std::exp(delta / alpha) : 0.0;
      return value(std::max(lo, peak));
    }
    case PotentialFamily::constant:
      return level;
  }
  return 0.0;
}

double PotentialModel::annulus_inf(double r) const {
  if (r < r0) throw ConfigError("potential: annulus envelope needs r >= r0");
  const double hi = 1.5 * r;
  switch (family) {
    case PotentialFamily::hypergeometric:
      return scan_extreme([&](double s) { return value(s); }, r0, hi, false);
    case PotentialFamily::power:
      return value(hi);
    case PotentialFamily::power_log:
      return std::min(value(r0), value(hi));
    case PotentialFamily::constant:
      return level;
  }
  return 0.0;
}

std::string PotentialModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (family) {
    case PotentialFamily::hypergeometric:
      os << "hypergeometric(d=" << spec.d << ", alpha=" << spec.alpha << ", l=" << spec.l << ", kappa=" << spec.kappa
         << ")";
      break;
    case PotentialFamily::power:
      os << "power(beta=" << beta << ", r0=" << r0 << ")";
      break;
    case PotentialFamily::power_log:
      os << "power_log(alpha=" << alpha << ", delta=" << delta << ", r0=" << r0 << ")";
      break;
    case PotentialFamily::constant:
      os << "constant(" << level << ")";
      break;
  }
  return os.str();
}

const char* to_string(PotentialFamily f) {
  switch (f) {
    case PotentialFamily::hypergeometric:
      return "hypergeometric";
    case PotentialFamily::power:
      return "power";
    case PotentialFamily::power_log:
      return "power_log";
    case PotentialFamily::constant:
      return "constant";
  }
  return "unknown";
}

}  // namespace zerolab
