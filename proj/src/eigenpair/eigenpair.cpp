#include "zerolab/eigenpair.hpp"

#include <cmath>

#include "zerolab/errors.hpp"
#include "zerolab/specfun.hpp"

namespace zerolab::eigenpair {
namespace {

constexpr double kRowTolerance = 1e-12;

bool same(double a, double b) { return std::fabs(a - b) <= kRowTolerance * (1.0 + std::fabs(b)); }

// log|c| and sign of the Gamma prefactor -(2^alpha / Gamma(kappa)) Gamma((mu+alpha)/2) Gamma(alpha/2+kappa).
specfun::SignedLog prefactor(const EigenpairSpec& s) {
  const auto g_kappa = specfun::ln_gamma(s.kappa);
  const auto g_a = specfun::ln_gamma(0.5 * (s.mu() + s.alpha));
  const auto g_b = specfun::ln_gamma(0.5 * s.alpha + s.kappa);
  specfun::SignedLog out;
  out.log_abs = s.alpha * std::log(2.0) - g_kappa.log_abs + g_a.log_abs + g_b.log_abs;
  out.sign = -g_kappa.sign * g_a.sign * g_b.sign;
  return out;
}

}  // namespace

void EigenpairSpec::validate() const {
  if (d < 1) throw ConfigError("eigenpair: dimension d must be >= 1");
  if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("eigenpair: alpha must lie in (0,2)");
  if (l != 0 && l != 1) throw ConfigError("eigenpair: only l in {0,1} is supported");
  if (l == 1 && (axis < 1 || axis > d)) throw ConfigError("eigenpair: axis must lie in [1,d]");
  if (!(kappa > l) || !std::isfinite(kappa)) throw ConfigError("eigenpair: kappa must exceed l");
}

void EigenpairSpec::validate_classification_range() const {
  validate();
  const double upper = 0.5 * (mu() + alpha);
  if (!(kappa < upper)) {
    throw ConfigError("eigenpair: decay classification needs kappa in (l, (mu+alpha)/2) = (" + std::to_string(l) +
                      ", " + std::to_string(upper) + ")");
  }
}

const char* to_string(Sign s) { return s == Sign::negative ? "negative" : "positive"; }

double eigenfunction_value(const EigenpairSpec& spec, const Point& x) {
  if (x.dim != spec.d) throw ConfigError("eigenpair: point dimension does not match d");
  const double base = std::pow(1.0 + x.norm2(), -spec.kappa);
  return spec.l == 0 ? base : x[spec.axis - 1] * base;
}

double eigenfunction_radial(const EigenpairSpec& spec, double r) {
  const double base = std::pow(1.0 + r * r, -spec.kappa);
  return spec.l == 0 ? base : r * base;
}

double potential_radial(const EigenpairSpec& spec, double r) {
  spec.validate();
  const auto pref = prefactor(spec);
  const double r2 = r * r;
  const double f = specfun::hyp2f1_reg({0.5 * (spec.mu() + spec.alpha), 0.5 * spec.alpha + spec.kappa, 0.5 * spec.mu(), -r2});
  if (f == 0.0) return 0.0;
  const double log_abs = pref.log_abs + spec.kappa * std::log1p(r2) + std::log(std::fabs(f));
  const double sign = pref.sign * (f > 0.0 ? 1.0 : -1.0);
  return sign * std::exp(log_abs);
}

double potential_value(const EigenpairSpec& spec, const Point& x) {
  if (x.dim != spec.d) throw ConfigError("eigenpair: point dimension does not match d");
  return potential_radial(spec, x.norm());
}

DecayClass decay_class(const EigenpairSpec& spec) {
  spec.validate_classification_range();
  const double mu = spec.mu();
  const double a = spec.alpha;
  const double k = spec.kappa;
  DecayClass out;
  if (same(k, 0.5 * mu)) {
    out.row = 3;
    out.rate = RateFunction::power_log(a, -1.0);
    out.degenerate_log_case = true;
  } else if (same(k, 0.5 * (mu - a))) {
    out.row = 2;
    out.rate = RateFunction::power(2.0 * a);
  } else if (k < 0.5 * mu) {
    out.row = 1;
    out.rate = RateFunction::power(a);
  } else {
    out.row = 4;
    out.rate = RateFunction::power(mu + a - 2.0 * k);
  }
  const bool negative = k < 0.5 * (mu - a) || same(k, 0.5 * (mu - a));
  out.sign_at_infinity = negative ? Sign::negative : Sign::positive;
  out.l2_member = lp_membership(spec, 2.0);
  return out;
}

bool lp_membership(const EigenpairSpec& spec, double p) {
  if (!(p >= 1.0)) throw ConfigError("lp_membership: p must be >= 1");
  return p * (2.0 * spec.kappa - spec.l) > spec.d;
}

}  // namespace zerolab::eigenpair
