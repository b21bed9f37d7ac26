#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "zerolab/decaylab.hpp"
#include "zerolab/errors.hpp"

namespace zerolab::decaylab {
namespace {

constexpr std::size_t kMinSamples = 8;
constexpr double kMinSpan = 1e3;
constexpr double kMaxCondition = 1e12;

struct LinearFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd se;
  double rss = 0.0;
  double condition = 0.0;
};

// Least squares with unit-norm column scaling; standard errors from sigma^2 (X^T X)^{-1}.
LinearFit solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Eigen::VectorXd scale = X.colwise().norm().transpose();
  if ((scale.array() == 0.0).any()) throw NumericalError("fit_decay: degenerate design column");
  const Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Xs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  LinearFit out;
  out.condition = sv(0) / sv(sv.size() - 1);
  if (!(out.condition < kMaxCondition)) throw NumericalError("fit_decay: ill-conditioned design matrix");
  const Eigen::VectorXd beta = svd.solve(y);
  out.rss = (Xs * beta - y).squaredNorm();
  const auto n = static_cast<double>(X.rows());
  const auto k = static_cast<double>(X.cols());
  const double sigma2 = n > k ? out.rss / (n - k) : 0.0;
  const Eigen::MatrixXd V = svd.matrixV();
  const Eigen::VectorXd inv_sv2 = sv.array().square().inverse();
  const Eigen::VectorXd var = (V.array().square().matrix() * inv_sv2) * sigma2;
  out.coef = beta.cwiseQuotient(scale);
  out.se = var.cwiseSqrt().cwiseQuotient(scale);
  return out;
}

}  // namespace

DecayFit fit_decay(const std::vector<Sample>& samples, std::optional<RateForm> hint) {
  const RateForm form = hint.value_or(RateForm::power);
  const std::size_t n = samples.size();
  if (n < kMinSamples) throw ConfigError("fit_decay: need at least 8 samples");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(samples[i].value > 0.0) || !std::isfinite(samples[i].value)) throw ConfigError("fit_decay: values must be positive");
    if (!(samples[i].r > 0.0) || !std::isfinite(samples[i].r)) throw ConfigError("fit_decay: radii must be positive");
    if (i > 0 && !(samples[i].r > samples[i - 1].r)) throw ConfigError("fit_decay: radii must be increasing");
  }
  const double r_min = samples.front().r;
  if (samples.back().r / r_min < kMinSpan) throw ConfigError("fit_decay: radii must span at least 3 decades");
  if (form != RateForm::power && !(r_min > 1.0)) throw ConfigError("fit_decay: logarithmic forms need r > 1");

  Eigen::VectorXd y(n), log_r(n), log_log_r(n);
  for (std::size_t i = 0; i < n; ++i) {
    y(i) = std::log(samples[i].value);
    log_r(i) = std::log(samples[i].r);
    log_log_r(i) = form == RateForm::power ? 0.0 : std::log(log_r(i));
  }

  auto design = [&](double delta) {
    const int cols = form == RateForm::power ? 2 : (form == RateForm::power_log ? 3 : 4);
    Eigen::MatrixXd X(n, cols);
    X.col(0).setOnes();
    X.col(1) = -log_r;
    if (cols >= 3) X.col(2) = -log_log_r;
    if (cols == 4) {
      for (std::size_t i = 0; i < n; ++i) X(i, 3) = std::pow(log_r(i), 1.0 - delta) / (1.0 - delta);
    }
    return X;
  };

  LinearFit best;
  double best_delta = 0.5;
  if (form == RateForm::stretched) {
    best.rss = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 49; ++k) {
      const double delta = 0.02 * k;
      LinearFit f = solve(design(delta), y);
      if (f.rss < best.rss) {
        best = std::move(f);
        best_delta = delta;
      }
    }
  } else {
    best = solve(design(0.5), y);
  }

  DecayFit out;
  out.n = n;
  out.log_amplitude = best.coef(0);
  out.se_a = best.se(1);
  out.condition = best.condition;
  out.rms_residual = std::sqrt(best.rss / static_cast<double>(n));
  switch (form) {
    case RateForm::power:
      out.rate = RateFunction::power(best.coef(1), r_min);
      break;
    case RateForm::power_log:
      out.rate = RateFunction::power_log(best.coef(1), best.coef(2), r_min);
      out.se_b = best.se(2);
      break;
    case RateForm::stretched:
      out.rate = RateFunction::stretched(best.coef(1), best.coef(2), best.coef(3), best_delta, r_min);
      out.se_b = best.se(2);
      out.se_c = best.se(3);
      break;
  }
  return out;
}

namespace {

struct Side {
  RateFunction rate;
  std::optional<RateFunction> factor;
  std::vector<FreeExponent> free;
};

void apply(RateFunction& rate, const FreeExponent& f, double value) {
  const double x = f.base + f.coefficient * value;
  switch (f.field) {
    case RateField::a:
      rate.a = x;
      break;
    case RateField::b:
      rate.b = x;
      break;
    case RateField::c:
      rate.c = x;
      break;
  }
}

std::vector<double> grid(const FreeExponent& f) {
  constexpr int kPoints = 200;
  constexpr double kSpan = 20.0;
  const double hi = std::isinf(f.hi) ? f.lo + kSpan : f.hi;
  const double width = hi - f.lo;
  const double lo = f.lo_closed ? f.lo : f.lo + 1e-6 * width;
  const double top = f.hi_closed || std::isinf(f.hi) ? hi : hi - 1e-6 * width;
  std::vector<double> out(kPoints + 1);
  for (int i = 0; i <= kPoints; ++i) out[i] = lo + (top - lo) * i / kPoints;
  return out;
}

struct SideResult {
  double drift = 1.0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};

// Largest decrease (lower) or increase (upper) of log(value/rate) along increasing r.
SideResult evaluate(const std::vector<Sample>& s, const RateFunction& rate, const std::optional<RateFunction>& factor,
                    EnvelopeSide side) {
  double worst = 0.0, extreme = 0.0, qmin = 0.0, qmax = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double log_rate = rate.log_value(s[i].r);
    if (factor) log_rate += factor->log_value(s[i].r);
    const double q = std::log(std::fabs(s[i].value)) - log_rate;
    if (i == 0) {
      extreme = qmin = qmax = q;
      continue;
    }
    qmin = std::min(qmin, q);
    qmax = std::max(qmax, q);
    if (side == EnvelopeSide::lower) {
      worst = std::max(worst, extreme - q);
      extreme = std::max(extreme, q);
    } else {
      worst = std::max(worst, q - extreme);
      extreme = std::min(extreme, q);
    }
  }
  return {std::exp(worst), std::exp(qmin), std::exp(qmax)};
}

}  // namespace

EnvelopeCheck check_envelope(const std::vector<Sample>& samples, const EnvelopePrediction& prediction, double band,
                             bool on_axis) {
  if (!(band > 1.0)) throw ConfigError("check_envelope: band must exceed 1");
  if (!prediction.lower && !prediction.upper) throw ConfigError("check_envelope: prediction has no bounds");

  double from = 0.0;
  for (const auto* r : {&prediction.lower, &prediction.upper}) {
    if (!*r) continue;
    from = std::max(from, (*r)->valid_from);
    if ((*r)->form != RateForm::power) from = std::max(from, std::nextafter(1.0, 2.0));
  }
  if (on_axis && prediction.upper_axis_factor) from = std::max(from, prediction.upper_axis_factor->valid_from);
  std::vector<Sample> used;
  for (const auto& s : samples) {
    if (s.r < from) continue;
    if (!(std::fabs(s.value) > 0.0) || !std::isfinite(s.value)) throw ConfigError("check_envelope: values must be nonzero");
    if (!used.empty() && !(s.r > used.back().r)) throw ConfigError("check_envelope: radii must be increasing");
    used.push_back(s);
  }
  if (used.size() < 2) throw ConfigError("check_envelope: samples do not overlap the envelope's range");

  EnvelopeCheck out;
  out.band = band;
  out.used = used.size();
  for (EnvelopeSide side : {EnvelopeSide::lower, EnvelopeSide::upper}) {
    const auto& base = side == EnvelopeSide::lower ? prediction.lower : prediction.upper;
    if (!base) continue;
    Side sd{*base, side == EnvelopeSide::upper && on_axis ? prediction.upper_axis_factor : std::nullopt, {}};
    for (const auto& f : prediction.free_exponents) {
      if (f.side == side) sd.free.push_back(f);
    }
    SideResult best = evaluate(used, sd.rate, sd.factor, side);
    for (const auto& f : sd.free) {
      double chosen = 0.0;
      RateFunction rate = sd.rate;
      best.drift = std::numeric_limits<double>::infinity();
      for (double value : grid(f)) {
        apply(rate, f, value);
        const SideResult r = evaluate(used, rate, sd.factor, side);
        // Smallest drift first; among equal drifts the tightest envelope.
        const bool tie = std::fabs(std::log(r.drift) - std::log(best.drift)) <= 1e-9;
        const bool tighter = r.ratio_max / r.ratio_min < best.ratio_max / best.ratio_min;
        if ((!tie && r.drift < best.drift) || (tie && tighter)) {
          best = r;
          chosen = value;
        }
      }
      apply(sd.rate, f, chosen);
      out.profiled.emplace_back(f.name, chosen);
    }
    const bool pass = best.drift <= band;
    if (side == EnvelopeSide::lower) {
      out.has_lower = true;
      out.lower_drift = best.drift;
      out.lower_ratio_min = best.ratio_min;
      out.lower_ratio_max = best.ratio_max;
      out.lower_pass = pass;
    } else {
      out.has_upper = true;
      out.upper_drift = best.drift;
      out.upper_ratio_min = best.ratio_min;
      out.upper_ratio_max = best.ratio_max;
      out.upper_pass = pass;
    }
  }
  out.pass = out.lower_pass && out.upper_pass;
  return out;
}

}  // namespace zerolab::decaylab
