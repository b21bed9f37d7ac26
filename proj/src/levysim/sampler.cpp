#include <cmath>
#include <numbers>

#include "zerolab/errors.hpp"
#include "zerolab/levysim.hpp"

namespace zerolab::levysim {
namespace {
constexpr double kPi = std::numbers::pi;
}

IncrementSampler::IncrementSampler(const ProcessSpec& proc, double small_jump_cutoff)
    : proc_(proc), cutoff_(small_jump_cutoff) {
  proc_.validate();
  if (proc_.d > kMaxDim) throw ConfigError("sampler: only d <= 3 is supported");
  if (proc_.family == ProcessFamily::layered_stable) {
    if (!(cutoff_ > 0.0 && cutoff_ < 1.0)) throw ConfigError("sampler: small_jump_cutoff must lie in (0,1)");
    const double a = proc_.alpha;
    const double mass = stable_constant(proc_.d, a) * unit_sphere_area(proc_.d);
    // Jumps below the cutoff: covariance (1/d) int_{|z|<cutoff} |z|^2 nu(z) dz per unit time.
    gauss_sd_ = std::sqrt(mass * std::pow(cutoff_, 2.0 - a) / ((2.0 - a) * proc_.d));
    rate_mid_ = mass * (std::pow(cutoff_, -a) - 1.0) / a;
    rate_large_ = mass / proc_.gamma;
  }
}

double IncrementSampler::symmetric_stable(double alpha, Stream& s) {
  const double v = kPi * (s.uniform() - 0.5);
  if (alpha == 1.0) return std::tan(v);
  const double w = s.exponential();
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

double IncrementSampler::positive_stable(double beta, Stream& s) {
  const double u = s.uniform();
  const double w = s.exponential();
  const double a = std::pow(std::sin(beta * kPi * u), beta / (1.0 - beta)) * std::sin((1.0 - beta) * kPi * u) /
                   std::pow(std::sin(kPi * u), 1.0 / (1.0 - beta));
  return std::pow(a / w, (1.0 - beta) / beta);
}

Point IncrementSampler::unit_direction(Stream& s) const {
  Point u(proc_.d);
  if (proc_.d == 1) {
    u[0] = s.uniform() < 0.5 ? -1.0 : 1.0;
    return u;
  }
  double n2 = 0.0;
  do {
    for (int i = 0; i < proc_.d; ++i) u[i] = s.normal();
    n2 = u.norm2();
  } while (n2 == 0.0);
  u *= 1.0 / std::sqrt(n2);
  return u;
}

Point IncrementSampler::sample(double h, Stream& s) const {
  const int d = proc_.d;
  const double a = proc_.alpha;
  Point out(d);
  if (proc_.family == ProcessFamily::isotropic_stable) {
    const double scale = a == 1.0 ? h : std::pow(h, 1.0 / a);
    if (d == 1) {
      out[0] = scale * symmetric_stable(a, s);
      return out;
    }
    // Subordinated Brownian motion: X = sqrt(2 S) N with S positive (alpha/2)-stable.
    const double spread = scale * std::sqrt(2.0 * positive_stable(0.5 * a, s));
    for (int i = 0; i < d; ++i) out[i] = spread * s.normal();
    return out;
  }

  const double sd = gauss_sd_ * std::sqrt(h);
  for (int i = 0; i < d; ++i) out[i] = sd * s.normal();
  const double rate = rate_mid_ + rate_large_;
  const double lower = std::pow(cutoff_, -a);
  for (double t = s.exponential() / rate; t < h; t += s.exponential() / rate) {
    double rho;
    if (s.uniform() * rate < rate_mid_) {
      rho = std::pow(lower - s.uniform() * (lower - 1.0), -1.0 / a);
    } else {
      rho = std::pow(s.uniform(), -1.0 / proc_.gamma);
    }
    out += rho * unit_direction(s);
  }
  return out;
}

}  // namespace zerolab::levysim
