#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>

#include "zerolab/decaylab.hpp"
#include "zerolab/errors.hpp"

namespace zerolab::decaylab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_iteration_args(int p, double K, double eta) {
  if (p < 1) throw ConfigError("iteration: p must be >= 1");
  if (!(K >= 0.0) || !std::isfinite(K)) throw ConfigError("iteration: K must be finite and non-negative");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ConfigError("iteration: eta must be finite and non-negative");
}

// sum_{k=0}^{p-1} x^k / k! with compensated summation.
double truncated_exp(int p, double x) {
  double term = 1.0, sum = 0.0, carry = 0.0;
  for (int k = 0; k < p; ++k) {
    if (k > 0) term *= x / k;
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double kernel_log(const RateFunction& u, const RateFunction& v, double s) { return u.log_value(s) - v.log_value(s); }

// Closed-form shell integral of s^{e} (log s)^{-B} over [R0, r], times the sphere area.
std::optional<double> closed_form(double e, double B, double R0, double r, double area) {
  if (B == 0.0) {
    const double k = e + 1.0;
    if (k == 0.0) return std::isinf(r) ? kInf : area * std::log(r / R0);
    if (std::isinf(r)) return k < 0.0 ? -area * std::pow(R0, k) / k : kInf;
    return area * (std::pow(r, k) - std::pow(R0, k)) / k;
  }
  if (e != -1.0) return std::nullopt;
  const double t0 = std::log(R0);
  const double k = 1.0 - B;
  if (std::isinf(r)) return (k < 0.0 && t0 > 0.0) ? -area * std::pow(t0, k) / k : kInf;
  const double t1 = std::log(r);
  if (B == 1.0) return t0 > 0.0 ? area * std::log(t1 / t0) : kInf;
  if (t0 == 0.0 && k <= 0.0) return kInf;
  return area * (std::pow(t1, k) - std::pow(t0, k)) / k;
}

}  // namespace

KernelValues K_and_h(const RateFunction& u, const RateFunction& v, double R0, double r, int d) {
  u.validate();
  v.validate();
  if (d < 1) throw ConfigError("K_and_h: dimension must be >= 1");
  if (!(R0 >= 1.0) || !std::isfinite(R0)) throw ConfigError("K_and_h: need R0 >= 1");
  if (!(r >= R0)) throw ConfigError("K_and_h: need r >= R0");
  const double A = u.a - v.a;
  const double B = u.b - v.b;
  const double e = d - 1.0 - A;
  const double area = unit_sphere_area(d);
  const bool stretched = u.form == RateForm::stretched || v.form == RateForm::stretched;

  KernelValues out;
  if (std::isinf(r)) {
    if (stretched && e + 1.0 >= 0.0) throw ConfigError("K_and_h: infinite radius with a stretched kernel is unsupported");
    out.K = (A > 0.0 || (A == 0.0 && B > 0.0)) ? 0.0 : (A == 0.0 && B == 0.0 && !stretched ? 1.0 : kInf);
  } else {
    const bool log_form = u.form != RateForm::power || v.form != RateForm::power;
    if (log_form && r == 1.0) {
      // (log r)^{-B} at r = 1
      out.K = B > 0.0 ? kInf : (B < 0.0 ? 0.0 : 1.0);
    } else {
      out.K = std::exp(kernel_log(u, v, r));
    }
  }
  if (r == R0) return out;

  if (R0 == 1.0 && B >= 1.0 && (u.form != RateForm::power || v.form != RateForm::power)) {
    out.h = kInf;  // (log s)^{-B} is not integrable at s = 1
    return out;
  }
  if (!stretched) {
    if (auto h = closed_form(e, B, R0, r, area)) {
      out.h = *h;
      return out;
    }
  }
  // Quadrature in t = log s.
  auto integrand = [&](double t) {
    const double s = std::exp(t);
    if (!(s > 1.0)) return 0.0;
    return std::exp(d * t + kernel_log(u, v, s));
  };
  const double t0 = std::log(R0);
  if (std::isinf(r)) {
    if (e + 1.0 >= 0.0) {
      out.h = kInf;
      return out;
    }
    boost::math::quadrature::exp_sinh<double> quad;
    out.h = area * quad.integrate([&](double t) { return integrand(t0 + t); }, 0.0, kInf);
  } else {
    boost::math::quadrature::tanh_sinh<double> quad;
    out.h = area * quad.integrate(integrand, t0, std::log(r));
  }
  return out;
}

double upper_iteration(int p, double K, double h, double c3, double c4, double eta, double norm_f) {
  check_iteration_args(p, K, eta);
  if (!(c4 > 0.0 && c4 < 1.0)) throw ConfigError("upper_iteration: c4 must lie in (0,1)");
  if (!(c3 > 0.0) || !(norm_f >= 0.0) || !(h >= 0.0)) throw ConfigError("upper_iteration: need c3 > 0, |f| >= 0, h >= 0");
  return c3 * norm_f * (K * truncated_exp(p, eta * h) + std::pow(c4, p));
}

double upper_limit(double K, double h, double c3, double eta, double norm_f) {
  return c3 * norm_f * K * std::exp(eta * h);
}

double lower_iteration(int p, double K, double h, double h1, double eta) {
  check_iteration_args(p, K, eta);
  if (!(h >= h1)) throw ConfigError("lower_iteration: need h >= h1");
  return eta * K * truncated_exp(p, eta * (h - h1));
}

double lower_limit(double K, double h, double h1, double eta) { return eta * K * std::exp(eta * (h - h1)); }

}  // namespace zerolab::decaylab
