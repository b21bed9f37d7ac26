#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "zerolab/errors.hpp"
#include "zerolab/process.hpp"
#include "zerolab/specfun.hpp"

namespace zerolab {
namespace {

constexpr double kPi = std::numbers::pi;

// 1 - (average of cos(t theta_1) over the unit sphere in R^d).
double one_minus_sphere_cos(int d, double t) {
  const double nu = 0.5 * d - 1.0;
  if (t < 1.0) {
    // 1 - Gamma(d/2) sum_k (-1)^k (t/2)^{2k} / (k! Gamma(d/2+k)), k >= 1
    const double q = 0.25 * t * t;
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 40; ++k) {
      term *= -q / (k * (nu + k));
      sum += term;
      if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    return -sum;
  }
  if (d == 1) return 1.0 - std::cos(t);
  if (d == 3) return 1.0 - std::sin(t) / t;
  const double lg = specfun::ln_gamma(0.5 * d).log_abs;
  return 1.0 - std::exp(lg + nu * std::log(2.0 / t)) * std::cyl_bessel_j(nu, t);
}

// nu(rho) rho^k, formed without overflow near the origin.
double density_times_power(const ProcessSpec& proc, double rho, double k) {
  if (rho <= 0.0) return 0.0;
  double v = stable_constant(proc.d, proc.alpha) * std::pow(rho, k - proc.d - proc.alpha);
  if (proc.family == ProcessFamily::layered_stable && rho > 1.0) v *= std::pow(rho, -(proc.gamma - proc.alpha));
  return v;
}

}  // namespace

ProcessSpec ProcessSpec::stable(int d, double alpha) {
  ProcessSpec p;
  p.family = ProcessFamily::isotropic_stable;
  p.d = d;
  p.alpha = alpha;
  return p;
}

ProcessSpec ProcessSpec::layered(int d, double alpha, double gamma) {
  ProcessSpec p = stable(d, alpha);
  p.family = ProcessFamily::layered_stable;
  p.gamma = gamma;
  return p;
}

void ProcessSpec::validate() const {
  if (d < 1) throw ConfigError("process: dimension must be >= 1");
  if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("process: alpha must lie in (0,2)");
  if (family == ProcessFamily::layered_stable && !(gamma > 2.0)) {
    throw ConfigError("process: layered gamma must exceed 2");
  }
}

std::string ProcessSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (family == ProcessFamily::isotropic_stable) {
    os << "isotropic_stable(d=" << d << ", alpha=" << alpha << ")";
  } else {
    os << "layered_stable(d=" << d << ", alpha=" << alpha << ", gamma=" << gamma << ")";
  }
  return os.str();
}

double unit_sphere_area(int d) {
  if (d < 1) throw ConfigError("unit_sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * d) * specfun::rgamma(0.5 * d);
}

double stable_constant(int d, double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("stable_constant: alpha must lie in (0,2)");
  const double log_c = alpha * std::log(2.0) + specfun::ln_gamma(0.5 * (d + alpha)).log_abs -
                       0.5 * d * std::log(kPi) - specfun::ln_gamma(-0.5 * alpha).log_abs;
  return std::exp(log_c);
}

double jump_density(const ProcessSpec& proc, double rho) { return density_times_power(proc, rho, 0.0); }

double symbol_psi(const ProcessSpec& proc, double r) {
  if (proc.family == ProcessFamily::isotropic_stable) return std::pow(r, proc.alpha);
  return r <= 1.0 ? r * r : std::pow(r, proc.alpha);
}

double maximal_symbol(const ProcessSpec& proc, double r) { return symbol_psi(proc, r); }

double pruitt_h(const ProcessSpec& proc, double r) {
  if (!(r > 0.0)) throw ConfigError("pruitt_h: radius must be positive");
  const int d = proc.d;
  const double area = unit_sphere_area(d);
  auto inner = [&](double rho) { return density_times_power(proc, rho, d + 1.0) / (r * r); };
  auto outer = [&](double rho) { return density_times_power(proc, rho, d - 1.0); };

  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  // Split at rho = r (kink of the truncation) and rho = 1 (layered kink).
  const double kink = (proc.family == ProcessFamily::layered_stable) ? 1.0 : r;
  double total = 0.0;
  if (kink < r) {
    total += ts.integrate(inner, 0.0, kink) + ts.integrate(inner, kink, r);
    total += es.integrate([&](double t) { return outer(r + t); });
  } else {
    total += ts.integrate(inner, 0.0, r);
    if (kink > r) {
      total += ts.integrate(outer, r, kink);
    }
    total += es.integrate([&](double t) { return outer(kink + t); });
  }
  return area * total;
}

double symbol_from_density(const ProcessSpec& proc, double r) {
  if (!(r > 0.0)) throw ConfigError("symbol_from_density: radius must be positive");
  const int d = proc.d;
  auto integrand = [&](double rho) {
    return density_times_power(proc, rho, d - 1.0) * one_minus_sphere_cos(d, r * rho);
  };
  using Rule = boost::math::quadrature::gauss<double, 20>;

  // Geometric panels toward the origin, then half-periods of the oscillation.
  const double period = kPi / r;
  double total = 0.0;
  double hi = period;
  for (int k = 0; k < 80; ++k) {
    const double lo = 0.5 * hi;
    total += Rule::integrate(integrand, lo, hi);
    hi = lo;
  }
  // Below hi the integrand is ~ rho^{1-alpha} r^2 C / (2d); integrate that analytically.
  total += density_times_power(proc, hi, d + 2.0) * r * r / (2.0 * d * (2.0 - proc.alpha));

  constexpr int kPeriods = 8000;
  double tail_start = period;
  for (int k = 0; k < kPeriods; ++k) {
    const double lo = period * (1 + k);
    total += Rule::integrate(integrand, lo, lo + period);
  }
  tail_start = period * (1 + kPeriods);
  // Beyond the last panel the cosine average is negligible; integrate nu alone.
  boost::math::quadrature::exp_sinh<double> es;
  total += es.integrate([&](double t) { return density_times_power(proc, tail_start + t, d - 1.0); });
  return unit_sphere_area(d) * total;
}

}  // namespace zerolab
