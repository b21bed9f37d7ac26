#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "zerolab/errors.hpp"
#include "zerolab/specfun.hpp"

namespace zerolab::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Step used to recover the c-derivative around a logarithmic connection case.
constexpr double kLogCaseStep = 1e-3;

double snap(double x) { return is_nonpositive_integer(x) ? std::round(x) : x; }

bool terminates(double x) { return x <= 0.0 && x == std::round(x); }

// Convergence bookkeeping shared by all series: stop once two consecutive
// terms are below machine precision relative to the partial sum, and fail
// only if the configured tolerance is still not met at the term cap.
class SeriesGuard {
 public:
  SeriesGuard(const HypOptions& opt, const char* what) : opt_(opt), what_(what) {}

  bool converged(double term, double sum) {
    const double scale = std::fabs(sum);
    if (std::fabs(term) <= kEps * scale || term == 0.0) {
      ++quiet_;
    } else {
      quiet_ = 0;
    }
    return quiet_ >= 2;
  }

  void check_cap(int n, double term, double sum) const {
    if (n < opt_.max_terms) return;
    if (std::fabs(term) <= opt_.rel_tol * std::fabs(sum)) return;
    throw NumericalError(std::string("hyp2f1: ") + what_ + " did not converge within " +
                         std::to_string(opt_.max_terms) + " terms");
  }

 private:
  const HypOptions& opt_;
  const char* what_;
  int quiet_ = 0;
};

double series_reg(double a, double b, double c, double w, const HypOptions& opt) {
  a = snap(a);
  b = snap(b);
  c = snap(c);
  if (w == 0.0) return rgamma(c);

  int n = 0;
  double term = 0.0;
  if (terminates(c)) {
    // Terms with c+n <= 0 vanish; restart at c+n = 1 where 1/Gamma = 1.
    const int n0 = 1 - static_cast<int>(std::round(c));
    term = 1.0;
    for (int k = 0; k < n0; ++k) term *= (a + k) * (b + k) * w / (k + 1);
    n = n0;
  } else {
    term = rgamma(c);
  }

  SeriesGuard guard(opt, "Maclaurin series");
  double sum = 0.0;
  for (;; ++n) {
    sum += term;
    if ((a + n) == 0.0 || (b + n) == 0.0) break;  // polynomial case
    if (guard.converged(term, sum)) break;
    guard.check_cap(n, term, sum);
    term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * w;
  }
  return sum;
}

// F_reg(a, b; a+b+m; 1-u) for integer m, via the digamma limit of the
// connection formula.
double log_connection(double a, double b, int m, double w, double u, const HypOptions& opt) {
  const double c = a + b + m;
  if (terminates(a) || terminates(b)) return series_reg(a, b, c, w, opt);
  if (m < 0) {
    // Euler transformation flips the sign of c-a-b.
    return std::pow(u, static_cast<double>(m)) * log_connection(c - a, c - b, -m, w, u, opt);
  }

  double finite_part = 0.0;
  if (m >= 1) {
    double t = 1.0;  // (a)_k (b)_k (-u)^k / k!
    double fact = std::tgamma(static_cast<double>(m));  // (m-k-1)!
    for (int k = 0; k < m; ++k) {
      finite_part += t * fact;
      t *= (a + k) * (b + k) * (-u) / (k + 1);
      if (m - k - 1 > 0) fact /= (m - k - 1);
    }
    finite_part *= rgamma(a + m) * rgamma(b + m);
  }

  const double pref = rgamma(a) * rgamma(b);
  if (pref == 0.0) return finite_part;

  const double log_u = std::log(u);
  double psi_1 = digamma(1.0);
  double psi_m1 = digamma(m + 1.0);
  double psi_a = digamma(a + m);
  double psi_b = digamma(b + m);
  double coef = 1.0 / std::tgamma(m + 1.0);  // (a+m)_k (b+m)_k u^k / (k! (k+m)!)

  SeriesGuard guard(opt, "logarithmic connection series");
  double sum = 0.0;
  for (int k = 0;; ++k) {
    const double term = coef * (log_u - psi_1 - psi_m1 + psi_a + psi_b);
    sum += term;
    if (guard.converged(term, sum)) break;
    guard.check_cap(k, term, sum);
    coef *= (a + m + k) * (b + m + k) * u / ((k + 1.0) * (k + m + 1.0));
    psi_1 += 1.0 / (k + 1.0);
    psi_m1 += 1.0 / (k + m + 1.0);
    psi_a += 1.0 / (a + m + k);
    psi_b += 1.0 / (b + m + k);
  }
  const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;
  return finite_part - sign_m * std::pow(u, m) * pref * sum;
}

double standard_connection(double a, double b, double c, double u, const HypOptions& opt) {
  const double s = c - a - b;
  const double left = rgamma(c - a) * rgamma(c - b) * series_reg(a, b, 1.0 - s, u, opt);
  const double right = std::pow(u, s) * rgamma(a) * rgamma(b) * series_reg(c - a, c - b, 1.0 + s, u, opt);
  return std::numbers::pi / sin_pi(s) * (left - right);
}

// F_reg(a,b;c;w) for w in [0,1), with u = 1-w supplied without cancellation.
double unit_interval_reg(double a, double b, double c, double w, double u, const HypOptions& opt) {
  a = snap(a);
  b = snap(b);
  c = snap(c);
  if (terminates(a) || terminates(b) || w <= 0.5) return series_reg(a, b, c, w, opt);

  const double s = c - a - b;
  const double m = std::round(s);
  const double offset = s - m;
  if (std::fabs(offset) > opt.log_case_threshold) return standard_connection(a, b, c, u, opt);

  const int mi = static_cast<int>(m);
  const double at_integer = log_connection(a, b, mi, w, u, opt);
  if (offset == 0.0) return at_integer;
  // Second-order Taylor expansion in c around the integer case.
  const double c0 = a + b + m;
  const double up = standard_connection(a, b, c0 + kLogCaseStep, u, opt);
  const double down = standard_connection(a, b, c0 - kLogCaseStep, u, opt);
  const double d1 = (up - down) / (2.0 * kLogCaseStep);
  const double d2 = (up - 2.0 * at_integer + down) / (kLogCaseStep * kLogCaseStep);
  return at_integer + offset * d1 + 0.5 * offset * offset * d2;
}

}  // namespace

double hyp2f1_reg_series(double a, double b, double c, double w, const HypOptions& opt) {
  return series_reg(a, b, c, w, opt);
}

double hyp2f1_reg(const HypParams& p, const HypOptions& opt) {
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c) || !std::isfinite(p.z)) {
    throw ConfigError("hyp2f1_reg: non-finite parameter");
  }
  if (p.z > 0.0) throw ConfigError("hyp2f1_reg: argument must satisfy z <= 0");
  if (p.z == 0.0) return rgamma(snap(p.c));

  const double u = 1.0 / (1.0 - p.z);  // 1 - w
  const double w = -p.z * u;           // z / (z - 1)
  if (opt.route == PfaffRoute::first) {
    return std::pow(u, p.a) * unit_interval_reg(p.a, p.c - p.b, p.c, w, u, opt);
  }
  return std::pow(u, p.b) * unit_interval_reg(p.c - p.a, p.b, p.c, w, u, opt);
}

double hyp2f1(const HypParams& p, const HypOptions& opt) {
  const SignedLog g = ln_gamma(p.c);
  return hyp2f1_reg(p, opt) * g.sign * std::exp(g.log_abs);
}

}  // namespace zerolab::specfun
