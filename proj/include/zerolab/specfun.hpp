#pragma once

// Special functions needed by the zero-energy eigenpair family: log-Gamma with
// sign tracking, reciprocal Gamma, digamma, and the regularized Gauss
// hypergeometric function on the non-positive real axis.
//
// Everything here is a pure function of its arguments.

namespace zerolab::specfun {

/// log|Gamma(x)| together with the sign of Gamma(x).
struct SignedLog {
  double log_abs = 0.0;
  int sign = 1;
};

/// Throws PoleError at x in {0, -1, -2, ...}.
SignedLog ln_gamma(double x);

/// 1/Gamma(x); exactly zero at the poles of Gamma.
double rgamma(double x);

/// Digamma function psi(x) = Gamma'(x)/Gamma(x). Throws PoleError at poles.
double digamma(double x);

/// sin(pi x) with exact zeros at the integers.
double sin_pi(double x);

/// True when x is a non-positive integer up to a few ulps.
bool is_nonpositive_integer(double x);

struct HypParams {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double z = 0.0;  ///< must be <= 0
};

/// Which Pfaff transformation maps z <= 0 into [0, 1).
///   first:  F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1))
///   second: F(a,b;c;z) = (1-z)^{-b} F(c-a, b; c; z/(z-1))
enum class PfaffRoute { first, second };

struct HypOptions {
  double rel_tol = 1e-10;
  int max_terms = 10000;
  /// |c-a-b - nearest integer| below this selects the logarithmic connection.
  double log_case_threshold = 1e-6;
  PfaffRoute route = PfaffRoute::first;
};

/// 2F1(a,b;c;z)/Gamma(c) for z <= 0. Finite for every real c.
/// Throws ConfigError for z > 0 and NumericalError if a series does not reach
/// rel_tol within max_terms terms.
double hyp2f1_reg(const HypParams& p, const HypOptions& opt = {});

/// Unregularized 2F1, i.e. hyp2f1_reg * Gamma(c). Throws PoleError when c is a pole.
double hyp2f1(const HypParams& p, const HypOptions& opt = {});

/// Regularized Maclaurin series sum_n (a)_n (b)_n w^n / (Gamma(c+n) n!) for |w| < 1.
/// Exposed for the transformation tests; the public entry point is hyp2f1_reg.
double hyp2f1_reg_series(double a, double b, double c, double w, const HypOptions& opt = {});

}  // namespace zerolab::specfun
