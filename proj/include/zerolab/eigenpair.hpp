#pragma once

#include "zerolab/point.hpp"
#include "zerolab/rate.hpp"

// The explicit zero-energy pair (V, phi) of the fractional Laplacian:
//   phi(x) = P(x) / (1+|x|^2)^kappa,   P = 1 (l = 0) or P(x) = x_axis (l = 1),
//   V(x)   = -(2^alpha / Gamma(kappa)) Gamma((mu+alpha)/2) Gamma(alpha/2+kappa)
//            (1+|x|^2)^kappa  F_reg((mu+alpha)/2, alpha/2+kappa; mu/2; -|x|^2),
// with mu = d + 2l and F_reg the regularized Gauss hypergeometric function.

namespace zerolab::eigenpair {

struct EigenpairSpec {
  int d = 1;
  double alpha = 1.0;
  int l = 0;
  int axis = 1;  ///< used only when l = 1
  double kappa = 1.0;

  double mu() const { return d + 2.0 * l; }

  /// Throws ConfigError unless d >= 1, alpha in (0,2), l in {0,1}, axis in [1,d], kappa > l.
  void validate() const;
  /// Throws ConfigError unless kappa lies in (l, (mu+alpha)/2), the range with a decay classification.
  void validate_classification_range() const;
};

enum class Sign { negative, positive };
const char* to_string(Sign s);

struct DecayClass {
  RateFunction rate;
  int row = 1;  ///< 1..4, in the order: generic, double power, logarithmic, slow power
  Sign sign_at_infinity = Sign::positive;
  bool l2_member = false;
  bool degenerate_log_case = false;
};

/// phi at a point of R^d (d <= kMaxDim).
double eigenfunction_value(const EigenpairSpec& spec, const Point& x);

/// phi as a function of |x| along the axis direction; for l = 0 this is the radial profile.
double eigenfunction_radial(const EigenpairSpec& spec, double r);

/// V at a point; V is radial, so only |x| matters.
double potential_value(const EigenpairSpec& spec, const Point& x);
double potential_radial(const EigenpairSpec& spec, double r);

DecayClass decay_class(const EigenpairSpec& spec);

/// True iff phi lies in L^p(R^d), decided by the strict shell criterion p (2 kappa - l) > d.
bool lp_membership(const EigenpairSpec& spec, double p);

}  // namespace zerolab::eigenpair
