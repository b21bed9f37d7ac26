#pragma once

#include <string>

namespace zerolab {

enum class RateForm { power, power_log, stretched };

/// Asymptotic decay profile, evaluated for r > 1:
///   power:      r^{-a}
///   power_log:  r^{-a} (log r)^{-b}
///   stretched:  exp(c/(1-delta) (log r)^{1-delta}) r^{-a} (log r)^{-b}
struct RateFunction {
  RateForm form = RateForm::power;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double delta = 0.5;
  double valid_from = 1.0;

  static RateFunction power(double a, double valid_from = 1.0);
  static RateFunction power_log(double a, double b, double valid_from = 1.0);
  static RateFunction stretched(double a, double b, double c, double delta, double valid_from = 1.0);

  /// Natural log of the rate at r; requires r > 1 unless the form is a pure power.
  double log_value(double r) const;
  double operator()(double r) const;

  /// Throws ConfigError if the parameters violate the form's invariants.
  void validate() const;

  std::string describe() const;
};

const char* to_string(RateForm f);

}  // namespace zerolab
