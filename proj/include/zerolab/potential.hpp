#pragma once

#include <string>

#include "zerolab/eigenpair.hpp"
#include "zerolab/rate.hpp"

namespace zerolab {

enum class PotentialFamily { hypergeometric, power, power_log, constant };

/// Radial potential models. Away from the origin:
///   hypergeometric: the exact potential of an eigenpair spec
///   power:          r^{-beta} for r >= r0, frozen at r0^{-beta} inside
///   power_log:      r^{-alpha} (log r)^delta for r >= r0, frozen at its r0 value inside
///   constant:       V = level everywhere (for oracle checks)
struct PotentialModel {
  PotentialFamily family = PotentialFamily::power;
  eigenpair::EigenpairSpec spec;  ///< hypergeometric only
  double beta = 1.0;              ///< power only
  double alpha = 1.0;             ///< power_log only
  double delta = 1.0;             ///< power_log only
  double r0 = 1.0;
  double level = 0.0;  ///< constant only

  static PotentialModel hypergeometric(const eigenpair::EigenpairSpec& spec);
  static PotentialModel power(double beta, double r0 = 1.0);
  static PotentialModel power_log(double alpha, double delta, double r0 = 2.0);
  static PotentialModel constant(double level);

  void validate() const;

  double value(double r) const;

  /// Sign of V for large r.
  eigenpair::Sign sign_at_infinity() const;

  /// |V(r)| ~ r^{-tail_power} (log r)^{log_power} as r -> infinity.
  double tail_power() const;
  double log_power() const;

  /// The tail |V| as a rate function (power or power_log with b = -log_power).
  RateFunction tail_rate() const;

  /// Outer envelope sup_{|y| >= r/2} V(y).
  double outer_sup(double r) const;
  /// Annulus envelope inf_{r0 <= |y| <= 3r/2} V(y), for r >= r0.
  double annulus_inf(double r) const;

  std::string describe() const;
};

const char* to_string(PotentialFamily f);

}  // namespace zerolab
