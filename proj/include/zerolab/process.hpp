#pragma once

#include <string>

// Isotropic stable and layered stable Levy processes: jump density, symbol,
// maximal symbol and the Pruitt function. No sampling here.

namespace zerolab {

enum class ProcessFamily { isotropic_stable, layered_stable };

struct ProcessSpec {
  ProcessFamily family = ProcessFamily::isotropic_stable;
  int d = 1;
  double alpha = 1.0;
  double gamma = 3.0;  ///< large-jump index, layered only

  static ProcessSpec stable(int d, double alpha);
  static ProcessSpec layered(int d, double alpha, double gamma);

  /// Throws ConfigError unless alpha in (0,2), d >= 1 and (layered) gamma > 2.
  void validate() const;
  std::string describe() const;
};

/// Surface area of the unit sphere in R^d (2 for d = 1).
double unit_sphere_area(int d);

/// Jump-density constant C(d,alpha) = 2^alpha Gamma((d+alpha)/2) / (pi^{d/2} |Gamma(-alpha/2)|),
/// for which the isotropic stable symbol is exactly |xi|^alpha.
double stable_constant(int d, double alpha);

/// Radial jump density nu(rho); layered: C(d,alpha) rho^{-d-alpha} (1 v rho)^{-(gamma-alpha)}.
double jump_density(const ProcessSpec& proc, double rho);

/// Symbol psi at |xi| = r. Stable: r^alpha. Layered: the model surrogate r^2 for r <= 1, r^alpha above.
double symbol_psi(const ProcessSpec& proc, double r);

/// Maximal symbol Psi(r) = sup_{|xi| <= r} psi(xi); equal to symbol_psi for these radial, monotone symbols.
double maximal_symbol(const ProcessSpec& proc, double r);

/// Pruitt function H(r) = int min(1, |z|^2/r^2) nu(dz), by numerical quadrature.
double pruitt_h(const ProcessSpec& proc, double r);

/// Symbol computed from the jump density, int (1 - cos(r z_1)) nu(z) dz, by quadrature.
/// Used to check the normalization of nu.
double symbol_from_density(const ProcessSpec& proc, double r);

}  // namespace zerolab
