#pragma once

#include <array>
#include <functional>
#include <vector>

#include "zerolab/eigenpair.hpp"
#include "zerolab/point.hpp"

// Fractional Laplacian by singular-integral quadrature:
//   (-Delta)^{alpha/2} f(x) = C(d,alpha) int (f(x) - (f(x+z) + f(x-z))/2) |z|^{-d-alpha} dz,
// evaluated in polar coordinates around x. Radial panels are Gauss-Legendre in log|z|,
// one per decade, refined near |z| = |x - c| where c is the centre of the field's
// structure; angular rules are graded toward the direction of x - c.

namespace zerolab::fraclap {

struct QuadConfig {
  double inner_radius = 1e-2;
  double outer_radius = 1e6;
  int nodes_per_decade = 64;
  /// Gauss-Legendre nodes per angular panel (d = 2, and the polar angle for d = 3);
  /// also the number of azimuthal nodes for d = 3. Ignored for d = 1.
  int angular_nodes = 32;
  /// 1: tail beyond outer_radius keeps only the f(x) term; 2: adds the power-law decay of the shifted average.
  int tail_order = 2;
  /// Absolute error allowed between the full rule and a half-resolution rule; 0 disables the check.
  double tolerance = 0.0;
  /// Centre and length scale of the field's structure (used only to place nodes).
  std::array<double, kMaxDim> feature_center{};
  double feature_scale = 1.0;
  /// Threads used by residual(); results do not depend on it.
  int workers = 1;

  void validate() const;
};

using Field = std::function<double(const Point&)>;

/// Throws NumericalError unless the jump density integrates to the symbol |xi|^alpha
/// at |xi| = 1 within 1e-6.
void check_normalization(int d, double alpha);

/// (-Delta)^{alpha/2} f at x, for d <= 3. Throws NumericalError on non-finite field values or,
/// when cfg.tolerance > 0, when the half-resolution estimate disagrees by more than the tolerance.
double frac_laplacian(const Field& f, double alpha, const Point& x, const QuadConfig& cfg = {});

struct ResidualRow {
  Point x;
  double laplacian = 0.0;  ///< (-Delta)^{alpha/2} phi
  double potential_term = 0.0;  ///< V phi
  double residual = 0.0;
  double relative = 0.0;  ///< residual / (|laplacian| + |potential_term|)
  bool has_relative = false;  ///< false where phi vanishes; only the absolute residual is meaningful there
};

struct ResidualReport {
  double max_abs = 0.0;
  double max_rel = 0.0;
  std::vector<ResidualRow> rows;
};

/// Residual of the zero-energy equation for the eigenpair at each grid point.
ResidualReport residual(const eigenpair::EigenpairSpec& spec, const std::vector<Point>& grid,
                        const QuadConfig& cfg = {});

}  // namespace zerolab::fraclap
