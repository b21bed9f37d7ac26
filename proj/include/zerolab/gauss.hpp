#pragma once

#include <vector>

namespace zerolab {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule; thread-safe. Throws ConfigError for n < 1.
const GaussRule& gauss_legendre(int n);

}  // namespace zerolab
