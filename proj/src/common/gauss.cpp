#include "zerolab/gauss.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <map>
#include <memory>
#include <mutex>

#include "zerolab/errors.hpp"

namespace zerolab {

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    auto rule = std::make_unique<GaussRule>();
    auto weight = [n](double x) {
      const double dp = boost::math::legendre_p_prime(n, x);
      return 2.0 / ((1.0 - x * x) * dp * dp);
    };
    // Boost returns the non-negative zeros in increasing order; mirror them.
    const auto zeros = boost::math::legendre_p_zeros<double>(n);
    for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
      if (*it == 0.0) continue;
      rule->nodes.push_back(-*it);
      rule->weights.push_back(weight(*it));
    }
    for (double x : zeros) {
      rule->nodes.push_back(x);
      rule->weights.push_back(weight(x));
    }
    slot = std::move(rule);
  }
  return *slot;
}

}  // namespace zerolab
