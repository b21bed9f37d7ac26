#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "zerolab/errors.hpp"
#include "zerolab/process.hpp"
#include "zerolab/rate.hpp"

using namespace zerolab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("unit sphere areas", "[core]") {
  CHECK_THAT(unit_sphere_area(1), WithinRel(2.0, 1e-14));
  CHECK_THAT(unit_sphere_area(2), WithinRel(2.0 * std::numbers::pi, 1e-14));
  CHECK_THAT(unit_sphere_area(3), WithinRel(4.0 * std::numbers::pi, 1e-14));
}

TEST_CASE("stable constant closed forms", "[core]") {
  // Cauchy in d = 1: nu(z) = 1/(pi z^2)
  CHECK_THAT(stable_constant(1, 1.0), WithinRel(1.0 / std::numbers::pi, 1e-14));
  // d = 3, alpha = 1: 1/pi^2
  CHECK_THAT(stable_constant(3, 1.0), WithinRel(1.0 / (std::numbers::pi * std::numbers::pi), 1e-14));
}

TEST_CASE("jump density normalization reproduces |xi|^alpha", "[core][property]") {
  for (int d = 1; d <= 3; ++d) {
    for (double alpha : {0.3, 1.0, 1.6}) {
      const auto proc = ProcessSpec::stable(d, alpha);
      INFO("d=" << d << " alpha=" << alpha);
      CHECK_THAT(symbol_from_density(proc, 1.0), WithinRel(1.0, 1e-6));
      CHECK_THAT(symbol_from_density(proc, 2.5), WithinRel(std::pow(2.5, alpha), 1e-6));
    }
  }
}

TEST_CASE("symbols and maximal symbols", "[core]") {
  CHECK_THAT(maximal_symbol(ProcessSpec::stable(1, 1.5), 2.0), WithinRel(std::pow(2.0, 1.5), 1e-15));
  CHECK(maximal_symbol(ProcessSpec::layered(1, 1.2, 3.0), 0.5) == 0.25);
  // doubling: Psi(2r)/Psi(r) <= 4
  for (double alpha : {0.2, 1.0, 1.9}) {
    for (double r : {1e-3, 0.5, 1.0, 7.0}) {
      const auto stable = ProcessSpec::stable(2, alpha);
      const auto layered = ProcessSpec::layered(2, alpha, 3.5);
      CHECK(maximal_symbol(stable, 2 * r) / maximal_symbol(stable, r) <= 4.0);
      CHECK(maximal_symbol(layered, 2 * r) / maximal_symbol(layered, r) <= 4.0 + 1e-12);
    }
  }
}

TEST_CASE("Pruitt function matches the stable closed form", "[core]") {
  for (int d = 1; d <= 3; ++d) {
    for (double alpha : {0.5, 1.0, 1.5}) {
      const auto proc = ProcessSpec::stable(d, alpha);
      for (double r : {1e-3, 1.0, 1e3}) {
        const double expected =
            unit_sphere_area(d) * stable_constant(d, alpha) * std::pow(r, -alpha) * (1.0 / (2.0 - alpha) + 1.0 / alpha);
        CHECK_THAT(pruitt_h(proc, r), WithinRel(expected, 1e-8));
      }
    }
  }
}

TEST_CASE("Pruitt sandwich for the layered surrogate", "[core][property]") {
  const auto proc = ProcessSpec::layered(1, 1.2, 3.0);
  double lo = 1e300, hi = 0.0;
  for (double r = 1e-3; r <= 1e3; r *= 1.5) {
    const double ratio = maximal_symbol(proc, r) / pruitt_h(proc, 1.0 / r);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(lo > 0.0);
  CHECK(hi / lo < 20.0);
}

TEST_CASE("rate function evaluation", "[core]") {
  CHECK_THAT(RateFunction::power(2.0)(10.0), WithinRel(0.01, 1e-14));
  CHECK_THAT(RateFunction::power_log(1.0, 2.0)(std::exp(1.0)), WithinRel(std::exp(-1.0), 1e-14));
  const auto s = RateFunction::stretched(1.0, 0.5, 0.3, 0.5);
  const double r = 100.0;
  const double lr = std::log(r);
  CHECK_THAT(s.log_value(r), WithinRel(0.3 / 0.5 * std::sqrt(lr) - lr - 0.5 * std::log(lr), 1e-14));
  CHECK_THROWS_AS(RateFunction::power_log(1, 1).log_value(0.5), ConfigError);
  CHECK_THROWS_AS(RateFunction::stretched(1, 1, 1, 1.5).validate(), ConfigError);
}
