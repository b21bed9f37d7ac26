#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "zerolab/decaylab.hpp"
#include "zerolab/eigenpair.hpp"
#include "zerolab/errors.hpp"

using namespace zerolab;
using namespace zerolab::decaylab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
eigenpair::EigenpairSpec make(int d, double alpha, int l, double kappa) {
  eigenpair::EigenpairSpec s;
  s.d = d;
  s.alpha = alpha;
  s.l = l;
  s.kappa = kappa;
  return s;
}

std::vector<Sample> log_grid(double lo, double hi, int n, const std::function<double(double)>& f) {
  std::vector<Sample> out;
  for (int i = 0; i < n; ++i) {
    const double r = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    out.push_back({r, f(r)});
  }
  return out;
}
}  // namespace

TEST_CASE("K and h for equal rates is the shell volume", "[decaylab][kernel]") {
  for (int d = 1; d <= 3; ++d) {
    const auto u = RateFunction::power(1.7);
    const auto kh = K_and_h(u, u, 2.0, 5.0, d);
    CHECK_THAT(kh.K, WithinRel(1.0, 1e-15));
    const double ball_volume = unit_sphere_area(d) / d;
    CHECK_THAT(kh.h, WithinRel(ball_volume * (std::pow(5.0, d) - std::pow(2.0, d)), 1e-13));
  }
}

TEST_CASE("K and h for power rates", "[decaylab][kernel]") {
  const auto kh = K_and_h(RateFunction::power(2.0), RateFunction::power(1.0), 1.0, 7.0, 1);
  CHECK_THAT(kh.K, WithinRel(1.0 / 7.0, 1e-15));
  CHECK_THAT(kh.h, WithinRel(2.0 * std::log(7.0), 1e-15));

  const double alpha = 1.3, beta = 0.4;
  const auto tail = K_and_h(RateFunction::power(1.0 + alpha), RateFunction::power(beta), 1.0, INFINITY, 1);
  CHECK_THAT(tail.h, WithinRel(2.0 / (alpha - beta), 1e-14));
  CHECK(tail.K == 0.0);
  CHECK(std::isinf(K_and_h(RateFunction::power(1.0), RateFunction::power(1.0), 1.0, INFINITY, 1).h));
}

TEST_CASE("K and h closed forms agree with quadrature", "[decaylab][kernel]") {
  // A stretched rate with c = 0 is a power-log rate but takes the quadrature path.
  for (int d = 1; d <= 3; ++d) {
    for (double b : {-1.0, 0.5, 1.0, 2.5}) {
      const auto v = RateFunction::power(0.3);
      const double a = d + 0.3;  // integrand (log s)^{-b} / s
      const auto closed = K_and_h(RateFunction::power_log(a, b), v, 2.0, 1e5, d);
      const auto quad = K_and_h(RateFunction::stretched(a, b, 0.0, 0.5), v, 2.0, 1e5, d);
      INFO("d=" << d << " b=" << b);
      CHECK_THAT(quad.h, WithinRel(closed.h, 1e-10));
      CHECK_THAT(quad.K, WithinRel(closed.K, 1e-13));
    }
  }
  // Mixed case with no closed form: compare with a direct log-substituted sum.
  const auto kh = K_and_h(RateFunction::power_log(2.5, 1.5), RateFunction::power(1.0), 2.0, 50.0, 2);
  double ref = 0.0;
  const int n = 200000;
  const double t0 = std::log(2.0), t1 = std::log(50.0);
  for (int i = 0; i < n; ++i) {
    const double t = t0 + (i + 0.5) * (t1 - t0) / n;
    ref += std::exp(0.5 * t) * std::pow(t, -1.5) * (t1 - t0) / n;
  }
  CHECK_THAT(kh.h, WithinRel(2.0 * M_PI * ref, 1e-8));
  CHECK(std::isinf(K_and_h(RateFunction::power_log(2.5, 1.5), RateFunction::power(1.0), 1.0, 50.0, 2).h));
  CHECK_THROWS_AS(K_and_h(RateFunction::power(1.0), RateFunction::power(1.0), 0.5, 2.0, 1), ConfigError);
  CHECK_THROWS_AS(K_and_h(RateFunction::power(1.0), RateFunction::power(1.0), 2.0, 1.5, 1), ConfigError);
}

TEST_CASE("upper iteration", "[decaylab][iteration]") {
  CHECK_THAT(upper_iteration(1, 0.3, 5.0, 2.0, 0.5, 0.7, 1.5), WithinRel(2.0 * 1.5 * (0.3 + 0.5), 1e-15));
  double prev_sum = 0.0;
  for (int p = 1; p <= 60; ++p) {
    const double with = upper_iteration(p, 0.3, 5.0, 2.0, 0.5, 0.7, 1.5);
    const double sum = with - 3.0 * std::pow(0.5, p);
    CHECK(sum >= prev_sum * (1.0 - 1e-15));
    prev_sum = sum;
  }
  CHECK_THAT(upper_iteration(100, 0.3, 5.0, 2.0, 0.5, 0.7, 1.5),
             WithinRel(upper_limit(0.3, 5.0, 2.0, 0.7, 1.5), 1e-14));
  CHECK_THROWS_AS(upper_iteration(0, 1.0, 1.0, 1.0, 0.5, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(upper_iteration(3, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0), ConfigError);
}

TEST_CASE("lower iteration", "[decaylab][iteration]") {
  CHECK_THAT(lower_iteration(1, 0.4, 9.0, 2.0, 0.8), WithinRel(0.8 * 0.4, 1e-15));
  for (int p : {1, 5, 50}) CHECK(lower_iteration(p, 0.4, 2.0, 2.0, 0.8) == 0.8 * 0.4);
  CHECK_THAT(lower_iteration(100, 0.4, 9.0, 2.0, 0.8), WithinRel(lower_limit(0.4, 9.0, 2.0, 0.8), 1e-14));
  CHECK_THROWS_AS(lower_iteration(2, 0.4, 1.0, 2.0, 0.8), ConfigError);
}

TEST_CASE("iterations converge to their limits on random draws", "[decaylab][iteration]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double eta = 0.05 + 2.0 * unit(rng);
    const double h = 20.0 * unit(rng) / eta;
    const double K = 1e-3 + 10.0 * unit(rng);
    const double c3 = 0.1 + 5.0 * unit(rng);
    const double c4 = 0.01 + 0.69 * unit(rng);
    const double lim = upper_limit(K, h, c3, eta, 1.0);
    CHECK(std::fabs(upper_iteration(100, K, h, c3, c4, eta, 1.0) - lim) <= 1e-13 * lim);
    const double h1 = h * unit(rng);
    const double low = lower_limit(K, h, h1, eta);
    CHECK(std::fabs(lower_iteration(100, K, h, h1, eta) - low) <= 1e-13 * low);
  }
}

TEST_CASE("scenario classification examples", "[decaylab][scenario]") {
  const auto stable = ProcessSpec::stable(1, 1.0);
  CHECK(scenario_classify(stable, PotentialModel::power(0.5)) == 1);
  CHECK(scenario_classify(stable, PotentialModel::power(1.0)) == 3);
  CHECK(scenario_classify(stable, PotentialModel::power(1.5)) == 3);
  for (double delta : {0.3, 1.0}) CHECK(scenario_classify(stable, PotentialModel::power_log(1.0, delta)) == 2);
  CHECK(scenario_classify(stable, PotentialModel::power_log(1.0, 1.5)) == 1);
  const auto layered = ProcessSpec::layered(1, 1.0, 3.0);
  CHECK(scenario_classify(layered, PotentialModel::power(1.5)) == 1);
  CHECK(scenario_classify(layered, PotentialModel::power(2.0)) == 3);
  CHECK_THROWS_AS(scenario_classify(stable, PotentialModel::constant(0.0)), ConfigError);
}

TEST_CASE("scenario classification of the exact potentials", "[decaylab][scenario]") {
  for (int d = 1; d <= 3; ++d) {
    for (double alpha : {0.5, 1.0}) {
      const auto proc = ProcessSpec::stable(d, alpha);
      CHECK(scenario_classify(proc, PotentialModel::hypergeometric(make(d, alpha, 0, 0.5 * d + 0.3 * alpha))) == 1);
      CHECK(scenario_classify(proc, PotentialModel::hypergeometric(make(d, alpha, 0, 0.5 * d))) == 2);
      CHECK(scenario_classify(proc, PotentialModel::hypergeometric(make(d, alpha, 0, 0.5 * d - 0.3 * alpha))) == 3);
    }
  }
  CHECK_THROWS_AS(scenario_classify(ProcessSpec::stable(2, 1.0), PotentialModel::hypergeometric(make(1, 1.0, 0, 0.6))),
                  ConfigError);
  // negative at infinity
  CHECK_THROWS_AS(scenario_classify(ProcessSpec::stable(3, 1.0), PotentialModel::hypergeometric(make(3, 1.0, 0, 0.5))),
                  ConfigError);
}

TEST_CASE("scenario classification is stable on an (alpha, beta) grid", "[decaylab][scenario]") {
  for (int i = 0; i < 10; ++i) {
    const double alpha = 0.1 + 0.19 * i;
    for (int j = 0; j < 10; ++j) {
      const double beta = 0.1 + 0.19 * j;
      const int s = scenario_classify(ProcessSpec::stable(2, alpha), PotentialModel::power(beta));
      CHECK(s == (beta < alpha ? 1 : 3));
      CHECK(scenario_classify(ProcessSpec::stable(2, alpha), PotentialModel::power(beta)) == s);
    }
    CHECK(scenario_classify(ProcessSpec::stable(2, alpha), PotentialModel::power(alpha)) == 3);
  }
}

TEST_CASE("envelope predictions", "[decaylab][envelope]") {
  const auto stable = ProcessSpec::stable(1, 1.0);
  auto e = envelope_predict(stable, PotentialModel::power(0.5), SolutionTrait::positive);
  CHECK(e.scenario == 1);
  CHECK_THAT(e.lower->a, WithinAbs(1.5, 1e-15));
  CHECK_THAT(e.upper->a, WithinAbs(1.5, 1e-15));

  e = envelope_predict(stable, PotentialModel::hypergeometric(make(1, 1.0, 0, 0.75)), SolutionTrait::positive);
  CHECK(e.scenario == 1);
  CHECK_THAT(e.upper->a, WithinAbs(1.5, 1e-14));

  e = envelope_predict(ProcessSpec::layered(1, 1.0, 3.0), PotentialModel::power(1.0), SolutionTrait::positive);
  CHECK_THAT(e.lower->a, WithinAbs(3.0, 1e-15));
  e = envelope_predict(ProcessSpec::layered(2, 1.0, 3.0), PotentialModel::power(2.5), SolutionTrait::positive, 2.0);
  CHECK_THAT(e.lower->a, WithinAbs(3.0, 1e-15));
  CHECK_THAT(e.upper->a, WithinAbs(1.0, 1e-15));

  e = envelope_predict(stable, PotentialModel::power(1.5), SolutionTrait::positive);
  CHECK(e.scenario == 3);
  CHECK(e.lower);
  CHECK_FALSE(e.upper);
  REQUIRE(e.free_exponents.size() == 1);
  CHECK(e.free_exponents[0].name == "gamma");
  e = envelope_predict(stable, PotentialModel::power(1.5), SolutionTrait::positive, 4.0);
  CHECK_THAT(e.upper->a, WithinAbs(0.25, 1e-15));

  e = envelope_predict(stable, PotentialModel::power_log(1.0, 2.0), SolutionTrait::positive);
  CHECK(e.lower->form == RateForm::power_log);
  CHECK_THAT(e.lower->b, WithinAbs(2.0, 1e-15));
  e = envelope_predict(stable, PotentialModel::power_log(1.0, 1.0), SolutionTrait::positive);
  CHECK(e.scenario == 2);
  CHECK(e.free_exponents.size() == 2);
  e = envelope_predict(stable, PotentialModel::power_log(1.0, 0.5), SolutionTrait::positive);
  CHECK(e.upper->form == RateForm::stretched);
  CHECK(e.upper->delta == 0.5);

  CHECK_THROWS_AS(envelope_predict(stable, PotentialModel::power_log(0.7, 1.0), SolutionTrait::positive), ConfigError);
  CHECK_THROWS_AS(envelope_predict(stable, PotentialModel::power(1.5), SolutionTrait::positive, 1.0), ConfigError);
}

TEST_CASE("envelope identity over the first scenario range", "[decaylab][envelope]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const double alpha = 0.1 + 1.8 * unit(rng);
    const double kappa = 0.5 * d + 0.5 * alpha * (0.01 + 0.98 * unit(rng));
    const auto e = envelope_predict(ProcessSpec::stable(d, alpha), PotentialModel::hypergeometric(make(d, alpha, 0, kappa)),
                                    SolutionTrait::positive);
    CHECK(e.scenario == 1);
    CHECK_THAT(e.upper->a, WithinAbs(2.0 * kappa, 1e-12));
  }
}

TEST_CASE("sign-changing envelopes", "[decaylab][envelope]") {
  const auto e = envelope_predict(ProcessSpec::stable(1, 1.0), PotentialModel::power(0.25), SolutionTrait::antisymmetric);
  CHECK_FALSE(e.lower);
  REQUIRE(e.upper_axis_factor);
  CHECK_THAT(e.upper->a + e.upper_axis_factor->a, WithinAbs(2.5, 1e-15));
  CHECK_THAT(e.upper_log_value(10.0, false), WithinRel(-1.75 * std::log(10.0), 1e-14));

  const auto spec = make(1, 1.0, 1, 1.6);
  const auto neg = envelope_predict(ProcessSpec::stable(1, 1.0), PotentialModel::hypergeometric(spec), SolutionTrait::antisymmetric);
  CHECK_THAT(neg.upper->a + neg.upper_axis_factor->a, WithinAbs(4.0 * (1.6 - 1.0) - 1.0, 1e-12));

  const auto spec_neg = make(3, 1.0, 1, 1.5);
  REQUIRE(PotentialModel::hypergeometric(spec_neg).sign_at_infinity() == eigenpair::Sign::negative);
  const auto n = envelope_predict(ProcessSpec::stable(3, 1.0), PotentialModel::hypergeometric(spec_neg),
                                  SolutionTrait::negative_potential, 2.0);
  CHECK(n.scenario == 0);
  CHECK_THAT(n.upper->a, WithinAbs(1.5, 1e-15));
  CHECK(n.free_exponents.at(0).name == "q");
  CHECK_THROWS_AS(envelope_predict(ProcessSpec::stable(3, 1.0), PotentialModel::hypergeometric(spec_neg),
                                   SolutionTrait::negative_potential),
                  ConfigError);
  CHECK_THROWS_AS(envelope_predict(ProcessSpec::layered(1, 1.0, 3.0), PotentialModel::power(0.5), SolutionTrait::antisymmetric),
                  ConfigError);
}

TEST_CASE("decay fits recover exact data", "[decaylab][fit]") {
  const auto f = fit_decay(log_grid(1.0, 1e4, 30, [](double r) { return 5.0 * std::pow(r, -3.0); }));
  CHECK_THAT(f.rate.a, WithinAbs(3.0, 1e-10));
  CHECK_THAT(f.log_amplitude, WithinAbs(std::log(5.0), 1e-9));
  CHECK(f.rms_residual < 1e-12);

  const auto spec = make(1, 1.0, 0, 1.2);
  const auto phi = fit_decay(log_grid(1e2, 1e6, 40, [&](double r) { return eigenpair::eigenfunction_radial(spec, r); }));
  CHECK_THAT(phi.rate.a, WithinAbs(2.4, 0.01));

  const auto pl = fit_decay(log_grid(10.0, 1e6, 40, [](double r) { return 2.0 / (r * std::pow(std::log(r), 2.0)); }),
                            RateForm::power_log);
  CHECK_THAT(pl.rate.a, WithinAbs(1.0, 0.05));
  CHECK_THAT(pl.rate.b, WithinAbs(2.0, 0.05));
}

TEST_CASE("decay fits round-trip random rate functions", "[decaylab][fit]") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const auto pw = RateFunction::power(4.0 * unit(rng) - 1.0);
    CHECK_THAT(fit_decay(log_grid(2.0, 1e5, 25, pw)).rate.a, WithinAbs(pw.a, 1e-9));
    const auto pl = RateFunction::power_log(3.0 * unit(rng), 4.0 * unit(rng) - 2.0);
    const auto fpl = fit_decay(log_grid(3.0, 1e6, 25, pl), RateForm::power_log);
    CHECK_THAT(fpl.rate.a, WithinAbs(pl.a, 1e-8));
    CHECK_THAT(fpl.rate.b, WithinAbs(pl.b, 1e-8));
    const double delta = 0.02 * (1 + static_cast<int>(rng() % 49));
    const auto st = RateFunction::stretched(2.0 * unit(rng), 2.0 * unit(rng), 1.0 + unit(rng), delta);
    const auto fst = fit_decay(log_grid(3.0, 1e8, 40, st), RateForm::stretched);
    CHECK_THAT(fst.rate.delta, WithinAbs(delta, 1e-9));
    CHECK_THAT(fst.rate.a, WithinAbs(st.a, 1e-5));
    CHECK_THAT(fst.rate.c, WithinAbs(st.c, 1e-5));
  }
}

TEST_CASE("decay fit errors", "[decaylab][fit]") {
  auto ok = log_grid(1.0, 1e4, 10, [](double r) { return 1.0 / r; });
  CHECK_NOTHROW(fit_decay(ok));
  auto few = ok;
  few.resize(5);
  CHECK_THROWS_AS(fit_decay(few), ConfigError);
  auto neg = ok;
  neg[3].value = -1.0;
  CHECK_THROWS_AS(fit_decay(neg), ConfigError);
  CHECK_THROWS_AS(fit_decay(log_grid(1.0, 50.0, 10, [](double r) { return 1.0 / r; })), ConfigError);
  CHECK_THROWS_AS(fit_decay(ok, RateForm::power_log), ConfigError);
  std::vector<Sample> flat(10);
  for (int i = 0; i < 10; ++i) flat[i] = {i < 5 ? 1.0 + 1e-14 * i : 1e4 * (1.0 + 1e-14 * i), 1.0};
  std::sort(flat.begin(), flat.end(), [](const Sample& a, const Sample& b) { return a.r < b.r; });
  CHECK_THROWS(fit_decay(flat, RateForm::power_log));
}

TEST_CASE("envelope checks", "[decaylab][envelope]") {
  const auto spec = make(1, 1.0, 0, 0.75);
  const auto proc = ProcessSpec::stable(1, 1.0);
  const auto pred = envelope_predict(proc, PotentialModel::hypergeometric(spec), SolutionTrait::positive);
  const auto phi = log_grid(1.0, 1e6, 60, [&](double r) { return eigenpair::eigenfunction_radial(spec, r); });
  const auto c = check_envelope(phi, pred);
  CHECK(c.pass);
  CHECK(c.lower_ratio_max / c.lower_ratio_min < 10.0);

  const auto faster = log_grid(1.0, 1e6, 60, [](double r) { return std::pow(r, -2.5); });
  EnvelopePrediction upper_only;
  upper_only.upper = RateFunction::power(1.5);
  upper_only.lower = RateFunction::power(1.5);
  const auto f = check_envelope(faster, upper_only);
  CHECK(f.upper_pass);
  CHECK_FALSE(f.lower_pass);
  CHECK_FALSE(f.pass);

  EnvelopePrediction empty;
  CHECK_THROWS_AS(check_envelope(faster, empty), ConfigError);
  EnvelopePrediction far;
  far.upper = RateFunction::power(1.0, 1e9);
  CHECK_THROWS_AS(check_envelope(faster, far), ConfigError);
}

TEST_CASE("envelope checks profile free exponents", "[decaylab][envelope]") {
  // kappa = d/2: log case with gamma1 <= 1 <= gamma2
  const auto spec = make(1, 1.0, 0, 0.5);
  const auto pred = envelope_predict(ProcessSpec::stable(1, 1.0), PotentialModel::hypergeometric(spec), SolutionTrait::positive);
  REQUIRE(pred.scenario == 2);
  const auto phi = log_grid(2.0, 1e6, 60, [&](double r) { return eigenpair::eigenfunction_radial(spec, r); });
  const auto c = check_envelope(phi, pred);
  CHECK(c.pass);
  CHECK(c.profiled.size() == 2);

  // kappa < d/2: lower r^-(d - gamma) with gamma in (0,1); phi decays like r^-2 kappa
  const auto weak = make(1, 1.0, 0, 0.3);
  const auto wp = envelope_predict(ProcessSpec::stable(1, 1.0), PotentialModel::hypergeometric(weak), SolutionTrait::positive,
                                   1.0 / (2.0 * 0.3) + 0.5);
  REQUIRE(wp.scenario == 3);
  const auto wphi = log_grid(1.0, 1e6, 60, [&](double r) { return eigenpair::eigenfunction_radial(weak, r); });
  const auto wc = check_envelope(wphi, wp);
  CHECK(wc.pass);
  REQUIRE(wc.profiled.size() == 1);
  CHECK_THAT(wc.profiled[0].second, WithinAbs(0.4, 0.02));
}

TEST_CASE("antisymmetric eigenfunctions satisfy the corollary upper bound", "[decaylab][envelope]") {
  for (double kappa : {1.6, 1.75, 1.9}) {
    const auto spec = make(1, 1.0, 1, kappa);
    const auto pred =
        envelope_predict(ProcessSpec::stable(1, 1.0), PotentialModel::hypergeometric(spec), SolutionTrait::antisymmetric);
    const auto phi = log_grid(1.0, 1e6, 60, [&](double r) { return std::fabs(eigenpair::eigenfunction_radial(spec, r)); });
    const auto c = check_envelope(phi, pred);
    INFO("kappa=" << kappa);
    CHECK(c.upper_pass);
    CHECK(c.upper_ratio_max / c.upper_ratio_min > 1.0);
  }
}
