#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <spdlog/spdlog.h>

#include "zerolab/decaylab.hpp"
#include "zerolab/eigenpair.hpp"
#include "zerolab/errors.hpp"
#include "zerolab/fraclap.hpp"
#include "zerolab/levysim.hpp"
#include "zerolab/verify.hpp"

namespace zerolab::cli {
namespace {

using eigenpair::EigenpairSpec;

EigenpairSpec make_spec(int d, double alpha, int l, double kappa) {
  EigenpairSpec s;
  s.d = d;
  s.alpha = alpha;
  s.l = l;
  s.kappa = kappa;
  return s;
}

Json spec_json(const EigenpairSpec& s) { return Json{{"d", s.d}, {"alpha", s.alpha}, {"l", s.l}, {"kappa", s.kappa}}; }

std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return out;
}

std::vector<Point> axis_points(int d, const std::vector<double>& radii) {
  std::vector<Point> out;
  for (double r : radii) out.push_back(Point::on_axis(d, r));
  return out;
}

std::size_t paths_or(const VerifyOptions& o, std::size_t fallback) { return o.paths > 0 ? o.paths : fallback; }

levysim::PathConfig path_config(const VerifyOptions& o, double dt, std::size_t n) {
  levysim::PathConfig c;
  c.dt = dt;
  c.n_paths = n;
  c.seed = o.seed;
  c.workers = o.workers;
  return c;
}

Json estimate_json(const levysim::MCEstimate& e) {
  return Json{{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n}, {"seed", e.seed}};
}

double getoor_mean(int d, double alpha, double r) {
  return std::pow(r, alpha) * std::tgamma(0.5 * d) /
         (std::pow(2.0, alpha) * std::tgamma(1.0 + 0.5 * alpha) * std::tgamma(0.5 * (d + alpha)));
}

Verdict closed_form_residual(const VerifyOptions& o) {
  Verdict v;
  const auto spec = make_spec(1, 1.0, 0, 1.0);
  std::vector<double> radii{0.0};
  for (double r : log_space(1e-2, 10.0, 29)) radii.push_back(r);
  fraclap::QuadConfig cfg;
  cfg.workers = o.workers;
  const auto rep = fraclap::residual(spec, axis_points(1, radii), cfg);
  v.measured = {{"spec", spec_json(spec)}, {"points", radii.size()}, {"max_rel", rep.max_rel}, {"max_abs", rep.max_abs}};
  v.tolerance = {{"max_rel", 1e-6}, {"runtime_s", 10.0}};
  v.pass = rep.max_rel <= 1e-6;
  return v;
}

Verdict hypergeometric_residuals(const VerifyOptions& o) {
  Verdict v;
  const std::vector<EigenpairSpec> specs{make_spec(1, 1.0, 0, 0.6), make_spec(2, 1.0, 0, 0.75), make_spec(1, 0.5, 0, 0.2),
                                         make_spec(3, 1.0, 0, 1.0)};
  const auto radii = log_space(0.1, 20.0, 12);
  v.pass = true;
  Json rows = Json::array();
  for (const auto& spec : specs) {
    const auto grid = axis_points(spec.d, radii);
    fraclap::QuadConfig full;
    full.workers = o.workers;
    const auto rep = fraclap::residual(spec, grid, full);
    fraclap::QuadConfig coarse = full, refined = full;
    coarse.nodes_per_decade = 8;
    refined.nodes_per_decade = 16;
    const double rc = fraclap::residual(spec, grid, coarse).max_rel;
    const double rr = fraclap::residual(spec, grid, refined).max_rel;
    const double shrink = rc / rr;
    const bool ok = rep.max_rel <= 1e-4 && shrink >= 4.0;
    v.pass = v.pass && ok;
    rows.push_back({{"spec", spec_json(spec)}, {"max_rel", rep.max_rel}, {"max_rel_8_nodes", rc},
                    {"max_rel_16_nodes", rr}, {"shrink", shrink}, {"pass", ok}});
  }
  v.measured = {{"points_per_spec", radii.size()}, {"specs", rows}};
  v.tolerance = {{"max_rel", 1e-4}, {"min_shrink_per_doubling", 4.0}, {"runtime_s", 300.0}};
  return v;
}

Verdict decay_table(const VerifyOptions&) {
  Verdict v;
  struct Row {
    EigenpairSpec spec;
    double expected;
    bool log_case;
  };
  const std::vector<Row> table{{make_spec(1, 1.0, 0, 0.15), 1.0, false},
                               {make_spec(3, 1.0, 0, 1.0), 2.0, false},
                               {make_spec(1, 1.0, 0, 0.5), 1.0, true},
                               {make_spec(1, 1.0, 0, 0.75), 0.5, false}};
  v.pass = true;
  Json rows = Json::array();
  for (const auto& row : table) {
    std::vector<decaylab::Sample> samples;
    for (double r : log_space(1e2, 1e6, 41)) samples.push_back({r, std::fabs(eigenpair::potential_radial(row.spec, r))});
    const auto cls = eigenpair::decay_class(row.spec);
    Json entry{{"spec", spec_json(row.spec)}, {"row", cls.row}, {"expected_exponent", row.expected}};
    bool ok = cls.rate.a == row.expected;
    if (row.log_case) {
      const auto with_log = decaylab::fit_decay(samples, RateForm::power_log);
      const auto pure = decaylab::fit_decay(samples, RateForm::power);
      const double ratio = pure.rms_residual / with_log.rms_residual;
      ok = ok && std::fabs(with_log.rate.a - row.expected) <= 0.05 && ratio >= 10.0;
      entry["fitted_exponent"] = with_log.rate.a;
      entry["fitted_log_power"] = -with_log.rate.b;
      entry["residual_ratio"] = ratio;
    } else {
      const auto fit = decaylab::fit_decay(samples);
      ok = ok && std::fabs(fit.rate.a - row.expected) <= 0.05;
      entry["fitted_exponent"] = fit.rate.a;
    }
    entry["pass"] = ok;
    v.pass = v.pass && ok;
    rows.push_back(entry);
  }
  v.measured = {{"range", {1e2, 1e6}}, {"rows", rows}};
  v.tolerance = {{"exponent_abs", 0.05}, {"min_log_residual_ratio", 10.0}};
  return v;
}

Verdict sign_conditions(const VerifyOptions&) {
  Verdict v;
  v.pass = true;
  Json rows = Json::array();
  for (int i = 0; i < 10; ++i) {
    const auto spec = make_spec(3, 1.0, 0, 0.1 + 0.2 * i);
    const double value = eigenpair::potential_radial(spec, 1e4);
    const auto predicted = eigenpair::decay_class(spec).sign_at_infinity;
    const auto observed = value < 0.0 ? eigenpair::Sign::negative : eigenpair::Sign::positive;
    const bool ok = value != 0.0 && predicted == observed;
    v.pass = v.pass && ok;
    rows.push_back({{"kappa", spec.kappa}, {"V_at_1e4", value}, {"predicted", eigenpair::to_string(predicted)}, {"pass", ok}});
  }
  v.measured = {{"d", 3}, {"alpha", 1.0}, {"l", 0}, {"grid", rows}};
  v.tolerance = {{"mismatches", 0}};
  return v;
}

Verdict exit_time_oracle(const VerifyOptions& o) {
  Verdict v;
  const auto proc = ProcessSpec::stable(1, 1.0);
  const std::size_t n = paths_or(o, 100000);
  const double dt = 1e-4;
  const auto fine = levysim::mean_exit_time(proc, 1.0, path_config(o, dt, n), 51);
  const auto coarse = levysim::mean_exit_time(proc, 1.0, path_config(o, 4.0 * dt, n), 52);
  const double oracle = getoor_mean(1, 1.0, 1.0);
  const double step_error = std::fabs(fine.tau.mean - coarse.tau.mean);
  const double bar = std::hypot(fine.tau.std_error, step_error);
  const double rel = std::fabs(fine.tau.mean - oracle) / oracle;
  const bool within = std::fabs(fine.tau.mean - oracle) <= 3.0 * bar;

  Json scaling = Json::array();
  double lo = INFINITY, hi = 0.0;
  for (double r : {1.0, 2.0, 4.0, 8.0}) {
    const auto rep = levysim::mean_exit_time(proc, r, path_config(o, 1e-3 * r, 10000), 60 + static_cast<std::uint64_t>(r));
    const double ratio = rep.tau.mean * maximal_symbol(proc, 1.0 / r);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    scaling.push_back({{"r", r}, {"mean_exit", rep.tau.mean}, {"ratio", ratio}});
  }
  v.measured = {{"estimate", estimate_json(fine.tau)},
                {"dt", dt},
                {"coarse_estimate", estimate_json(coarse.tau)},
                {"coarse_dt", 4.0 * dt},
                {"combined_error_bar", bar},
                {"oracle", oracle},
                {"relative_error", rel},
                {"censored", fine.censored},
                {"scaling", scaling},
                {"scaling_spread", hi / lo}};
  v.tolerance = {{"error_bars", 3.0}, {"relative_error", 0.02}, {"max_scaling_spread", 3.0}, {"runtime_s", 120.0}};
  v.pass = within && rel <= 0.02 && hi / lo <= 3.0 && fine.censored == 0;
  return v;
}

Verdict survival_bound(const VerifyOptions& o) {
  Verdict v;
  const auto proc = ProcessSpec::stable(1, 1.0);
  const std::size_t n = paths_or(o, 100000);
  Json grid = Json::array();
  double lo = INFINITY, hi = 0.0;
  std::uint64_t salt = 70;
  for (double r : {1.0, 2.0, 4.0, 8.0}) {
    for (double eta : {0.01, 0.02, 0.04, 0.08}) {
      const auto p = levysim::survival_prob(proc, r, eta, path_config(o, eta / 200.0, n), salt++);
      const double ratio = p.mean / (eta * maximal_symbol(proc, 1.0 / r));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      grid.push_back({{"r", r}, {"eta", eta}, {"estimate", estimate_json(p)}, {"ratio", ratio}});
    }
  }
  v.measured = {{"grid", grid}, {"recorded_constant", hi}, {"min_ratio", lo}, {"spread", hi / lo}};
  v.tolerance = {{"max_spread", 5.0}};
  v.pass = lo > 0.0 && hi / lo <= 5.0;
  return v;
}

Verdict feynman_kac(const VerifyOptions& o) {
  Verdict v;
  const auto spec = make_spec(1, 1.0, 0, 0.6);
  auto cfg = path_config(o, 1e-2, paths_or(o, 100000));
  cfg.horizon = 1e7;
  cfg.adapt_fraction = 0.003;
  const Point x = Point::on_axis(1, 10.0);
  const auto rep = levysim::fk_functional(ProcessSpec::stable(1, 1.0), PotentialModel::hypergeometric(spec),
                                          levysim::Domain::ball_complement(Point(1), 5.0), x,
                                          [&](const Point& y) { return eigenpair::eigenfunction_value(spec, y); }, 1.0,
                                          cfg, 80);
  const double target = eigenpair::eigenfunction_value(spec, x);
  const double z = std::fabs(rep.value.mean - target) / rep.value.std_error;
  v.measured = {{"spec", spec_json(spec)},
                {"x", 10.0},
                {"estimate", estimate_json(rep.value)},
                {"target", target},
                {"standard_errors", z},
                {"censored_fraction", rep.censored_fraction},
                {"truncated", rep.truncated},
                {"dt_min", cfg.dt},
                {"adapt_fraction", cfg.adapt_fraction},
                {"weight_floor", cfg.weight_floor}};
  v.tolerance = {{"standard_errors", 3.0}, {"censored_fraction", 0.01}};
  v.pass = z <= 3.0 && rep.censored_fraction < 0.01;
  return v;
}

Verdict iteration_limits(const VerifyOptions& o) {
  Verdict v;
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_upper = 0.0, worst_lower = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double eta = 0.05 + 4.95 * unit(rng);
    const double h = 20.0 * unit(rng) / eta;
    const double h1 = h * unit(rng);
    const double K = 1e-3 + 10.0 * unit(rng);
    const double c3 = 0.1 + 10.0 * unit(rng);
    const double c4 = 0.75 * (1e-3 + unit(rng) * (1.0 - 1e-3));
    const double norm_f = 0.1 + 10.0 * unit(rng);
    const double up = decaylab::upper_limit(K, h, c3, eta, norm_f);
    const double low = decaylab::lower_limit(K, h, h1, eta);
    worst_upper = std::max(worst_upper, std::fabs(decaylab::upper_iteration(100, K, h, c3, c4, eta, norm_f) - up) / std::max(1.0, up));
    worst_lower = std::max(worst_lower, std::fabs(decaylab::lower_iteration(100, K, h, h1, eta) - low) / std::max(1.0, low));
  }
  v.measured = {{"draws", 50}, {"p", 100}, {"max_upper_error", worst_upper}, {"max_lower_error", worst_lower}};
  v.tolerance = {{"error", 1e-12}, {"error_scale", "absolute below 1, relative to the limit above"}, {"max_eta_h", 20.0},
                 {"max_c4", 0.75}};
  v.pass = worst_upper < 1e-12 && worst_lower < 1e-12;
  return v;
}

Verdict envelope_identity(const VerifyOptions& o) {
  if (o.family != "hypergeometric") throw ConfigError("verify: envelopes are checked for the hypergeometric family only");
  Verdict v;
  std::mt19937_64 rng(o.seed + 9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  v.pass = true;
  Json rows = Json::array();
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const double alpha = 0.2 + 1.6 * unit(rng);
    const double kappa = 0.5 * d + 0.5 * alpha * (0.05 + 0.9 * unit(rng));
    const auto spec = make_spec(d, alpha, 0, kappa);
    const auto proc = ProcessSpec::stable(d, alpha);
    const auto pot = PotentialModel::hypergeometric(spec);
    const int scenario = decaylab::scenario_classify(proc, pot);
    const auto pred = decaylab::envelope_predict(proc, pot, decaylab::SolutionTrait::positive);
    std::vector<decaylab::Sample> samples;
    for (double r : log_space(1e2, 1e6, 41)) samples.push_back({r, eigenpair::eigenfunction_radial(spec, r)});
    const double fitted = decaylab::fit_decay(samples).rate.a;
    const double gap = std::fabs(pred.upper->a - fitted);
    const bool ok = scenario == 1 && gap <= 0.02 && pred.lower && pred.lower->a == pred.upper->a;
    worst = std::max(worst, gap);
    v.pass = v.pass && ok;
    rows.push_back({{"spec", spec_json(spec)}, {"scenario", scenario}, {"envelope_exponent", pred.upper->a},
                    {"fitted_exponent", fitted}, {"pass", ok}});
  }
  v.measured = {{"specs", rows}, {"max_gap", worst}};
  v.tolerance = {{"exponent_abs", 0.02}, {"scenario", 1}};
  return v;
}

Verdict lifetime_bound(const VerifyOptions& o) {
  Verdict v;
  const auto proc = ProcessSpec::stable(1, 1.0);
  const auto pot = PotentialModel::power(0.5);
  auto cfg = path_config(o, 1e-3, paths_or(o, 20000));
  cfg.horizon = 1e4;
  cfg.adapt_fraction = 0.01;
  Json rows = Json::array();
  double lo = INFINITY, hi = 0.0, worst_rel = 0.0;
  std::uint64_t salt = 100;
  for (double r : {4.0, 8.0, 16.0, 32.0}) {
    const auto rep = levysim::lifetime_lambda(proc, pot, Point::on_axis(1, r), cfg, salt++);
    const double scale = std::max(rep.v_star, rep.psi);
    const double ratio = rep.lambda.mean * scale;
    const double rel = rep.lambda.std_error / rep.lambda.mean;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    worst_rel = std::max(worst_rel, rel);
    rows.push_back({{"x", r}, {"estimate", estimate_json(rep.lambda)}, {"v_star", rep.v_star}, {"psi", rep.psi},
                    {"ratio", ratio}, {"relative_error", rel}, {"censored", rep.censored}});
  }
  v.measured = {{"beta", 0.5}, {"rows", rows}, {"recorded_lower_constant", lo}, {"max_ratio", hi}, {"max_relative_error", worst_rel}};
  v.tolerance = {{"relative_error", 0.05}, {"lower_constant", "> 0"}};
  v.pass = lo > 0.0 && worst_rel < 0.05;
  return v;
}

Verdict exit_law(const VerifyOptions& o) {
  Verdict v;
  auto cfg = path_config(o, 1e-5, paths_or(o, 100000));
  cfg.adapt_fraction = 0.003;
  const auto rep = levysim::exit_law_check(ProcessSpec::stable(1, 1.0), 1.0, cfg, 110);
  v.measured = {{"ks_statistic", rep.ks_statistic}, {"n", rep.n}, {"censored", rep.censored}, {"inside", rep.inside},
                {"dt_min", cfg.dt}, {"adapt_fraction", cfg.adapt_fraction}};
  v.tolerance = {{"critical_value_1pct", rep.critical_value}};
  v.pass = rep.pass && rep.censored == 0;
  return v;
}

const std::vector<Check> kChecks{
    {1, "residual", "closed-form zero-energy residual", closed_form_residual},
    {2, "residual", "hypergeometric zero-energy residuals and convergence", hypergeometric_residuals},
    {3, "scenarios", "decay table reproduction", decay_table},
    {4, "scenarios", "sign of the potential at infinity", sign_conditions},
    {5, "exit", "mean exit time against the closed form", exit_time_oracle},
    {6, "exit", "short-time exit probability bound", survival_bound},
    {7, "exit", "Feynman-Kac representation of the eigenfunction", feynman_kac},
    {8, "iterations", "self-improving iteration limits", iteration_limits},
    {9, "envelopes", "scenario and envelope exponent identity", envelope_identity},
    {10, "exit", "mean lifetime lower bound", lifetime_bound},
    {11, "exit", "exit law goodness of fit", exit_law},
};

const std::vector<std::pair<int, double>> kRuntimeLimits{{1, 10.0}, {2, 300.0}, {5, 120.0}};

}  // namespace

const std::vector<Check>& checks() { return kChecks; }

std::vector<int> suite_members(const std::string& suite) {
  static const std::vector<std::string> known{"residual", "exit", "scenarios", "envelopes", "iterations", "all"};
  if (std::find(known.begin(), known.end(), suite) == known.end()) throw ConfigError("verify: unknown suite '" + suite + "'");
  std::vector<int> out;
  for (const auto& c : kChecks) {
    if (suite == "all" || suite == c.suite) out.push_back(c.id);
  }
  return out;
}

Verdict run_check(int id, const VerifyOptions& opts) {
  const auto it = std::find_if(kChecks.begin(), kChecks.end(), [id](const Check& c) { return c.id == id; });
  if (it == kChecks.end()) throw ConfigError("verify: unknown check id " + std::to_string(id));
  spdlog::info("check {}: {}", id, it->name);
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = it->run(opts);
  } catch (const NumericalError& e) {
    v = Verdict{};
    v.pass = false;
    v.measured = {{"error", e.what()}};
  }
  v.id = id;
  v.name = it->name;
  v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& [check, limit] : kRuntimeLimits) {
    if (check == id && v.seconds >= limit) {
      v.pass = false;
      v.measured["runtime_exceeded"] = true;
    }
  }
  spdlog::info("check {} {} in {:.2f} s", id, v.pass ? "passed" : "failed", v.seconds);
  return v;
}

Json to_json(const Verdict& v) {
  return Json{{"id", v.id}, {"name", v.name}, {"pass", v.pass}, {"measured", v.measured}, {"tolerance", v.tolerance}};
}

}  // namespace zerolab::cli
