#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>
#include <sstream>

#include "zerolab/cli.hpp"
#include "zerolab/decaylab.hpp"
#include "zerolab/eigenpair.hpp"
#include "zerolab/errors.hpp"
#include "zerolab/fraclap.hpp"
#include "zerolab/levysim.hpp"
#include "zerolab/verify.hpp"

namespace zerolab::cli {
namespace {

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

const Flag kFlags[] = {
    {"--process", "model.process", "process family: stable or layered"},
    {"--d", "model.d", "dimension (1..3)"},
    {"--alpha", "model.alpha", "stability index in (0,2)"},
    {"--gamma", "model.gamma", "layered tail index (> 2)"},
    {"--l", "model.l", "degree of the harmonic factor (0 or 1)"},
    {"--kappa", "model.kappa", "decay parameter of the eigenfunction"},
    {"--axis", "model.axis", "coordinate axis of the harmonic factor (1-based)"},
    {"--potential", "potential.family", "potential family: hypergeometric, power, power_log, constant"},
    {"--beta", "potential.beta", "power potential exponent"},
    {"--delta", "potential.delta", "log exponent of the power_log potential"},
    {"--r0", "potential.r0", "radius where the potential's tail starts"},
    {"--level", "potential.level", "value of the constant potential"},
    {"--grid", "grid.radii", "radii as log:lo:hi:n or lin:lo:hi:n"},
    {"--direction", "grid.direction", "coordinate along which grid points are placed (default: the axis)"},
    {"--inner-radius", "quadrature.inner_radius", "inner quadrature radius"},
    {"--outer-radius", "quadrature.outer_radius", "outer quadrature radius"},
    {"--nodes-per-decade", "quadrature.nodes_per_decade", "radial nodes per decade"},
    {"--angular-nodes", "quadrature.angular_nodes", "angular nodes per panel"},
    {"--tail-order", "quadrature.tail_order", "tail correction order (1 or 2)"},
    {"--tolerance", "quadrature.tolerance", "self-check tolerance (0 disables)"},
    {"--dt", "paths.dt", "time step (smallest step with --adapt)"},
    {"--horizon", "paths.horizon", "maximal simulated time"},
    {"--paths", "paths.n_paths", "number of paths"},
    {"--adapt", "paths.adapt_fraction", "adaptive step fraction (0 keeps dt fixed)"},
    {"--cutoff", "paths.small_jump_cutoff", "layered small-jump cutoff"},
    {"--censor-threshold", "paths.censor_threshold", "censored fraction flagged unreliable"},
    {"--weight-floor", "paths.weight_floor", "Feynman-Kac weight floor"},
    {"--radius", "simulate.radius", "ball radius for exit and exitlaw"},
    {"--eta", "simulate.eta", "time bound for survival"},
    {"--x", "simulate.x", "start point: a radius on the axis or comma-separated coordinates"},
    {"--domain", "simulate.domain", "Feynman-Kac domain: ball or complement"},
    {"--domain-radius", "simulate.domain_radius", "Feynman-Kac domain radius"},
    {"--payoff", "simulate.payoff", "boundary payoff: one or phi"},
    {"--payoff-bound", "simulate.payoff_bound", "bound on |payoff|"},
    {"--salt", "simulate.salt", "stream salt"},
    {"--trait", "predict.trait", "solution trait: positive, antisymmetric, negative_potential"},
    {"--lp", "predict.lp", "known L^p exponent of the solution"},
    {"--input", "fit.input", "CSV file of r,value samples"},
    {"--form", "fit.form", "fitted form: power, power_log, stretched"},
    {"--suite", "verify.suite", "suite: residual, exit, scenarios, envelopes, iterations, all"},
    {"--family", "verify.family", "potential family for the envelope suite"},
    {"--seed", "run.seed", "random seed"},
    {"--workers", "run.workers", "worker threads"},
    {"--log-level", "run.log_level", "trace, debug, info, warn, error, off"},
    {"--out", "output.path", "output file (default: stdout)"},
    {"--format", "output.format", "csv or json"},
};

int to_int(long long v, const char* what) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(std::string("config: ") + what + " out of range");
  }
  return static_cast<int>(v);
}

eigenpair::EigenpairSpec spec_from(const Settings& s) {
  eigenpair::EigenpairSpec spec;
  spec.d = to_int(s.integer("model.d"), "model.d");
  spec.alpha = s.real("model.alpha");
  spec.l = to_int(s.integer("model.l"), "model.l");
  spec.kappa = s.real("model.kappa");
  spec.axis = to_int(s.integer("model.axis"), "model.axis");
  spec.validate();
  return spec;
}

ProcessSpec process_from(const Settings& s) {
  const std::string family = s.str("model.process");
  const int d = to_int(s.integer("model.d"), "model.d");
  ProcessSpec p;
  if (family == "stable") {
    p = ProcessSpec::stable(d, s.real("model.alpha"));
  } else if (family == "layered") {
    p = ProcessSpec::layered(d, s.real("model.alpha"), s.real("model.gamma"));
  } else {
    throw ConfigError("config: model.process must be stable or layered");
  }
  p.validate();
  return p;
}

PotentialModel potential_from(const Settings& s) {
  const std::string family = s.str("potential.family");
  PotentialModel m;
  if (family == "hypergeometric") {
    m = PotentialModel::hypergeometric(spec_from(s));
  } else if (family == "power") {
    m = s.has("potential.r0") ? PotentialModel::power(s.real("potential.beta"), s.real("potential.r0"))
                              : PotentialModel::power(s.real("potential.beta"));
  } else if (family == "power_log") {
    m = s.has("potential.r0") ? PotentialModel::power_log(s.real("model.alpha"), s.real("potential.delta"), s.real("potential.r0"))
                              : PotentialModel::power_log(s.real("model.alpha"), s.real("potential.delta"));
  } else if (family == "constant") {
    m = PotentialModel::constant(s.real("potential.level"));
  } else {
    throw ConfigError("config: unknown potential family '" + family + "'");
  }
  m.validate();
  return m;
}

fraclap::QuadConfig quad_from(const Settings& s) {
  fraclap::QuadConfig q;
  q.inner_radius = s.real("quadrature.inner_radius");
  q.outer_radius = s.real("quadrature.outer_radius");
  q.nodes_per_decade = to_int(s.integer("quadrature.nodes_per_decade"), "nodes_per_decade");
  q.angular_nodes = to_int(s.integer("quadrature.angular_nodes"), "angular_nodes");
  q.tail_order = to_int(s.integer("quadrature.tail_order"), "tail_order");
  q.tolerance = s.real("quadrature.tolerance");
  q.workers = to_int(s.integer("run.workers"), "run.workers");
  q.validate();
  return q;
}

levysim::PathConfig paths_from(const Settings& s) {
  levysim::PathConfig c;
  c.dt = s.real("paths.dt");
  c.horizon = s.real("paths.horizon");
  c.n_paths = s.u64("paths.n_paths");
  c.adapt_fraction = s.real("paths.adapt_fraction");
  c.small_jump_cutoff = s.real("paths.small_jump_cutoff");
  c.censor_threshold = s.real("paths.censor_threshold");
  c.weight_floor = s.real("paths.weight_floor");
  c.seed = s.u64("run.seed");
  c.workers = to_int(s.integer("run.workers"), "run.workers");
  c.validate();
  return c;
}

Point point_from(const Settings& s, int d, const std::string& key) {
  const std::string text = s.str(key);
  std::vector<double> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) coords.push_back(parse_real(item));
  if (coords.size() == 1) return Point::on_axis(d, coords[0], to_int(s.integer("model.axis"), "model.axis"));
  if (static_cast<int>(coords.size()) != d) throw ConfigError("config: '" + key + "' needs 1 or d coordinates");
  Point p(d);
  for (int i = 0; i < d; ++i) p[i] = coords[i];
  return p;
}

// Settings that shape results; output destination and logging are left out.
Json config_json(const Settings& s) {
  Json out = Json::object();
  for (const auto& [k, v] : s.values()) {
    if (k.rfind("output.", 0) == 0 || k == "run.log_level") continue;
    out[k] = v;
  }
  return out;
}

Json rate_json(const RateFunction& r) {
  return Json{{"form", to_string(r.form)}, {"a", r.a},         {"b", r.b}, {"c", r.c},
              {"delta", r.delta},          {"valid_from", r.valid_from}, {"text", r.describe()}};
}

Json estimate_json(const levysim::MCEstimate& e) {
  return Json{{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n}, {"seed", e.seed}};
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  Json json;
  std::optional<Table> table;
};

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else if (j.is_number_float()) {
    out.emplace_back(prefix, format_real(j.get<double>()));
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

void write_report(const Report& rep, const Settings& s) {
  const std::string format = s.str("output.format");
  if (format != "json" && format != "csv") throw ConfigError("config: output.format must be csv or json");
  std::ostringstream os;
  if (format == "json") {
    os << rep.json.dump(2) << '\n';
  } else if (rep.table) {
    Json header = rep.json;
    header.erase("rows");
    header.erase("config");
    std::vector<std::pair<std::string, std::string>> items;
    flatten(header, "", items);
    for (const auto& [k, v] : items) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < rep.table->columns.size(); ++i) os << (i ? "," : "") << rep.table->columns[i];
    os << '\n';
    for (const auto& row : rep.table->rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_real(row[i]);
      os << '\n';
    }
  } else {
    std::vector<std::pair<std::string, std::string>> items;
    flatten(rep.json, "", items);
    os << "key,value\n";
    for (const auto& [k, v] : items) os << k << ',' << v << '\n';
  }
  const std::string path = s.str("output.path");
  if (path.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(path);
    if (!f) throw ConfigError("output: cannot open '" + path + "'");
    f << os.str();
  }
}

Json decay_json(const eigenpair::DecayClass& c) {
  return Json{{"row", c.row},
              {"rate", rate_json(c.rate)},
              {"sign_at_infinity", eigenpair::to_string(c.sign_at_infinity)},
              {"l2_member", c.l2_member},
              {"degenerate_log_case", c.degenerate_log_case}};
}

Json spec_json(const eigenpair::EigenpairSpec& s) {
  return Json{{"d", s.d}, {"alpha", s.alpha}, {"l", s.l}, {"kappa", s.kappa}, {"axis", s.axis}};
}

Report cmd_eigenpair(const Settings& s) {
  const auto spec = spec_from(s);
  if (s.flag("eigenpair.classify")) spec.validate_classification_range();
  const int direction = s.has("grid.direction") ? to_int(s.integer("grid.direction"), "grid.direction") : spec.axis;
  if (direction < 1 || direction > spec.d) throw ConfigError("config: grid.direction must lie in 1..d");
  Report rep;
  rep.table = Table{{"r", "phi", "V"}, {}};
  Json rows = Json::array();
  for (double r : parse_grid(s.str("grid.radii"))) {
    const Point x = Point::on_axis(spec.d, r, direction);
    const double phi = eigenpair::eigenfunction_value(spec, x);
    const double v = eigenpair::potential_value(spec, x);
    rep.table->rows.push_back({r, phi, v});
    rows.push_back({{"r", r}, {"phi", phi}, {"V", v}});
  }
  rep.json = {{"command", "eigenpair"}, {"config", config_json(s)}, {"spec", spec_json(spec)}, {"direction", direction}};
  try {
    rep.json["decay_class"] = decay_json(eigenpair::decay_class(spec));
  } catch (const ConfigError& e) {
    rep.json["decay_class"] = {{"unavailable", e.what()}};
  }
  rep.json["rows"] = rows;
  return rep;
}

Report cmd_residual(const Settings& s) {
  const auto spec = spec_from(s);
  const auto quad = quad_from(s);
  const int direction = s.has("grid.direction") ? to_int(s.integer("grid.direction"), "grid.direction") : spec.axis;
  if (direction < 1 || direction > spec.d) throw ConfigError("config: grid.direction must lie in 1..d");
  std::vector<Point> grid;
  const auto radii = parse_grid(s.str("grid.radii"));
  for (double r : radii) grid.push_back(Point::on_axis(spec.d, r, direction));
  const auto res = fraclap::residual(spec, grid, quad);
  Report rep;
  rep.table = Table{{"r", "laplacian", "potential_term", "residual", "relative"}, {}};
  Json rows = Json::array();
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& row = res.rows[i];
    const double rel = row.has_relative ? row.relative : std::numeric_limits<double>::quiet_NaN();
    rep.table->rows.push_back({radii[i], row.laplacian, row.potential_term, row.residual, rel});
    Json j{{"r", radii[i]}, {"laplacian", row.laplacian}, {"potential_term", row.potential_term}, {"residual", row.residual}};
    j["relative"] = row.has_relative ? Json(row.relative) : Json(nullptr);
    rows.push_back(j);
  }
  rep.json = {{"command", "residual"}, {"config", config_json(s)}, {"spec", spec_json(spec)},
              {"max_abs", res.max_abs}, {"max_rel", res.max_rel}, {"rows", rows}};
  return rep;
}

Report cmd_classify(const Settings& s) {
  const auto proc = process_from(s);
  const auto pot = potential_from(s);
  Report rep;
  rep.json = {{"command", "classify"},
              {"config", config_json(s)},
              {"process", proc.describe()},
              {"potential", pot.describe()},
              {"scenario", decaylab::scenario_classify(proc, pot)}};
  return rep;
}

decaylab::SolutionTrait trait_from(const std::string& t) {
  if (t == "positive") return decaylab::SolutionTrait::positive;
  if (t == "antisymmetric") return decaylab::SolutionTrait::antisymmetric;
  if (t == "negative_potential") return decaylab::SolutionTrait::negative_potential;
  throw ConfigError("config: unknown trait '" + t + "'");
}

Report cmd_predict(const Settings& s) {
  const auto proc = process_from(s);
  const auto pot = potential_from(s);
  std::optional<double> lp;
  if (s.has("predict.lp")) lp = s.real("predict.lp");
  const auto pred = decaylab::envelope_predict(proc, pot, trait_from(s.str("predict.trait")), lp);
  Json free = Json::array();
  for (const auto& f : pred.free_exponents) {
    free.push_back({{"name", f.name},
                    {"side", f.side == decaylab::EnvelopeSide::lower ? "lower" : "upper"},
                    {"lo", f.lo},
                    {"hi", std::isinf(f.hi) ? Json("inf") : Json(f.hi)},
                    {"lo_closed", f.lo_closed},
                    {"hi_closed", f.hi_closed}});
  }
  Report rep;
  rep.json = {{"command", "predict"}, {"config", config_json(s)}, {"process", proc.describe()}, {"potential", pot.describe()},
              {"scenario", pred.scenario}, {"rule", pred.rule}};
  rep.json["lower"] = pred.lower ? rate_json(*pred.lower) : Json(nullptr);
  rep.json["upper"] = pred.upper ? rate_json(*pred.upper) : Json(nullptr);
  rep.json["upper_axis_factor"] = pred.upper_axis_factor ? rate_json(*pred.upper_axis_factor) : Json(nullptr);
  rep.json["free_exponents"] = free;
  rep.json["free_constants"] = pred.free_constants;
  return rep;
}

Report cmd_simulate(const Settings& s, const std::string& kind) {
  const auto proc = process_from(s);
  const auto cfg = paths_from(s);
  const std::uint64_t salt = s.u64("simulate.salt");
  Report rep;
  rep.json = {{"command", "simulate " + kind}, {"config", config_json(s)}, {"process", proc.describe()},
              {"seed", cfg.seed},   {"n", cfg.n_paths},        {"dt", cfg.dt}};
  if (kind == "exit") {
    const double r = s.real("simulate.radius");
    const auto out = levysim::mean_exit_time(proc, r, cfg, salt);
    rep.json["estimate"] = estimate_json(out.tau);
    rep.json["censored"] = out.censored;
    rep.json["bias_note"] = out.bias_note;
    if (proc.family == ProcessFamily::isotropic_stable) {
      const double a = proc.alpha;
      const int d = proc.d;
      rep.json["closed_form"] = std::pow(r, a) * std::tgamma(0.5 * d) /
                                (std::pow(2.0, a) * std::tgamma(1.0 + 0.5 * a) * std::tgamma(0.5 * (d + a)));
    }
  } else if (kind == "survival") {
    const auto out = levysim::survival_prob(proc, s.real("simulate.radius"), s.real("simulate.eta"), cfg, salt);
    rep.json["estimate"] = estimate_json(out);
  } else if (kind == "fk") {
    const auto pot = potential_from(s);
    const std::string dom = s.str("simulate.domain");
    const double radius = s.real("simulate.domain_radius");
    levysim::Domain domain;
    if (dom == "ball") {
      domain = levysim::Domain::ball(Point(proc.d), radius);
    } else if (dom == "complement") {
      domain = levysim::Domain::ball_complement(Point(proc.d), radius);
    } else {
      throw ConfigError("config: simulate.domain must be ball or complement");
    }
    const std::string payoff = s.str("simulate.payoff");
    std::function<double(const Point&)> g;
    if (payoff == "one") {
      g = [](const Point&) { return 1.0; };
    } else if (payoff == "phi") {
      const auto spec = spec_from(s);
      g = [spec](const Point& y) { return eigenpair::eigenfunction_value(spec, y); };
    } else {
      throw ConfigError("config: simulate.payoff must be one or phi");
    }
    const Point x = point_from(s, proc.d, "simulate.x");
    const auto out = levysim::fk_functional(proc, pot, domain, x, g, s.real("simulate.payoff_bound"), cfg, salt);
    rep.json["estimate"] = estimate_json(out.value);
    rep.json["censored"] = out.censored;
    rep.json["censored_fraction"] = out.censored_fraction;
    rep.json["truncated"] = out.truncated;
    rep.json["reliable"] = out.reliable;
    if (payoff == "phi") rep.json["phi_at_start"] = eigenpair::eigenfunction_value(spec_from(s), x);
  } else if (kind == "lambda") {
    const auto pot = potential_from(s);
    const Point x = point_from(s, proc.d, "simulate.x");
    const auto out = levysim::lifetime_lambda(proc, pot, x, cfg, salt);
    rep.json["estimate"] = estimate_json(out.lambda);
    rep.json["v_star"] = out.v_star;
    rep.json["psi"] = out.psi;
    rep.json["censored"] = out.censored;
    rep.json["ratio"] = out.lambda.mean * std::max(out.v_star, out.psi);
  } else if (kind == "exitlaw") {
    const auto out = levysim::exit_law_check(proc, s.real("simulate.radius"), cfg, salt);
    rep.json["ks_statistic"] = out.ks_statistic;
    rep.json["critical_value"] = out.critical_value;
    rep.json["pass"] = out.pass;
    rep.json["exits"] = out.n;
    rep.json["censored"] = out.censored;
    rep.json["inside"] = out.inside;
    rep.json["mean_direction"] = out.mean_direction;
  } else {
    throw ConfigError("simulate: unknown kind '" + kind + "'");
  }
  return rep;
}

std::vector<decaylab::Sample> read_samples(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("fit: cannot open '" + path + "'");
  std::vector<decaylab::Sample> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("fit: expected r,value per line");
    try {
      out.push_back({parse_real(line.substr(0, comma)), parse_real(line.substr(comma + 1))});
    } catch (const ConfigError&) {
      if (out.empty()) continue;  // header line
      throw;
    }
  }
  return out;
}

RateForm form_from(const std::string& f) {
  if (f == "power") return RateForm::power;
  if (f == "power_log") return RateForm::power_log;
  if (f == "stretched") return RateForm::stretched;
  throw ConfigError("config: unknown form '" + f + "'");
}

Report cmd_fit(const Settings& s) {
  if (!s.has("fit.input")) throw ConfigError("fit: --input is required");
  const auto samples = read_samples(s.str("fit.input"));
  const auto fit = decaylab::fit_decay(samples, form_from(s.str("fit.form")));
  Report rep;
  rep.json = {{"command", "fit"},          {"config", config_json(s)},   {"rate", rate_json(fit.rate)},
              {"log_amplitude", fit.log_amplitude}, {"se_a", fit.se_a}, {"se_b", fit.se_b},
              {"se_c", fit.se_c},          {"rms_residual", fit.rms_residual}, {"condition", fit.condition},
              {"n", fit.n}};
  return rep;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Report cmd_verify(const Settings& s, bool& all_pass) {
  VerifyOptions o;
  o.seed = s.u64("run.seed");
  o.paths = s.u64("verify.paths");
  if (o.paths == 0 && s.is_set("paths.n_paths")) o.paths = s.u64("paths.n_paths");
  o.workers = to_int(s.integer("run.workers"), "run.workers");
  o.family = s.str("verify.family");
  const auto ids = suite_members(s.str("verify.suite"));
  Json results = Json::array();
  all_pass = true;
  for (int id : ids) {
    const Verdict v = run_check(id, o);
    spdlog::debug("check {:>2} {:<55} {} ({:.1f} s)", v.id, v.name, v.pass ? "PASS" : "FAIL", v.seconds);
    all_pass = all_pass && v.pass;
    results.push_back(to_json(v));
  }
  Report rep;
  rep.json = {{"command", "verify"}, {"suite", s.str("verify.suite")}, {"config", config_json(s)},
              {"checks", results},   {"pass", all_pass},                {"metadata", {{"timestamp", timestamp()}}}};
  return rep;
}

void setup_logging(const std::string& level) {
  auto logger = spdlog::get("zerolab");
  if (!logger) logger = spdlog::stderr_color_mt("zerolab");
  spdlog::set_default_logger(logger);
  const auto lvl = spdlog::level::from_str(level);
  if (lvl == spdlog::level::off && level != "off") throw ConfigError("config: unknown log level '" + level + "'");
  spdlog::set_level(lvl);
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"zerolab: zero-energy eigenpairs of fractional Schroedinger operators"};
  app.require_subcommand(1);
  app.fallthrough();
  std::vector<std::pair<std::string, std::string>> overrides;
  std::string config_path;
  app.add_option("--config", config_path, "INI configuration file");
  for (const auto& f : kFlags) {
    app.add_option_function<std::string>(f.name, [&overrides, key = f.key](const std::string& v) { overrides.emplace_back(key, v); },
                                         f.help);
  }
  app.add_flag_function("--classify", [&overrides](std::int64_t) { overrides.emplace_back("eigenpair.classify", "true"); },
                        "validate kappa against the classification range");

  auto* eig = app.add_subcommand("eigenpair", "tabulate phi and V along a ray");
  auto* res = app.add_subcommand("residual", "residual of the zero-energy equation");
  auto* cls = app.add_subcommand("classify", "decay scenario of a process and potential");
  auto* pred = app.add_subcommand("predict", "decay envelope of solutions");
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo estimates");
  sim->require_subcommand(1);
  std::string sim_kind;
  for (const char* kind : {"exit", "survival", "fk", "lambda", "exitlaw"}) {
    sim->add_subcommand(kind, std::string("simulate ") + kind)->callback([&sim_kind, kind] { sim_kind = kind; });
  }
  for (auto* sub : sim->get_subcommands({})) sub->fallthrough();
  auto* fit = app.add_subcommand("fit", "fit a decay rate to r,value samples");
  auto* ver = app.add_subcommand("verify", "run verification checks");
  for (auto* sub : {eig, res, cls, pred, sim, fit, ver}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    Settings s;
    if (!config_path.empty()) s.load_file(config_path);
    for (const auto& [k, v] : overrides) s.set(k, v);
    setup_logging(s.str("run.log_level"));

    Report rep;
    bool all_pass = true;
    if (eig->parsed()) {
      rep = cmd_eigenpair(s);
    } else if (res->parsed()) {
      rep = cmd_residual(s);
    } else if (cls->parsed()) {
      rep = cmd_classify(s);
    } else if (pred->parsed()) {
      rep = cmd_predict(s);
    } else if (sim->parsed()) {
      rep = cmd_simulate(s, sim_kind);
    } else if (fit->parsed()) {
      rep = cmd_fit(s);
    } else if (ver->parsed()) {
      rep = cmd_verify(s, all_pass);
    }
    write_report(rep, s);
    return all_pass ? kSuccess : kCheckFailed;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace zerolab::cli
