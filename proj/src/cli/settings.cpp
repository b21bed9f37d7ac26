#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <limits>

#include "zerolab/cli.hpp"
#include "zerolab/errors.hpp"

namespace zerolab::cli {
namespace {

const std::map<std::string, std::string>& defaults() {
  static const std::map<std::string, std::string> table{
      {"model.process", "stable"},
      {"model.d", "1"},
      {"model.alpha", "1"},
      {"model.gamma", "3"},
      {"model.l", "0"},
      {"model.kappa", "1"},
      {"model.axis", "1"},
      {"potential.family", "hypergeometric"},
      {"potential.beta", "0.5"},
      {"potential.delta", "1"},
      {"potential.r0", ""},
      {"potential.level", "0"},
      {"grid.radii", "log:0.1:1e4:50"},
      {"grid.direction", ""},
      {"eigenpair.classify", "false"},
      {"quadrature.inner_radius", "0.01"},
      {"quadrature.outer_radius", "1e6"},
      {"quadrature.nodes_per_decade", "64"},
      {"quadrature.angular_nodes", "32"},
      {"quadrature.tail_order", "2"},
      {"quadrature.tolerance", "0"},
      {"paths.dt", "1e-3"},
      {"paths.horizon", "100"},
      {"paths.n_paths", "10000"},
      {"paths.adapt_fraction", "0"},
      {"paths.small_jump_cutoff", "1e-3"},
      {"paths.censor_threshold", "0.01"},
      {"paths.weight_floor", "1e-9"},
      {"simulate.radius", "1"},
      {"simulate.eta", "0.1"},
      {"simulate.x", "10"},
      {"simulate.domain", "ball"},
      {"simulate.domain_radius", "5"},
      {"simulate.payoff", "one"},
      {"simulate.payoff_bound", "1"},
      {"simulate.salt", "0"},
      {"predict.trait", "positive"},
      {"predict.lp", ""},
      {"fit.input", ""},
      {"fit.form", "power"},
      {"verify.suite", "all"},
      {"verify.family", "hypergeometric"},
      {"verify.paths", "0"},
      {"run.seed", "1"},
      {"run.workers", "1"},
      {"run.log_level", "warn"},
      {"output.path", ""},
      {"output.format", "json"},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

Settings::Settings() : values_(defaults()) {}

void Settings::load_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config: key '" + section + "' outside a section");
    for (const auto& [key, node] : body) set(section + "." + key, node.get_value<std::string>());
  }
}

void Settings::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("config: unknown key '" + key + "'");
  it->second = trim(value);
  set_.insert(key);
}

bool Settings::has(const std::string& key) const { return !str(key).empty(); }

std::string Settings::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("config: unknown key '" + key + "'");
  return it->second;
}

double Settings::real(const std::string& key) const {
  try {
    return parse_real(str(key));
  } catch (const ConfigError&) {
    throw ConfigError("config: '" + key + "' must be a number, got '" + str(key) + "'");
  }
}

long long Settings::integer(const std::string& key) const {
  const std::string s = str(key);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("config: '" + key + "' must be an integer, got '" + s + "'");
  }
  return out;
}

unsigned long long Settings::u64(const std::string& key) const {
  const std::string s = str(key);
  unsigned long long out = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("config: '" + key + "' must be a non-negative integer, got '" + s + "'");
  }
  return out;
}

bool Settings::flag(const std::string& key) const {
  const std::string s = str(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off" || s.empty()) return false;
  throw ConfigError("config: '" + key + "' must be true or false");
}

double parse_real(const std::string& text) {
  const std::string s = trim(text);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) throw ConfigError("not a number: '" + s + "'");
  return out;
}

std::string format_real(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = spec.find(':', start);
    parts.push_back(spec.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 4 || (parts[0] != "log" && parts[0] != "lin")) {
    throw ConfigError("grid: expected log:lo:hi:n or lin:lo:hi:n, got '" + spec + "'");
  }
  const double lo = parse_real(parts[1]);
  const double hi = parse_real(parts[2]);
  long long n = 0;
  const auto [ptr, ec] = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), n);
  if (ec != std::errc() || ptr != parts[3].data() + parts[3].size() || n < 1) throw ConfigError("grid: bad point count");
  if (!(hi >= lo) || !(lo >= 0.0)) throw ConfigError("grid: need 0 <= lo <= hi");
  if (parts[0] == "log" && !(lo > 0.0)) throw ConfigError("grid: log grids need lo > 0");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = parts[0] == "log" ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  if (n > 1) out.back() = hi;
  return out;
}

}  // namespace zerolab::cli
