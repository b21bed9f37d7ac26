#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "zerolab/cli.hpp"
#include "zerolab/errors.hpp"
#include "zerolab/verify.hpp"

using namespace zerolab;
using namespace zerolab::cli;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("zerolab_test_" + std::to_string(::getpid()) + "_" + name);
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "zerolab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  return run(static_cast<int>(args.size()), argv.data());
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Csv read_csv(const std::filesystem::path& p) {
  Csv out;
  std::ifstream f(p);
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    if (out.header.empty()) {
      while (std::getline(ss, cell, ',')) out.header.push_back(cell);
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(parse_real(cell));
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace

TEST_CASE("settings defaults and overrides", "[cli]") {
  Settings s;
  CHECK(s.str("model.process") == "stable");
  CHECK(s.integer("model.d") == 1);
  CHECK(s.real("model.alpha") == 1.0);
  CHECK_FALSE(s.has("potential.r0"));
  CHECK_FALSE(s.is_set("model.kappa"));
  s.set("model.kappa", " 0.75 ");
  CHECK(s.real("model.kappa") == 0.75);
  CHECK(s.is_set("model.kappa"));
  CHECK_THROWS_AS(s.set("model.unknown", "1"), ConfigError);
  s.set("model.d", "two");
  CHECK_THROWS_AS(s.integer("model.d"), ConfigError);
  s.set("run.seed", "-1");
  CHECK_THROWS_AS(s.u64("run.seed"), ConfigError);
  s.set("eigenpair.classify", "maybe");
  CHECK_THROWS_AS(s.flag("eigenpair.classify"), ConfigError);
}

TEST_CASE("settings load from an INI file", "[cli]") {
  const auto path = temp_file("cfg.ini");
  {
    std::ofstream f(path);
    f << "# comment\n[model]\nd = 2\nkappa = 0.8\n\n[paths]\ndt = 1e-4\n";
  }
  Settings s;
  s.load_file(path.string());
  CHECK(s.integer("model.d") == 2);
  CHECK(s.real("model.kappa") == 0.8);
  CHECK(s.real("paths.dt") == 1e-4);
  {
    std::ofstream f(path);
    f << "[model]\nflavour = 3\n";
  }
  Settings t;
  CHECK_THROWS_AS(t.load_file(path.string()), ConfigError);
  {
    std::ofstream f(path);
    f << "[model\nd = 2\n";
  }
  CHECK_THROWS_AS(t.load_file(path.string()), ConfigError);
  CHECK_THROWS_AS(t.load_file((path.string() + ".missing")), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("grid specifications", "[cli]") {
  const auto g = parse_grid("log:1e-1:1e4:50");
  REQUIRE(g.size() == 50);
  CHECK(g.front() == 0.1);
  CHECK(g.back() == 1e4);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK_THAT(g[i] / g[i - 1], WithinRel(std::pow(1e5, 1.0 / 49), 1e-12));
  const auto h = parse_grid("lin:0:3:4");
  CHECK(h == std::vector<double>{0.0, 1.0, 2.0, 3.0});
  CHECK(parse_grid("lin:2:2:1") == std::vector<double>{2.0});
  CHECK_THROWS_AS(parse_grid("log:0:1:5"), ConfigError);
  CHECK_THROWS_AS(parse_grid("cubic:1:2:5"), ConfigError);
  CHECK_THROWS_AS(parse_grid("lin:2:1:5"), ConfigError);
  CHECK_THROWS_AS(parse_grid("lin:1:2:0"), ConfigError);
  CHECK_THROWS_AS(parse_grid("lin:1:2"), ConfigError);
}

TEST_CASE("real formatting round-trips", "[cli]") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0}) CHECK(parse_real(format_real(x)) == x);
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1e-3) == "0.001");
  CHECK(format_real(1e-30) == "1e-30");
  CHECK_THROWS_AS(parse_real("1.5x"), ConfigError);
  CHECK_THROWS_AS(parse_real(""), ConfigError);
}

TEST_CASE("eigenpair command tabulates the closed-form pair", "[cli]") {
  const auto out = temp_file("eig.csv");
  REQUIRE(invoke({"eigenpair", "--d", "1", "--alpha", "1", "--l", "0", "--kappa", "1", "--grid", "log:1e-1:1e4:50",
                  "--format", "csv", "--out", out.string()}) == kSuccess);
  const auto text = slurp(out);
  CHECK(text.find("# spec.kappa: 1") != std::string::npos);
  CHECK(text.find("# decay_class.") != std::string::npos);
  const auto csv = read_csv(out);
  CHECK(csv.header == std::vector<std::string>{"r", "phi", "V"});
  REQUIRE(csv.rows.size() == 50);
  for (const auto& row : csv.rows) {
    const double r = row[0];
    CHECK_THAT(row[1], WithinRel(1.0 / (1.0 + r * r), 1e-14));
    CHECK_THAT(row[2], WithinAbs((r * r - 1.0) / (1.0 + r * r), 1e-12));
  }
  std::filesystem::remove(out);
}

TEST_CASE("eigenpair command vanishes off the harmonic axis", "[cli]") {
  const auto out = temp_file("eig_l1.csv");
  REQUIRE(invoke({"eigenpair", "--d", "2", "--l", "1", "--axis", "1", "--kappa", "1.2", "--direction", "2", "--grid",
                  "lin:0:5:6", "--format", "csv", "--out", out.string()}) == kSuccess);
  const auto csv = read_csv(out);
  REQUIRE(csv.rows.size() == 6);
  for (const auto& row : csv.rows) CHECK(row[1] == 0.0);
  std::filesystem::remove(out);
}

TEST_CASE("exit codes", "[cli]") {
  const auto out = temp_file("codes.json");
  CHECK(invoke({"eigenpair", "--kappa", "5", "--classify", "--out", out.string()}) == kConfigError);
  CHECK(invoke({"eigenpair", "--kappa", "5", "--out", out.string()}) == kSuccess);
  CHECK(invoke({"eigenpair", "--nonsense", "1"}) == kConfigError);
  CHECK(invoke({"eigenpair", "--d", "x"}) == kConfigError);
  CHECK(invoke({"eigenpair", "--format", "xml"}) == kConfigError);
  CHECK(invoke({"fit"}) == kConfigError);
  CHECK(invoke({"classify", "--potential", "cubic"}) == kConfigError);
  CHECK(invoke({"residual", "--grid", "lin:3:3:1", "--nodes-per-decade", "16", "--tolerance", "1e-300", "--out",
                out.string()}) == kNumericalError);
  std::filesystem::remove(out);
}

TEST_CASE("config file with flag override", "[cli]") {
  const auto cfg = temp_file("override.ini");
  const auto out = temp_file("override.json");
  {
    std::ofstream f(cfg);
    f << "[model]\nkappa = 0.3\n[grid]\nradii = lin:1:2:2\n";
  }
  REQUIRE(invoke({"eigenpair", "--config", cfg.string(), "--kappa", "0.4", "--out", out.string()}) == kSuccess);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["config"]["model.kappa"] == "0.4");
  CHECK(j["config"]["grid.radii"] == "lin:1:2:2");
  CHECK(j["rows"].size() == 2);
  std::filesystem::remove(cfg);
  std::filesystem::remove(out);
}

TEST_CASE("classify and predict commands", "[cli]") {
  const auto out = temp_file("predict.json");
  REQUIRE(invoke({"classify", "--potential", "power_log", "--delta", "2", "--out", out.string()}) == kSuccess);
  CHECK(nlohmann::json::parse(slurp(out))["scenario"] == 1);
  REQUIRE(invoke({"classify", "--potential", "power_log", "--delta", "0.5", "--out", out.string()}) == kSuccess);
  CHECK(nlohmann::json::parse(slurp(out))["scenario"] == 2);
  REQUIRE(invoke({"classify", "--potential", "power", "--beta", "1.5", "--out", out.string()}) == kSuccess);
  CHECK(nlohmann::json::parse(slurp(out))["scenario"] == 3);
  REQUIRE(invoke({"predict", "--d", "2", "--kappa", "1.2", "--out", out.string()}) == kSuccess);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["scenario"] == 1);
  CHECK_THAT(j["lower"]["a"].get<double>(), WithinAbs(2.4, 1e-12));
  std::filesystem::remove(out);
}

TEST_CASE("fit command recovers a power law", "[cli]") {
  const auto in = temp_file("samples.csv");
  const auto out = temp_file("fit.json");
  {
    std::ofstream f(in);
    f << "r,value\n";
    for (int i = 0; i < 20; ++i) {
      const double r = std::pow(10.0, 1.0 + 0.2 * i);
      f << format_real(r) << ',' << format_real(3.0 * std::pow(r, -1.7)) << '\n';
    }
  }
  REQUIRE(invoke({"fit", "--input", in.string(), "--out", out.string()}) == kSuccess);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK_THAT(j["rate"]["a"].get<double>(), WithinAbs(1.7, 1e-9));
  CHECK_THAT(j["log_amplitude"].get<double>(), WithinAbs(std::log(3.0), 1e-9));
  std::filesystem::remove(in);
  std::filesystem::remove(out);
}

TEST_CASE("simulate command is reproducible", "[cli]") {
  const auto a = temp_file("sim_a.json");
  const auto b = temp_file("sim_b.json");
  const std::vector<std::string> base{"simulate", "exit", "--paths", "500", "--dt", "1e-2", "--seed", "11"};
  auto with_out = [&](const std::filesystem::path& p, const std::string& workers) {
    auto args = base;
    args.insert(args.end(), {"--workers", workers, "--out", p.string()});
    return args;
  };
  REQUIRE(invoke(with_out(a, "1")) == kSuccess);
  REQUIRE(invoke(with_out(b, "3")) == kSuccess);
  auto ja = nlohmann::json::parse(slurp(a));
  auto jb = nlohmann::json::parse(slurp(b));
  CHECK(ja["estimate"] == jb["estimate"]);
  CHECK(ja["closed_form"] == 1.0);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("verify command on the deterministic suites", "[cli]") {
  const auto out = temp_file("verify.json");
  REQUIRE(invoke({"verify", "--suite", "iterations", "--out", out.string()}) == kSuccess);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["suite"] == "iterations");
  CHECK(j["pass"] == true);
  REQUIRE(j["checks"].size() == 1);
  CHECK(j["checks"][0]["id"] == 8);
  CHECK(j["metadata"].contains("timestamp"));
  CHECK(invoke({"verify", "--suite", "nothing", "--out", out.string()}) == kConfigError);
  std::filesystem::remove(out);
}

TEST_CASE("verify reports do not depend on the output destination", "[cli]") {
  const auto a = temp_file("verify_a.json");
  const auto b = temp_file("verify_b.json");
  REQUIRE(invoke({"verify", "--suite", "scenarios", "--out", a.string()}) == kSuccess);
  REQUIRE(invoke({"verify", "--suite", "scenarios", "--out", b.string(), "--log-level", "off"}) == kSuccess);
  auto ja = Json::parse(slurp(a));
  auto jb = Json::parse(slurp(b));
  ja["metadata"].erase("timestamp");
  jb["metadata"].erase("timestamp");
  CHECK(ja.dump() == jb.dump());
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("suite membership", "[cli]") {
  CHECK(suite_members("residual") == std::vector<int>{1, 2});
  CHECK(suite_members("scenarios") == std::vector<int>{3, 4});
  CHECK(suite_members("iterations") == std::vector<int>{8});
  CHECK(suite_members("envelopes") == std::vector<int>{9});
  CHECK(suite_members("exit") == std::vector<int>{5, 6, 7, 10, 11});
  CHECK(suite_members("all").size() == 11);
  CHECK_THROWS_AS(suite_members("bogus"), ConfigError);
}
