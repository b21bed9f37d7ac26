#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace zerolab::cli {

using Json = nlohmann::ordered_json;

struct VerifyOptions {
  std::uint64_t seed = 7;
  std::size_t paths = 0;  ///< 0: each check uses its own path count
  int workers = 1;
  std::string family = "hypergeometric";
};

struct Verdict {
  int id = 0;
  std::string name;
  bool pass = false;
  Json measured = Json::object();
  Json tolerance = Json::object();
  double seconds = 0.0;  ///< wall time; kept out of the JSON so reports stay reproducible
};

using CheckFn = Verdict (*)(const VerifyOptions&);

struct Check {
  int id;
  const char* suite;
  const char* name;
  CheckFn run;
};

/// All verification checks in id order.
const std::vector<Check>& checks();

/// Check ids in a suite: residual, exit, scenarios, envelopes, iterations, or all.
std::vector<int> suite_members(const std::string& suite);

/// Runs one check; numerical failures become failing verdicts carrying the error message.
Verdict run_check(int id, const VerifyOptions& opts);

Json to_json(const Verdict& v);

}  // namespace zerolab::cli
