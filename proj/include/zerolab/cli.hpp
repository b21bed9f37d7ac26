#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace zerolab::cli {

enum ExitCode { kSuccess = 0, kCheckFailed = 1, kConfigError = 2, kNumericalError = 3 };

/// Flat "section.key" -> value settings with defaults, filled from an INI file and then flags.
class Settings {
 public:
  Settings();

  /// Merges an INI file; unknown sections or keys raise ConfigError.
  void load_file(const std::string& path);
  /// Overrides one key; unknown keys raise ConfigError.
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  /// True once the key was given by a file or flag.
  bool is_set(const std::string& key) const { return set_.count(key) > 0; }
  std::string str(const std::string& key) const;
  double real(const std::string& key) const;
  long long integer(const std::string& key) const;
  unsigned long long u64(const std::string& key) const;
  bool flag(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> set_;
};

/// Parses "log:lo:hi:n" or "lin:lo:hi:n" into radii.
std::vector<double> parse_grid(const std::string& spec);

/// Parses shortest round-trip decimal; rejects trailing characters.
double parse_real(const std::string& text);

/// Shortest round-trip decimal text of x.
std::string format_real(double x);

/// Entry point of the command-line tool; returns the process exit code.
int run(int argc, char** argv);

}  // namespace zerolab::cli
