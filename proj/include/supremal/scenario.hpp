#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "supremal/core.hpp"

namespace supremal {

struct RunOptions {
  std::optional<uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> tol;  // overrides per-op tolerances when set
};

struct OpResult {
  std::string op;
  std::string detail;
  struct Assertion {
    std::string what;
    bool pass = false;
    std::string detail;
  };
  std::vector<Assertion> assertions;
  bool pass() const {
    for (const auto& a : assertions)
      if (!a.pass) return false;
    return true;
  }
};

struct Report {
  std::string name;
  uint64_t seed = 0;
  std::vector<OpResult> ops;
  std::string config_echo;
  std::vector<std::string> exported_files;

  bool pass() const {
    for (const auto& o : ops)
      if (!o.pass()) return false;
    return true;
  }
  int assertion_count() const;
  void print(std::ostream& os, bool echo_config = true) const;
};

/// Parses and executes a declarative scenario. Throws ConfigError (exit code 2
/// territory) on malformed configs; assertion failures land in the report.
Report run_scenario_text(const std::string& json_text, const std::string& name,
                         const RunOptions& opts = {});
Report run_scenario_file(const std::string& path, const RunOptions& opts = {});

/// Replaces the config's operation list with ad-hoc operations (CLI verbs).
Report run_scenario_with_ops(const std::string& json_text, const std::string& name,
                             const std::vector<std::string>& op_json_texts,
                             const RunOptions& opts = {});

std::vector<std::string> list_builtins();
bool is_builtin(const std::string& name);
const std::string& builtin_config(const std::string& name);

}  // namespace supremal
