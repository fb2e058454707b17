#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace dinglab {

/// One run of the laboratory: which computation, at which levels, on which
/// grid, with which inputs.
struct RunConfig {
  std::string command;               // set by the CLI subcommand
  int k = 8;
  std::vector<int> klist{4, 6, 8, 12, 16, 24, 32};
  int grid_nx = 64;
  int grid_nt = 128;
  std::string potential = "0";       // deviation u from the round potential
  std::string f = "x3";
  std::string g;                     // empty: reuse f
  double tol = 1e-8;
  int max_iter = 500;
  std::string out = ".";             // report directory
  unsigned long long seed = 0;
  int threads = 0;                   // 0: machine parallelism; recorded only
};

/// Applies one key=value pair; throws ConfigError naming the key on unknown
/// keys or malformed/out-of-range values.
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);

/// Flat key=value file, one pair per line, '#' comments, blank lines allowed.
RunConfig load_config(const std::string& path);

/// Final validation of cross-field invariants (expressions parse, k >= 1,
/// grid within guards); throws ConfigError.
void validate_config(const RunConfig& cfg);

nlohmann::json config_to_json(const RunConfig& cfg);

/// Pretty-printed JSON with a trailing newline.
void write_report(const nlohmann::json& report, const std::string& path);

}  // namespace dinglab
