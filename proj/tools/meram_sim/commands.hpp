#pragma once

// Subcommands of the meram_sim front end. Each returns the process exit code:
// 0 success, 1 usage or configuration error, 2 invariant violation.

#include <iosfwd>
#include <string>
#include <vector>

#include "meram/run_config.hpp"

namespace meram::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvariant = 2;

struct DeviceOptions {
  std::string script;  // empty: the two-experiment script
};

struct ArrayOptions {
  std::size_t operations = 1000;  // randomized operations for large arrays
};

struct SimulateOptions {
  std::string trace;  // empty: generate the configured workloads
};

int cmd_device(const config::RunConfig& cfg, const DeviceOptions& opts, std::ostream& out);
int cmd_array(const config::RunConfig& cfg, const ArrayOptions& opts, std::ostream& out);
int cmd_simulate(const config::RunConfig& cfg, const SimulateOptions& opts, std::ostream& out);
int cmd_compare(const config::RunConfig& cfg, std::ostream& out);
int cmd_report(const config::RunConfig& cfg, std::ostream& out);

// Full argument parsing and dispatch.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace meram::cli
