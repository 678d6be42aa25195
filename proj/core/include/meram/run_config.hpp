#pragma once

// Run configuration: one sectioned key=value file drives every subcommand.
//
//   [device]          MefetParams fields
//   [array]           rows cols v_dd i_sense v_write sa_offset r_access clock_period
//   [cache]           capacity associativity line_size memory_latency_ns
//   [run]             profiles technologies baseline candidate output_dir formats seed min_exec_time
//   [workload.NAME]   n_accesses write_fraction footprint locality seed reuse_window line_size cores
//
// Without any [workload.*] section the balanced grid is used.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "meram/cache_sim.hpp"
#include "meram/cell_array.hpp"
#include "meram/eval_report.hpp"
#include "meram/kv_file.hpp"

namespace meram::config {

struct RunConfig {
  cell::ArrayConfig array;  // array.device carries the MEFET parameters
  cache::CacheConfig cache;
  std::vector<cache::WorkloadSpec> workloads;
  std::string profiles = "builtin";       // or a profile file path
  std::vector<std::string> technologies;  // empty: every loaded profile
  std::string baseline = "SRAM";
  std::string candidate = "MERAM";
  std::string output_dir = "out";
  std::vector<report::Format> formats{report::Format::Csv};
  std::uint64_t seed = 1;
  // Reports are rescaled by a common whole factor until the shortest run in
  // a workload reaches this many seconds. 0 disables rescaling.
  double min_exec_time = 0.0;

  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Write fractions {0.1, 0.3, 0.5} x locality {0.5, 0.9}, 10^6 accesses over a
// 4 MiB footprint. Seeds are seed, seed+1, ...
std::vector<cache::WorkloadSpec> balanced_grid(std::uint64_t seed, std::uint64_t n_accesses = 1'000'000);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> profiles;
  std::optional<std::string> output_dir;
  std::optional<std::vector<report::Format>> formats;
  // "key=value" pairs routed to [device] or [array] by key name.
  std::vector<std::string> settings;
};

RunConfig from_document(const kv::Document& doc, const Overrides& overrides = {});
RunConfig load_file(const std::string& path, const Overrides& overrides = {});
RunConfig defaults(const Overrides& overrides = {});

// Fully resolved echo; parsing it back yields an equal RunConfig.
void write(std::ostream& out, const RunConfig& cfg);

std::vector<report::Format> parse_formats(const std::string& list);

}  // namespace meram::config
