#pragma once

#include <string>
#include <vector>

#include "meram/eval_report.hpp"
#include "meram/run_config.hpp"
#include "meram/tech_library.hpp"

namespace meram::pipeline {

struct GridResult {
  std::vector<report::EatReport> reports;  // workload-major, profile order within
  std::vector<std::string> violations;     // internal invariant failures
  std::vector<std::uint64_t> scale_factors;  // per workload
};

// Profiles selected by cfg.profiles / cfg.technologies.
std::vector<tech::TechnologyProfile> select_profiles(const config::RunConfig& cfg);

// Runs every workload against every profile. Workloads run on up to
// `threads` threads; the result does not depend on the thread count.
GridResult run_grid(const config::RunConfig& cfg, const std::vector<tech::TechnologyProfile>& profiles,
                    unsigned threads);

// MERAM_SIM_THREADS if set and positive, else hardware concurrency.
unsigned thread_budget();

}  // namespace meram::pipeline
