#include "meram/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "meram/error.hpp"

namespace meram::pipeline {

std::vector<tech::TechnologyProfile> select_profiles(const config::RunConfig& cfg) {
  std::vector<tech::TechnologyProfile> loaded =
      cfg.profiles == "builtin" ? tech::builtin_profiles() : tech::load_profiles_file(cfg.profiles);
  if (cfg.technologies.empty()) return loaded;
  std::vector<tech::TechnologyProfile> chosen;
  for (const auto& name : cfg.technologies) chosen.push_back(tech::find_profile(loaded, name));
  return chosen;
}

unsigned thread_budget() {
  if (const char* env = std::getenv("MERAM_SIM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct WorkloadResult {
  std::vector<report::EatReport> reports;
  std::vector<std::string> violations;
  std::uint64_t scale = 1;
};

WorkloadResult run_workload(const config::RunConfig& cfg, const cache::WorkloadSpec& spec,
                            const std::vector<tech::TechnologyProfile>& profiles) {
  WorkloadResult out;
  const auto trace = cache::gen_trace(spec);
  const cache::SimStats counters = cache::count_accesses(cfg.cache, trace);

  auto fail = [&](const std::string& what) { out.violations.push_back(spec.name + ": " + what); };
  if (counters.accesses() != trace.size()) fail("hits + misses != accesses");
  if (counters.writebacks > counters.misses()) fail("more writebacks than misses");

  std::vector<cache::SimStats> per_profile;
  double shortest = 0.0;
  for (const auto& p : profiles) {
    cache::SimStats s = counters;
    s.exec_time = cache::exec_time(s, p, cfg.cache);
    shortest = per_profile.empty() ? s.exec_time : std::min(shortest, s.exec_time);
    per_profile.push_back(s);
  }

  if (cfg.min_exec_time > 0.0 && shortest > 0.0 && shortest < cfg.min_exec_time)
    out.scale = static_cast<std::uint64_t>(std::ceil(cfg.min_exec_time / shortest));

  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto stats = cache::scaled(per_profile[i], out.scale);
    auto r = report::make_report(spec.name, stats, profiles[i]);
    if (r.eat != r.total_energy * r.area * r.total_latency) fail(profiles[i].name + ": eat != E*A*T");
    if (r.total_energy < r.dynamic_energy) fail(profiles[i].name + ": negative leakage");
    out.reports.push_back(std::move(r));
  }
  return out;
}

}  // namespace

GridResult run_grid(const config::RunConfig& cfg, const std::vector<tech::TechnologyProfile>& profiles,
                    unsigned threads) {
  cfg.validate();
  if (profiles.empty()) throw ValidationError("run_grid: no technology profiles selected");

  std::vector<WorkloadResult> results(cfg.workloads.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < results.size(); i = next++)
      results[i] = run_workload(cfg, cfg.workloads[i], profiles);
  };
  const unsigned n = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(results.size()));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  GridResult grid;
  for (auto& r : results) {
    grid.reports.insert(grid.reports.end(), r.reports.begin(), r.reports.end());
    grid.violations.insert(grid.violations.end(), r.violations.begin(), r.violations.end());
    grid.scale_factors.push_back(r.scale);
  }

  const bool has_baseline = std::any_of(profiles.begin(), profiles.end(),
                                        [&](const auto& p) { return p.name == cfg.baseline; });
  if (has_baseline) grid.reports = report::normalize(std::move(grid.reports), cfg.baseline);
  return grid;
}

}  // namespace meram::pipeline
