#pragma once

// Energy x Area x Latency comparison of L2 candidates and its tabular output.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "meram/cache_sim.hpp"
#include "meram/tech_library.hpp"

namespace meram::report {

inline constexpr const char* kSchemaVersion = "meram-report/1";

struct EatReport {
  std::string technology;
  std::string workload;
  cache::SimStats stats;
  cache::EnergyBreakdown energy;
  double dynamic_energy = 0.0;  // J
  double leakage_energy = 0.0;  // J
  double total_energy = 0.0;    // J
  double area = 0.0;            // mm^2
  double total_latency = 0.0;   // s
  double eat = 0.0;             // J * mm^2 * s
  double normalized_eat = 0.0;
  double normalized_latency = 0.0;
};

double eat(double total_energy, double area, double total_latency);

// 100 * (1 - candidate / reference). Throws for a non-positive reference.
double reduction_pct(double candidate_eat, double reference_eat);

EatReport make_report(const std::string& workload, const cache::SimStats& stats,
                      const tech::TechnologyProfile& profile);

// Divides eat and latency by the baseline technology's mean across workloads.
std::vector<EatReport> normalize(std::vector<EatReport> reports, const std::string& baseline);

struct Reduction {
  std::string candidate;
  std::string reference;
  std::vector<std::pair<std::string, double>> per_workload;  // percent
  double mean = 0.0;                                          // percent
};

// Candidate against every other technology present, averaged over workloads
// in which both appear.
std::vector<Reduction> reductions(const std::vector<EatReport>& reports, const std::string& candidate);

// Technology with the smallest EAT for `workload`.
std::string min_eat_technology(const std::vector<EatReport>& reports, const std::string& workload);

// ---- emission ------------------------------------------------------------

enum class Format { Csv, Json };

Format parse_format(const std::string& name);
std::string extension(Format f);

using Cell = std::variant<std::string, double, std::uint64_t, bool>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string render(const Table& table, Format format);

Table eat_table(const std::vector<EatReport>& reports);
Table stats_table(const std::vector<EatReport>& reports);
Table energy_table(const std::vector<EatReport>& reports);
Table latency_table(const std::vector<EatReport>& reports);
Table reduction_table(const std::vector<Reduction>& reductions);

// Per-axis profile metrics scaled by the largest value across profiles:
// hit latency, write energy, leakage, area and endurance decade.
Table radar_table(const std::vector<tech::TechnologyProfile>& profiles);
Table profile_table(const std::vector<tech::TechnologyProfile>& profiles);

// EAT table in the requested format.
std::string emit(const std::vector<EatReport>& reports, Format format);

}  // namespace meram::report
