#pragma once

// Macro-level profiles of 4 MB L2 candidates and the system configuration
// they are evaluated under. Units: mm^2, ns, nJ, W.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace meram::tech {

// Write endurance as a range of decades (10^min .. 10^max switches).
struct Endurance {
  int min_decade = 0;
  int max_decade = 0;
  bool unlimited = false;

  static Endurance decades(int lo, int hi) { return {lo, hi, false}; }
  static Endurance infinite() { return {0, 0, true}; }

  friend bool operator==(const Endurance&, const Endurance&) = default;
};

struct TechnologyProfile {
  std::string name;
  bool non_volatile = false;
  int access_transistors = 0;
  double area = 0.0;                   // mm^2
  double hit_latency = 0.0;            // ns
  std::optional<double> miss_latency;  // ns
  double write_latency = 0.0;          // ns
  double hit_energy = 0.0;             // nJ
  std::optional<double> miss_energy;   // nJ
  double write_energy = 0.0;           // nJ
  double leakage_power = 0.0;          // W
  Endurance endurance;
  bool overwrite_issue = false;

  void validate() const;

  friend bool operator==(const TechnologyProfile&, const TechnologyProfile&) = default;
};

enum class OptionalField { MissLatency, MissEnergy };

// Present value, or the matching hit value when the profile leaves it out.
double effective(const TechnologyProfile& p, OptionalField field);

// ReRAM, STT-MRAM, SOT-MRAM, SRAM, eDRAM, MERAM in that order.
const std::vector<TechnologyProfile>& builtin_profiles();

const TechnologyProfile& find_profile(const std::vector<TechnologyProfile>& profiles,
                                      const std::string& name);

std::vector<TechnologyProfile> load_profiles(std::istream& in, const std::string& source);
std::vector<TechnologyProfile> load_profiles_file(const std::string& path);
void write_profiles(std::ostream& out, const std::vector<TechnologyProfile>& profiles);

std::string format_endurance(const Endurance& e);

struct CacheLevel {
  std::uint64_t capacity = 0;  // bytes
  unsigned associativity = 0;
  unsigned line_size = 0;      // bytes
  bool write_back = true;
};

struct SystemConfig {
  unsigned cores = 4;
  double cpu_clock_ghz = 3.3;
  CacheLevel l1{32 * 1024, 8, 64, true};
  CacheLevel l2{4 * 1024 * 1024, 8, 64, true};
  std::string memory = "8 GB, 1 channel, 4 ranks/channel, 8 banks/rank";

  void validate() const;
};

const SystemConfig& default_system();

}  // namespace meram::tech
