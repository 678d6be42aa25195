#pragma once

// Trace-driven single-level set-associative cache: LRU replacement,
// write-back, write-allocate. Hit/miss counters depend only on the geometry
// and the trace; a technology profile turns them into time and energy.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "meram/tech_library.hpp"

namespace meram::cache {

struct CacheConfig {
  std::uint64_t capacity = 4ull * 1024 * 1024;  // bytes
  unsigned associativity = 8;
  unsigned line_size = 64;          // bytes
  double memory_latency_ns = 50.0;  // main-memory penalty added to every miss

  void validate() const;
  std::uint64_t sets() const { return capacity / (std::uint64_t{associativity} * line_size); }

  friend bool operator==(const CacheConfig&, const CacheConfig&) = default;
};

enum class AccessOp : std::uint8_t { Read, Write };

struct AccessRecord {
  AccessOp op = AccessOp::Read;
  std::uint64_t address = 0;
  std::uint32_t core = 0;

  friend bool operator==(const AccessRecord&, const AccessRecord&) = default;
};

struct SimStats {
  std::uint64_t read_hits = 0;
  std::uint64_t read_misses = 0;
  std::uint64_t write_hits = 0;
  std::uint64_t write_misses = 0;
  std::uint64_t writebacks = 0;
  double exec_time = 0.0;  // s, accumulated L2 access latency

  std::uint64_t hits() const { return read_hits + write_hits; }
  std::uint64_t misses() const { return read_misses + write_misses; }
  std::uint64_t accesses() const { return hits() + misses(); }
  std::uint64_t write_accesses() const { return write_hits + write_misses; }

  friend bool operator==(const SimStats&, const SimStats&) = default;
};

class SetAssociativeCache {
 public:
  struct Outcome {
    bool hit = false;
    bool dirty_eviction = false;
  };

  explicit SetAssociativeCache(const CacheConfig& cfg);

  Outcome access(AccessOp op, std::uint64_t address);
  void reset();

 private:
  struct Way {
    std::uint64_t tag = 0;
    std::uint64_t last_use = 0;
    bool valid = false;
    bool dirty = false;
  };

  CacheConfig cfg_;
  std::uint64_t sets_;
  std::vector<Way> ways_;
  std::uint64_t clock_ = 0;
};

// Hit/miss/writeback counters with exec_time left at zero.
SimStats count_accesses(const CacheConfig& cfg, const std::vector<AccessRecord>& trace);

// Read hit: hit latency. Write hit: write latency. Miss: effective miss
// latency + memory latency + write latency for the fill. Each dirty
// eviction adds one more write latency.
double exec_time(const SimStats& counters, const tech::TechnologyProfile& profile,
                 const CacheConfig& cfg);

SimStats simulate(const CacheConfig& cfg, const std::vector<AccessRecord>& trace,
                  const tech::TechnologyProfile& profile);

// Counters and exec_time multiplied by `factor`, standing for a run `factor`
// times longer with the same access mix.
SimStats scaled(const SimStats& stats, std::uint64_t factor);

struct EnergyBreakdown {
  double hit = 0.0;      // J
  double miss = 0.0;     // J
  double write = 0.0;    // J, write accesses plus writebacks
  double leakage = 0.0;  // J

  double dynamic() const { return hit + miss + write; }
  double total() const { return dynamic() + leakage; }
};

EnergyBreakdown energy(const SimStats& stats, const tech::TechnologyProfile& profile);

struct WorkloadSpec {
  std::string name = "balanced";
  std::uint64_t n_accesses = 1'000'000;
  double write_fraction = 0.3;
  std::uint64_t footprint = 4ull * 1024 * 1024;  // bytes
  double locality = 0.9;  // probability of reusing a recently touched line
  std::uint64_t seed = 1;
  unsigned line_size = 64;
  unsigned reuse_window = 1024;  // lines of history the reuse draw picks from
  unsigned cores = 4;

  void validate() const;

  friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;
};

std::vector<AccessRecord> gen_trace(const WorkloadSpec& spec);

// "R <hex-address>" / "W <hex-address>" per line, '#' comments.
std::vector<AccessRecord> parse_trace(std::istream& in, const std::string& source);
std::vector<AccessRecord> load_trace_file(const std::string& path);
void write_trace(std::ostream& out, const std::vector<AccessRecord>& trace);

}  // namespace meram::cache
