#include "meram/cache_sim.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "meram/error.hpp"

namespace meram::cache {

void CacheConfig::validate() const {
  if (capacity == 0 || associativity == 0 || line_size == 0)
    throw ValidationError("cache: capacity, associativity and line size must be positive");
  const std::uint64_t set_bytes = std::uint64_t{associativity} * line_size;
  if (capacity % set_bytes != 0)
    throw ValidationError("cache: capacity must be a whole number of sets (assoc * line size)");
  if (!(memory_latency_ns >= 0.0)) throw ValidationError("cache: memory latency must be non-negative");
}

SetAssociativeCache::SetAssociativeCache(const CacheConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  sets_ = cfg_.sets();
  ways_.assign(sets_ * cfg_.associativity, Way{});
}

void SetAssociativeCache::reset() {
  std::fill(ways_.begin(), ways_.end(), Way{});
  clock_ = 0;
}

SetAssociativeCache::Outcome SetAssociativeCache::access(AccessOp op, std::uint64_t address) {
  const std::uint64_t line = address / cfg_.line_size;
  const std::uint64_t set = line % sets_;
  const std::uint64_t tag = line / sets_;
  Way* begin = ways_.data() + set * cfg_.associativity;
  Way* end = begin + cfg_.associativity;
  ++clock_;

  Way* victim = nullptr;
  for (Way* w = begin; w != end; ++w) {
    if (w->valid && w->tag == tag) {
      w->last_use = clock_;
      if (op == AccessOp::Write) w->dirty = true;
      return {true, false};
    }
    // First invalid way wins; otherwise the least recently used, lowest
    // index on ties.
    if (victim == nullptr || (victim->valid && (!w->valid || w->last_use < victim->last_use)))
      victim = w;
  }

  Outcome out{false, victim->valid && victim->dirty};
  *victim = Way{tag, clock_, true, op == AccessOp::Write};
  return out;
}

SimStats count_accesses(const CacheConfig& cfg, const std::vector<AccessRecord>& trace) {
  SetAssociativeCache cache(cfg);
  SimStats s;
  for (const auto& rec : trace) {
    const auto out = cache.access(rec.op, rec.address);
    const bool write = rec.op == AccessOp::Write;
    if (out.hit) {
      ++(write ? s.write_hits : s.read_hits);
    } else {
      ++(write ? s.write_misses : s.read_misses);
      if (out.dirty_eviction) ++s.writebacks;
    }
  }
  return s;
}

double exec_time(const SimStats& c, const tech::TechnologyProfile& p, const CacheConfig& cfg) {
  const double miss_path = tech::effective(p, tech::OptionalField::MissLatency) +
                           cfg.memory_latency_ns + p.write_latency;
  const double ns = static_cast<double>(c.read_hits) * p.hit_latency +
                    static_cast<double>(c.write_hits) * p.write_latency +
                    static_cast<double>(c.misses()) * miss_path +
                    static_cast<double>(c.writebacks) * p.write_latency;
  return ns * 1e-9;
}

SimStats simulate(const CacheConfig& cfg, const std::vector<AccessRecord>& trace,
                  const tech::TechnologyProfile& profile) {
  SimStats s = count_accesses(cfg, trace);
  s.exec_time = exec_time(s, profile, cfg);
  return s;
}

SimStats scaled(const SimStats& s, std::uint64_t factor) {
  SimStats out = s;
  out.read_hits *= factor;
  out.read_misses *= factor;
  out.write_hits *= factor;
  out.write_misses *= factor;
  out.writebacks *= factor;
  out.exec_time *= static_cast<double>(factor);
  return out;
}

EnergyBreakdown energy(const SimStats& s, const tech::TechnologyProfile& p) {
  constexpr double kJoulePerNj = 1e-9;
  EnergyBreakdown e;
  e.hit = static_cast<double>(s.hits()) * p.hit_energy * kJoulePerNj;
  e.miss = static_cast<double>(s.misses()) * tech::effective(p, tech::OptionalField::MissEnergy) *
           kJoulePerNj;
  e.write = static_cast<double>(s.write_accesses() + s.writebacks) * p.write_energy * kJoulePerNj;
  e.leakage = p.leakage_power * s.exec_time;
  return e;
}

// ---- workload generation ---------------------------------------------------

void WorkloadSpec::validate() const {
  if (!(write_fraction >= 0.0 && write_fraction <= 1.0))
    throw ValidationError("workload " + name + ": write_fraction must be in [0,1]");
  if (!(locality >= 0.0 && locality <= 1.0))
    throw ValidationError("workload " + name + ": locality must be in [0,1]");
  if (line_size == 0) throw ValidationError("workload " + name + ": line_size must be positive");
  if (footprint < line_size) throw ValidationError("workload " + name + ": footprint smaller than one line");
  if (reuse_window == 0) throw ValidationError("workload " + name + ": reuse_window must be positive");
  if (cores == 0) throw ValidationError("workload " + name + ": cores must be positive");
}

namespace {

__extension__ using Wide = unsigned __int128;

// Draws are taken straight from the engine so traces do not depend on the
// standard library's distribution implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<Wide>(engine_()) * n) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

std::vector<AccessRecord> gen_trace(const WorkloadSpec& spec) {
  spec.validate();
  Draw draw(spec.seed);
  const std::uint64_t lines = spec.footprint / spec.line_size;
  const std::uint64_t words_per_line = std::max<std::uint64_t>(1, spec.line_size / 8);

  std::vector<std::uint64_t> history(spec.reuse_window);
  std::uint64_t filled = 0;
  std::uint64_t head = 0;  // next write slot

  std::vector<AccessRecord> trace;
  trace.reserve(spec.n_accesses);
  for (std::uint64_t i = 0; i < spec.n_accesses; ++i) {
    std::uint64_t line = 0;
    if (filled > 0 && draw.unit() < spec.locality) {
      const std::uint64_t depth = draw.below(filled);  // 0 = most recent
      line = history[(head + spec.reuse_window - 1 - depth) % spec.reuse_window];
    } else {
      line = draw.below(lines);
    }
    history[head] = line;
    head = (head + 1) % spec.reuse_window;
    filled = std::min<std::uint64_t>(filled + 1, spec.reuse_window);

    const AccessOp op = draw.unit() < spec.write_fraction ? AccessOp::Write : AccessOp::Read;
    const std::uint64_t offset = draw.below(words_per_line) * 8 % spec.line_size;
    trace.push_back(AccessRecord{op, line * spec.line_size + offset,
                                 static_cast<std::uint32_t>(i % spec.cores)});
  }
  return trace;
}

// ---- trace files -----------------------------------------------------------

std::vector<AccessRecord> parse_trace(std::istream& in, const std::string& source) {
  std::vector<AccessRecord> trace;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::string op;
    std::string addr;
    if (!(ls >> op)) continue;
    if (!(ls >> addr)) throw ParseError(source, line_no, "missing address");
    std::string extra;
    if (ls >> extra) throw ParseError(source, line_no, "trailing token '" + extra + "'");

    AccessRecord rec;
    if (op == "R" || op == "r") {
      rec.op = AccessOp::Read;
    } else if (op == "W" || op == "w") {
      rec.op = AccessOp::Write;
    } else {
      throw ParseError(source, line_no, "operation must be R or W, got '" + op + "'");
    }
    std::string_view digits = addr;
    if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X'))
      digits.remove_prefix(2);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), rec.address, 16);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty())
      throw ParseError(source, line_no, "bad hex address '" + addr + "'");
    trace.push_back(rec);
  }
  return trace;
}

std::vector<AccessRecord> load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open trace file");
  return parse_trace(in, path);
}

void write_trace(std::ostream& out, const std::vector<AccessRecord>& trace) {
  char buf[24];
  for (const auto& rec : trace) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, rec.address, 16);
    out << (rec.op == AccessOp::Write ? "W 0x" : "R 0x") << std::string_view(buf, ptr - buf) << '\n';
  }
}

}  // namespace meram::cache
