#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "meram/cache_sim.hpp"
#include "meram/error.hpp"
#include "reference_cache.hpp"

namespace meram::cache {
namespace {

const tech::TechnologyProfile& profile(const std::string& name) {
  return tech::find_profile(tech::builtin_profiles(), name);
}

oracle::RefCounters reference(const CacheConfig& cfg, const std::vector<AccessRecord>& trace) {
  std::vector<oracle::RefAccess> ref;
  ref.reserve(trace.size());
  for (const auto& a : trace) ref.push_back({a.op == AccessOp::Write, a.address});
  return oracle::reference_simulate(cfg.capacity, cfg.associativity, cfg.line_size, ref);
}

void expect_equal(const SimStats& s, const oracle::RefCounters& r) {
  EXPECT_EQ(s.read_hits, r.read_hits);
  EXPECT_EQ(s.read_misses, r.read_misses);
  EXPECT_EQ(s.write_hits, r.write_hits);
  EXPECT_EQ(s.write_misses, r.write_misses);
  EXPECT_EQ(s.writebacks, r.writebacks);
}

std::vector<AccessRecord> random_trace(std::mt19937_64& rng, std::size_t n, std::uint64_t span) {
  std::vector<AccessRecord> t;
  for (std::size_t i = 0; i < n; ++i)
    t.push_back({rng() % 3 == 0 ? AccessOp::Write : AccessOp::Read, rng() % span, 0});
  return t;
}

TEST(Cache, ColdMissThenHit) {
  const std::vector<AccessRecord> trace{{AccessOp::Read, 0x1000, 0}, {AccessOp::Read, 0x1008, 0}};
  for (const CacheConfig cfg : {CacheConfig{}, CacheConfig{64, 1, 64, 0}, CacheConfig{4096, 4, 32, 10}}) {
    const auto s = count_accesses(cfg, trace);
    EXPECT_EQ(s.read_misses, 1u);
    EXPECT_EQ(s.read_hits, 1u);
  }
}

TEST(Cache, WritesToOneSetEvictDirtyLines) {
  const CacheConfig cfg{4096, 4, 64, 0};  // 16 sets
  const std::uint64_t stride = cfg.sets() * cfg.line_size;
  for (std::uint64_t n : {5u, 8u, 13u}) {
    std::vector<AccessRecord> trace;
    for (std::uint64_t i = 0; i < n; ++i) trace.push_back({AccessOp::Write, i * stride, 0});
    const auto s = count_accesses(cfg, trace);
    EXPECT_EQ(s.write_misses, n);
    EXPECT_EQ(s.writebacks, n - cfg.associativity);
  }
}

TEST(Cache, LruOrder) {
  const CacheConfig cfg{128, 2, 64, 0};  // one set, two ways
  // A B A C -> C evicts B; A remains.
  const std::vector<AccessRecord> trace{
      {AccessOp::Read, 0, 0}, {AccessOp::Read, 64, 0}, {AccessOp::Read, 0, 0},
      {AccessOp::Read, 128, 0}, {AccessOp::Read, 0, 0}, {AccessOp::Read, 64, 0}};
  const auto s = count_accesses(cfg, trace);
  EXPECT_EQ(s.read_hits, 2u);
  EXPECT_EQ(s.read_misses, 4u);
}

TEST(Cache, DirectMappedToyMatchesOracle) {
  const CacheConfig cfg{64 * 64, 1, 64, 0};
  std::mt19937_64 rng(21);
  const auto trace = random_trace(rng, 1000, 64 * 64 * 4);
  expect_equal(count_accesses(cfg, trace), reference(cfg, trace));
}

TEST(Cache, RandomConfigsMatchOracle) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 40; ++i) {
    const unsigned line = 16u << (rng() % 3);
    const unsigned assoc = 1u << (rng() % 4);
    const std::uint64_t sets = 1 + rng() % 8;
    const CacheConfig cfg{sets * assoc * line, assoc, line, 0};
    auto trace = random_trace(rng, 2000, cfg.capacity * (1 + rng() % 4));
    expect_equal(count_accesses(cfg, trace), reference(cfg, trace));
  }
}

TEST(Cache, CountersIndependentOfTechnology) {
  std::mt19937_64 rng(23);
  const CacheConfig cfg{8192, 4, 64, 50};
  const auto trace = random_trace(rng, 5000, 32768);
  const auto base = count_accesses(cfg, trace);
  for (const auto& p : tech::builtin_profiles()) {
    auto s = simulate(cfg, trace, p);
    EXPECT_GT(s.exec_time, 0.0);
    s.exec_time = 0.0;
    EXPECT_EQ(s, base) << p.name;
  }
}

TEST(Cache, ExecTime) {
  SimStats s;
  s.read_hits = 10;
  s.write_hits = 5;
  s.read_misses = 2;
  s.write_misses = 1;
  s.writebacks = 1;
  const CacheConfig cfg{};
  const auto& m = profile("MERAM");
  const double ns = 10 * 0.65 + 5 * 0.94 + 3 * (0.22 + 50.0 + 0.94) + 1 * 0.94;
  EXPECT_NEAR(exec_time(s, m, cfg), ns * 1e-9, 1e-21);
  const auto& e = profile("eDRAM");
  EXPECT_NEAR(exec_time(s, e, cfg), (10 * 3.1 + 5 * 3.1 + 3 * (3.1 + 50 + 3.1) + 3.1) * 1e-9, 1e-21);
}

TEST(Cache, Scaled) {
  SimStats s{1, 2, 3, 4, 5, 1e-6};
  const auto k = scaled(s, 7);
  EXPECT_EQ(k.read_hits, 7u);
  EXPECT_EQ(k.writebacks, 35u);
  EXPECT_DOUBLE_EQ(k.exec_time, 7e-6);
}

TEST(Cache, ConfigValidation) {
  EXPECT_THROW((CacheConfig{1000, 8, 64, 0}).validate(), ValidationError);
  EXPECT_THROW((CacheConfig{0, 8, 64, 0}).validate(), ValidationError);
  EXPECT_THROW((CacheConfig{4096, 4, 64, -1}).validate(), ValidationError);
  EXPECT_EQ(CacheConfig{}.sets(), 8192u);
}

TEST(Energy, DynamicArithmetic) {
  SimStats s;
  s.read_hits = 80;
  s.write_hits = 20;
  s.read_misses = 10;
  const auto e = energy(s, profile("MERAM"));
  EXPECT_NEAR(e.dynamic(), 27.77e-9, 1e-20);
  EXPECT_NEAR(e.hit, 22e-9, 1e-20);
  EXPECT_NEAR(e.miss, 0.37e-9, 1e-20);
  EXPECT_NEAR(e.write, 5.4e-9, 1e-20);
  EXPECT_EQ(e.leakage, 0.0);
}

TEST(Energy, Leakage) {
  SimStats s;
  s.exec_time = 1e-6;
  EXPECT_NEAR(energy(s, profile("MERAM")).leakage, 190e-9, 1e-20);
  const auto zero = energy(SimStats{}, profile("MERAM"));
  EXPECT_EQ(zero.dynamic(), 0.0);
  EXPECT_EQ(zero.total(), 0.0);
}

TEST(Energy, WritebacksCountAsWrites) {
  SimStats s;
  s.writebacks = 3;
  EXPECT_NEAR(energy(s, profile("MERAM")).write, 3 * 0.27e-9, 1e-20);
}

TEST(Energy, MonotoneInCounts) {
  std::mt19937_64 rng(24);
  for (const auto& p : tech::builtin_profiles()) {
    SimStats s{rng() % 100, rng() % 100, rng() % 100, rng() % 100, rng() % 100, 1e-6};
    const double base = energy(s, p).total();
    for (int field = 0; field < 6; ++field) {
      SimStats t = s;
      switch (field) {
        case 0: ++t.read_hits; break;
        case 1: ++t.read_misses; break;
        case 2: ++t.write_hits; break;
        case 3: ++t.write_misses; break;
        case 4: ++t.writebacks; break;
        default: t.exec_time *= 2; break;
      }
      EXPECT_GT(energy(t, p).total(), base) << p.name << " field " << field;
    }
  }
}

TEST(Trace, NoWritesAtZeroFraction) {
  WorkloadSpec w;
  w.n_accesses = 20000;
  w.write_fraction = 0.0;
  for (const auto& a : gen_trace(w)) ASSERT_EQ(a.op, AccessOp::Read);
}

TEST(Trace, WriteFractionAndCores) {
  WorkloadSpec w;
  w.n_accesses = 100000;
  w.write_fraction = 0.3;
  const auto t = gen_trace(w);
  std::size_t writes = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    writes += t[i].op == AccessOp::Write;
    ASSERT_EQ(t[i].core, i % 4);
    ASSERT_LT(t[i].address, w.footprint);
    ASSERT_EQ(t[i].address % 8, 0u);
  }
  EXPECT_NEAR(static_cast<double>(writes) / t.size(), 0.3, 0.01);
}

TEST(Trace, UniformAddressingMissesAlmostAlways) {
  WorkloadSpec w;
  w.n_accesses = 100000;
  w.locality = 0.0;
  w.footprint = 1ull << 34;  // 16 GiB >> 4 MiB cache
  const auto s = count_accesses(CacheConfig{}, gen_trace(w));
  EXPECT_GE(static_cast<double>(s.misses()) / s.accesses(), 0.95);
}

TEST(Trace, Deterministic) {
  WorkloadSpec w;
  w.n_accesses = 50000;
  EXPECT_EQ(gen_trace(w), gen_trace(w));
  WorkloadSpec other = w;
  other.seed = 2;
  EXPECT_NE(gen_trace(w), gen_trace(other));
}

TEST(Trace, LocalityRaisesHitRate) {
  WorkloadSpec lo;
  lo.n_accesses = 100000;
  lo.locality = 0.5;
  WorkloadSpec hi = lo;
  hi.locality = 0.9;
  const CacheConfig cfg{};
  const auto a = count_accesses(cfg, gen_trace(lo));
  const auto b = count_accesses(cfg, gen_trace(hi));
  EXPECT_GT(b.hits(), a.hits());
}

TEST(Trace, SpecValidation) {
  WorkloadSpec w;
  w.write_fraction = 1.5;
  EXPECT_THROW(gen_trace(w), ValidationError);
  w = WorkloadSpec{};
  w.footprint = 8;
  EXPECT_THROW(gen_trace(w), ValidationError);
}

TEST(TraceFile, RoundTripAndErrors) {
  WorkloadSpec w;
  w.n_accesses = 1000;
  auto t = gen_trace(w);
  std::stringstream s;
  write_trace(s, t);
  auto back = parse_trace(s, "t");
  ASSERT_EQ(back.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(back[i].op, t[i].op);
    EXPECT_EQ(back[i].address, t[i].address);
  }
  std::istringstream plain("# c\nR 1f\nw 0XFF\n\n");
  const auto p = parse_trace(plain, "p");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].address, 0x1fu);
  EXPECT_EQ(p[1].op, AccessOp::Write);
  for (const char* bad : {"X 10\n", "R\n", "R zz\n", "R 10 extra\n", "R 0x\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(parse_trace(in, "b"), ParseError) << bad;
  }
  EXPECT_THROW(load_trace_file("/nonexistent/trace.txt"), ParseError);
}

}  // namespace
}  // namespace meram::cache
