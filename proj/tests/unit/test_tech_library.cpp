#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "meram/error.hpp"
#include "meram/tech_library.hpp"

namespace meram::tech {
namespace {

const TechnologyProfile& builtin(const std::string& name) { return find_profile(builtin_profiles(), name); }

TEST(TechLibrary, BuiltinOrderAndCount) {
  const auto& all = builtin_profiles();
  std::vector<std::string> names;
  for (const auto& p : all) names.push_back(p.name);
  EXPECT_EQ(names, (std::vector<std::string>{"ReRAM", "STT-MRAM", "SOT-MRAM", "SRAM", "eDRAM", "MERAM"}));
  for (const auto& p : all) EXPECT_NO_THROW(p.validate());
}

TEST(TechLibrary, TableValues) {
  const auto& m = builtin("MERAM");
  EXPECT_EQ(m.write_latency, 0.94);
  EXPECT_EQ(m.hit_latency, 0.65);
  EXPECT_EQ(m.miss_latency, 0.22);
  EXPECT_EQ(m.hit_energy, 0.22);
  EXPECT_EQ(m.miss_energy, 0.037);
  EXPECT_EQ(m.write_energy, 0.27);
  EXPECT_EQ(m.leakage_power, 0.19);
  EXPECT_EQ(m.area, 6.94);
  EXPECT_EQ(m.access_transistors, 2);
  EXPECT_EQ(m.endurance, Endurance::decades(17, 17));
  EXPECT_EQ(builtin("SRAM").leakage_power, 6.2);
  EXPECT_TRUE(builtin("SRAM").endurance.unlimited);
  EXPECT_FALSE(builtin("SRAM").non_volatile);
  EXPECT_EQ(builtin("ReRAM").write_latency, 20.5);
  EXPECT_EQ(builtin("SOT-MRAM").leakage_power, 0.21);
  EXPECT_EQ(builtin("STT-MRAM").area, 5.42);
}

TEST(TechLibrary, EdramAbsentValues) {
  const auto& e = builtin("eDRAM");
  EXPECT_FALSE(e.miss_latency.has_value());
  EXPECT_FALSE(e.miss_energy.has_value());
  EXPECT_TRUE(e.overwrite_issue);
  EXPECT_EQ(effective(e, OptionalField::MissLatency), 3.1);
  EXPECT_EQ(effective(e, OptionalField::MissEnergy), 0.24);
  EXPECT_EQ(effective(builtin("MERAM"), OptionalField::MissLatency), 0.22);
  EXPECT_EQ(effective(builtin("MERAM"), OptionalField::MissEnergy), 0.037);
}

TEST(TechLibrary, SpotFacts) {
  const auto& all = builtin_profiles();
  auto by = [&](auto key) {
    return std::minmax_element(all.begin(), all.end(),
                               [&](const auto& a, const auto& b) { return key(a) < key(b); });
  };
  EXPECT_EQ(by([](const TechnologyProfile& p) { return p.hit_latency; }).first->name, "MERAM");
  EXPECT_EQ(by([](const TechnologyProfile& p) { return p.leakage_power; }).first->name, "MERAM");
  EXPECT_EQ(by([](const TechnologyProfile& p) { return p.leakage_power; }).second->name, "SRAM");
  EXPECT_EQ(by([](const TechnologyProfile& p) { return p.area; }).second->name, "SRAM");
  EXPECT_NEAR(builtin("SRAM").area / builtin("MERAM").area, 1.787, 0.001);
}

TEST(TechLibrary, FindUnknown) { EXPECT_THROW(builtin("PCM"), ValidationError); }

TEST(TechLibrary, SerializeRoundTrip) {
  std::stringstream s;
  write_profiles(s, builtin_profiles());
  const auto loaded = load_profiles(s, "roundtrip");
  EXPECT_EQ(loaded, builtin_profiles());
}

TEST(TechLibrary, LoadErrors) {
  std::stringstream s;
  write_profiles(s, {builtin("MERAM")});
  const std::string good = s.str();

  auto load = [](const std::string& text) {
    std::istringstream in(text);
    return load_profiles(in, "p");
  };
  auto replace = [&](const std::string& from, const std::string& to) {
    std::string t = good;
    t.replace(t.find(from), from.size(), to);
    return t;
  };
  EXPECT_EQ(load(good).size(), 1u);
  EXPECT_TRUE(load("").empty());
  EXPECT_TRUE(load("# only comments\n").empty());
  EXPECT_THROW(load(replace("area = 6.94", "area = -6.94")), ParseError);
  EXPECT_THROW(load(replace("area = 6.94", "area = 0")), ParseError);
  EXPECT_THROW(load(replace("area = 6.94\n", "")), ParseError);
  EXPECT_THROW(load(replace("area = 6.94", "area = 6.94\ncolor = red")), ParseError);
  EXPECT_THROW(load(replace("endurance = 17..17", "endurance = 17..3")), ParseError);
  EXPECT_THROW(load(good + good), ParseError);  // duplicate [MERAM]
  EXPECT_THROW(load("area = 1\n"), ParseError);
  EXPECT_THROW(load_profiles_file("/nonexistent/profiles.ini"), ParseError);
}

TEST(TechLibrary, OptionalDash) {
  std::stringstream s;
  write_profiles(s, {builtin("eDRAM")});
  EXPECT_NE(s.str().find("miss_latency = -"), std::string::npos);
}

TEST(TechLibrary, EnduranceFormat) {
  EXPECT_EQ(format_endurance(Endurance::decades(5, 10)), "5..10");
  EXPECT_EQ(format_endurance(Endurance::infinite()), "unlimited");
}

TEST(TechLibrary, SystemConfig) {
  const auto& s = default_system();
  EXPECT_EQ(s.cores, 4u);
  EXPECT_EQ(s.cpu_clock_ghz, 3.3);
  EXPECT_EQ(s.l2.capacity, 4u * 1024 * 1024);
  EXPECT_EQ(s.l2.associativity, 8u);
  EXPECT_EQ(s.l1.capacity, 32u * 1024);
  SystemConfig bad = s;
  bad.l2.associativity = 3;
  EXPECT_THROW(bad.validate(), ValidationError);
}

}  // namespace
}  // namespace meram::tech
