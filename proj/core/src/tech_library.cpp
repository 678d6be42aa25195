#include "meram/tech_library.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "meram/error.hpp"
#include "meram/kv_file.hpp"

namespace meram::tech {
namespace {

void require_positive(const std::string& profile, const char* field, double v) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ValidationError("profile " + profile + ": " + field + " must be positive");
}

void validate_level(const char* name, const CacheLevel& l) {
  if (l.capacity == 0 || l.associativity == 0 || l.line_size == 0)
    throw ValidationError(std::string(name) + ": geometry fields must be positive");
  if (l.capacity % l.line_size != 0)
    throw ValidationError(std::string(name) + ": line size must divide capacity");
  if ((l.capacity / l.line_size) % l.associativity != 0)
    throw ValidationError(std::string(name) + ": associativity must divide the line count");
}

Endurance parse_endurance(const kv::Entry& e, const std::string& source) {
  if (e.value == "unlimited") return Endurance::infinite();
  const auto dots = e.value.find("..");
  try {
    if (dots == std::string::npos) {
      const int d = std::stoi(e.value);
      return Endurance::decades(d, d);
    }
    std::size_t used_lo = 0;
    std::size_t used_hi = 0;
    const std::string lo = e.value.substr(0, dots);
    const std::string hi = e.value.substr(dots + 2);
    const int a = std::stoi(lo, &used_lo);
    const int b = std::stoi(hi, &used_hi);
    if (used_lo != lo.size() || used_hi != hi.size() || a > b) throw std::invalid_argument("range");
    return Endurance::decades(a, b);
  } catch (const std::logic_error&) {
    throw ParseError(source, e.line, "endurance must be 'lo..hi' decades or 'unlimited': " + e.value);
  }
}

}  // namespace

void TechnologyProfile::validate() const {
  if (name.empty()) throw ValidationError("profile name must not be empty");
  if (access_transistors < 1) throw ValidationError("profile " + name + ": access_transistors must be positive");
  require_positive(name, "area", area);
  require_positive(name, "hit_latency", hit_latency);
  if (miss_latency) require_positive(name, "miss_latency", *miss_latency);
  require_positive(name, "write_latency", write_latency);
  require_positive(name, "hit_energy", hit_energy);
  if (miss_energy) require_positive(name, "miss_energy", *miss_energy);
  require_positive(name, "write_energy", write_energy);
  require_positive(name, "leakage_power", leakage_power);
  if (!endurance.unlimited && endurance.min_decade > endurance.max_decade)
    throw ValidationError("profile " + name + ": endurance range is reversed");
}

double effective(const TechnologyProfile& p, OptionalField field) {
  switch (field) {
    case OptionalField::MissLatency: return p.miss_latency.value_or(p.hit_latency);
    case OptionalField::MissEnergy: return p.miss_energy.value_or(p.hit_energy);
  }
  return 0.0;
}

const std::vector<TechnologyProfile>& builtin_profiles() {
  using E = Endurance;
  static const std::vector<TechnologyProfile> profiles = {
      {"ReRAM", true, 1, 1.77, 2.55, 1.21, 20.5, 0.33, 0.033, 0.82, 0.38, E::decades(5, 10), false},
      {"STT-MRAM", true, 1, 5.42, 3.14, 1.28, 10.7, 0.52, 0.044, 1.27, 0.79, E::decades(10, 15), false},
      {"SOT-MRAM", true, 2, 5.85, 5.07, 1.32, 3.93, 0.21, 0.03, 0.27, 0.21, E::decades(10, 15), false},
      {"SRAM", false, 6, 12.4, 1.59, 0.34, 0.78, 0.73, 0.017, 0.72, 6.2, E::infinite(), false},
      {"eDRAM", false, 1, 4.46, 3.1, std::nullopt, 3.1, 0.24, std::nullopt, 0.24, 0.57, E::decades(15, 15), true},
      {"MERAM", true, 2, 6.94, 0.65, 0.22, 0.94, 0.22, 0.037, 0.27, 0.19, E::decades(17, 17), false},
  };
  return profiles;
}

const TechnologyProfile& find_profile(const std::vector<TechnologyProfile>& profiles,
                                      const std::string& name) {
  auto it = std::find_if(profiles.begin(), profiles.end(),
                         [&](const TechnologyProfile& p) { return p.name == name; });
  if (it == profiles.end()) throw ValidationError("unknown technology '" + name + "'");
  return *it;
}

std::vector<TechnologyProfile> load_profiles(std::istream& in, const std::string& source) {
  const auto doc = kv::parse(in, source);
  std::vector<TechnologyProfile> out;

  for (const auto& section : doc.sections) {
    if (section.name.empty()) {
      if (!section.entries.empty())
        throw ParseError(source, section.entries.front().line, "key outside a [technology] table");
      continue;
    }
    TechnologyProfile p;
    p.name = section.name;
    std::set<std::string> seen;

    auto number = [&](const kv::Entry& e) { return kv::to_double(e, source); };
    auto maybe = [&](const kv::Entry& e) -> std::optional<double> {
      if (e.value == "-") return std::nullopt;
      return number(e);
    };
    const std::map<std::string, std::function<void(const kv::Entry&)>> setters = {
        {"non_volatile", [&](const kv::Entry& e) { p.non_volatile = kv::to_bool(e, source); }},
        {"access_transistors", [&](const kv::Entry& e) { p.access_transistors = static_cast<int>(kv::to_uint(e, source)); }},
        {"area", [&](const kv::Entry& e) { p.area = number(e); }},
        {"hit_latency", [&](const kv::Entry& e) { p.hit_latency = number(e); }},
        {"miss_latency", [&](const kv::Entry& e) { p.miss_latency = maybe(e); }},
        {"write_latency", [&](const kv::Entry& e) { p.write_latency = number(e); }},
        {"hit_energy", [&](const kv::Entry& e) { p.hit_energy = number(e); }},
        {"miss_energy", [&](const kv::Entry& e) { p.miss_energy = maybe(e); }},
        {"write_energy", [&](const kv::Entry& e) { p.write_energy = number(e); }},
        {"leakage_power", [&](const kv::Entry& e) { p.leakage_power = number(e); }},
        {"endurance", [&](const kv::Entry& e) { p.endurance = parse_endurance(e, source); }},
        {"overwrite_issue", [&](const kv::Entry& e) { p.overwrite_issue = kv::to_bool(e, source); }},
    };
    for (const auto& e : section.entries) {
      auto it = setters.find(e.key);
      if (it == setters.end()) throw ParseError(source, e.line, "unknown profile field '" + e.key + "'");
      it->second(e);
      seen.insert(e.key);
    }
    for (const auto& [key, _] : setters) {
      const bool optional = key == "miss_latency" || key == "miss_energy";
      if (!optional && !seen.count(key))
        throw ParseError(source, section.line, "profile " + p.name + ": missing field '" + key + "'");
    }
    try {
      p.validate();
    } catch (const ValidationError& err) {
      throw ParseError(source, section.line, err.what());
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<TechnologyProfile> load_profiles_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open profile file");
  return load_profiles(in, path);
}

std::string format_endurance(const Endurance& e) {
  if (e.unlimited) return "unlimited";
  return std::to_string(e.min_decade) + ".." + std::to_string(e.max_decade);
}

void write_profiles(std::ostream& out, const std::vector<TechnologyProfile>& profiles) {
  out << "# Technology profiles for a 4 MB L2 macro.\n"
      << "# Units: area mm^2; *_latency ns; *_energy nJ; leakage_power W.\n"
      << "# endurance is a decade range lo..hi or 'unlimited'; '-' marks an absent value.\n";
  using kv::format_double;
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("-"); };
  for (const auto& p : profiles) {
    out << "\n[" << p.name << "]\n"
        << "non_volatile = " << (p.non_volatile ? "yes" : "no") << '\n'
        << "access_transistors = " << p.access_transistors << '\n'
        << "area = " << format_double(p.area) << '\n'
        << "hit_latency = " << format_double(p.hit_latency) << '\n'
        << "miss_latency = " << opt(p.miss_latency) << '\n'
        << "write_latency = " << format_double(p.write_latency) << '\n'
        << "hit_energy = " << format_double(p.hit_energy) << '\n'
        << "miss_energy = " << opt(p.miss_energy) << '\n'
        << "write_energy = " << format_double(p.write_energy) << '\n'
        << "leakage_power = " << format_double(p.leakage_power) << '\n'
        << "endurance = " << format_endurance(p.endurance) << '\n'
        << "overwrite_issue = " << (p.overwrite_issue ? "yes" : "no") << '\n';
  }
}

void SystemConfig::validate() const {
  if (cores == 0) throw ValidationError("system: cores must be positive");
  if (!(cpu_clock_ghz > 0.0)) throw ValidationError("system: cpu clock must be positive");
  validate_level("l1", l1);
  validate_level("l2", l2);
}

const SystemConfig& default_system() {
  static const SystemConfig cfg = [] {
    SystemConfig c;
    c.validate();
    return c;
  }();
  return cfg;
}

}  // namespace meram::tech
