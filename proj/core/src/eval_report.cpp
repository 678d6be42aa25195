#include "meram/eval_report.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "meram/error.hpp"
#include "meram/kv_file.hpp"

namespace meram::report {

double eat(double total_energy, double area, double total_latency) {
  if (!(total_energy >= 0.0 && area >= 0.0 && total_latency >= 0.0))
    throw ValidationError("eat: factors must be non-negative");
  return total_energy * area * total_latency;
}

double reduction_pct(double candidate_eat, double reference_eat) {
  if (!(reference_eat > 0.0)) throw ValidationError("reduction_pct: reference EAT must be positive");
  return 100.0 * (1.0 - candidate_eat / reference_eat);
}

EatReport make_report(const std::string& workload, const cache::SimStats& stats,
                      const tech::TechnologyProfile& profile) {
  EatReport r;
  r.technology = profile.name;
  r.workload = workload;
  r.stats = stats;
  r.energy = cache::energy(stats, profile);
  r.dynamic_energy = r.energy.dynamic();
  r.leakage_energy = r.energy.leakage;
  r.total_energy = r.dynamic_energy + r.leakage_energy;
  r.area = profile.area;
  r.total_latency = stats.exec_time;
  r.eat = eat(r.total_energy, r.area, r.total_latency);
  return r;
}

std::vector<EatReport> normalize(std::vector<EatReport> reports, const std::string& baseline) {
  double eat_sum = 0.0;
  double latency_sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : reports) {
    if (r.technology != baseline) continue;
    eat_sum += r.eat;
    latency_sum += r.total_latency;
    ++n;
  }
  if (n == 0) throw ValidationError("normalize: baseline '" + baseline + "' not in reports");
  const double eat_mean = eat_sum / static_cast<double>(n);
  const double latency_mean = latency_sum / static_cast<double>(n);
  if (!(eat_mean > 0.0) || !(latency_mean > 0.0))
    throw ValidationError("normalize: baseline '" + baseline + "' has zero EAT or latency");
  for (auto& r : reports) {
    r.normalized_eat = r.eat / eat_mean;
    r.normalized_latency = r.total_latency / latency_mean;
  }
  return reports;
}

std::vector<Reduction> reductions(const std::vector<EatReport>& reports, const std::string& candidate) {
  std::map<std::string, double> candidate_eat;
  std::vector<std::string> references;
  std::vector<std::string> workloads;
  for (const auto& r : reports) {
    if (r.technology == candidate) {
      candidate_eat[r.workload] = r.eat;
      workloads.push_back(r.workload);
    } else if (std::find(references.begin(), references.end(), r.technology) == references.end()) {
      references.push_back(r.technology);
    }
  }

  std::vector<Reduction> out;
  for (const auto& ref : references) {
    Reduction red{candidate, ref, {}, 0.0};
    for (const auto& w : workloads) {
      auto it = std::find_if(reports.begin(), reports.end(), [&](const EatReport& r) {
        return r.technology == ref && r.workload == w;
      });
      if (it == reports.end()) continue;
      red.per_workload.emplace_back(w, reduction_pct(candidate_eat[w], it->eat));
    }
    if (red.per_workload.empty()) continue;
    double sum = 0.0;
    for (const auto& [_, pct] : red.per_workload) sum += pct;
    red.mean = sum / static_cast<double>(red.per_workload.size());
    out.push_back(std::move(red));
  }
  return out;
}

std::string min_eat_technology(const std::vector<EatReport>& reports, const std::string& workload) {
  const EatReport* best = nullptr;
  for (const auto& r : reports)
    if (r.workload == workload && (best == nullptr || r.eat < best->eat)) best = &r;
  if (best == nullptr) throw ValidationError("no reports for workload '" + workload + "'");
  return best->technology;
}

// ---- emission ------------------------------------------------------------

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ValidationError("unsupported format '" + name + "' (expected csv or json)");
}

std::string extension(Format f) { return f == Format::Csv ? "csv" : "json"; }

namespace {

std::string csv_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
    std::string operator()(double d) const { return kv::format_double(d); }
    std::string operator()(std::uint64_t u) const { return std::to_string(u); }
    std::string operator()(bool b) const { return b ? "1" : "0"; }
  };
  return std::visit(Visitor{}, c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

}  // namespace

std::string render(const Table& table, Format format) {
  if (format == Format::Csv) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
      out << '\n';
    }
    return out.str();
  }

  nlohmann::ordered_json doc;
  doc["schema"] = kSchemaVersion;
  doc["table"] = table.name;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = json_cell(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

Table eat_table(const std::vector<EatReport>& reports) {
  Table t{"eat",
          {"technology", "workload", "dynamic_energy_j", "leakage_energy_j", "total_energy_j", "area_mm2",
           "total_latency_s", "eat_j_mm2_s", "normalized_eat"},
          {}};
  for (const auto& r : reports)
    t.rows.push_back({r.technology, r.workload, r.dynamic_energy, r.leakage_energy, r.total_energy, r.area,
                      r.total_latency, r.eat, r.normalized_eat});
  return t;
}

Table stats_table(const std::vector<EatReport>& reports) {
  Table t{"stats",
          {"technology", "workload", "read_hits", "read_misses", "write_hits", "write_misses", "writebacks",
           "exec_time_s"},
          {}};
  for (const auto& r : reports) {
    const auto& s = r.stats;
    t.rows.push_back({r.technology, r.workload, s.read_hits, s.read_misses, s.write_hits, s.write_misses,
                      s.writebacks, s.exec_time});
  }
  return t;
}

Table energy_table(const std::vector<EatReport>& reports) {
  Table t{"energy",
          {"technology", "workload", "hit_energy_j", "miss_energy_j", "write_energy_j", "dynamic_energy_j",
           "leakage_energy_j", "total_energy_j"},
          {}};
  for (const auto& r : reports)
    t.rows.push_back({r.technology, r.workload, r.energy.hit, r.energy.miss, r.energy.write, r.dynamic_energy,
                      r.leakage_energy, r.total_energy});
  return t;
}

Table latency_table(const std::vector<EatReport>& reports) {
  Table t{"latency", {"technology", "workload", "total_latency_s", "normalized_latency"}, {}};
  for (const auto& r : reports) t.rows.push_back({r.technology, r.workload, r.total_latency, r.normalized_latency});
  return t;
}

Table reduction_table(const std::vector<Reduction>& reductions) {
  Table t{"reductions", {"candidate", "reference", "workload", "eat_reduction_pct"}, {}};
  for (const auto& red : reductions) {
    for (const auto& [w, pct] : red.per_workload) t.rows.push_back({red.candidate, red.reference, w, pct});
    t.rows.push_back({red.candidate, red.reference, std::string("mean"), red.mean});
  }
  return t;
}

Table radar_table(const std::vector<tech::TechnologyProfile>& profiles) {
  Table t{"radar",
          {"technology", "latency", "write_energy", "leakage", "area", "endurance_decade"},
          {}};
  double max_latency = 0.0;
  double max_write = 0.0;
  double max_leak = 0.0;
  double max_area = 0.0;
  int max_decade = 0;
  for (const auto& p : profiles) {
    max_latency = std::max(max_latency, p.hit_latency);
    max_write = std::max(max_write, p.write_energy);
    max_leak = std::max(max_leak, p.leakage_power);
    max_area = std::max(max_area, p.area);
    if (!p.endurance.unlimited) max_decade = std::max(max_decade, p.endurance.max_decade);
  }
  for (const auto& p : profiles) {
    // Unlimited endurance sits at the outer ring.
    const double endurance = p.endurance.unlimited || max_decade == 0
                                 ? 1.0
                                 : static_cast<double>(p.endurance.max_decade) / max_decade;
    t.rows.push_back({p.name, p.hit_latency / max_latency, p.write_energy / max_write, p.leakage_power / max_leak,
                      p.area / max_area, endurance});
  }
  return t;
}

Table profile_table(const std::vector<tech::TechnologyProfile>& profiles) {
  Table t{"profiles",
          {"technology", "non_volatile", "access_transistors", "area_mm2", "hit_latency_ns", "miss_latency_ns",
           "write_latency_ns", "hit_energy_nj", "miss_energy_nj", "write_energy_nj", "leakage_power_w",
           "endurance", "overwrite_issue"},
          {}};
  auto opt = [](const std::optional<double>& v) -> Cell {
    if (v) return *v;
    return std::string("-");
  };
  for (const auto& p : profiles)
    t.rows.push_back({p.name, p.non_volatile, static_cast<std::uint64_t>(p.access_transistors), p.area,
                      p.hit_latency, opt(p.miss_latency), p.write_latency, p.hit_energy, opt(p.miss_energy),
                      p.write_energy, p.leakage_power, tech::format_endurance(p.endurance), p.overwrite_issue});
  return t;
}

std::string emit(const std::vector<EatReport>& reports, Format format) {
  return render(eat_table(reports), format);
}

}  // namespace meram::report
