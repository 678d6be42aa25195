#include "meram/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "meram/error.hpp"

namespace meram::config {
namespace {

using Setter = std::function<void(const kv::Entry&, const std::string&)>;
using SetterTable = std::map<std::string, Setter>;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = item.find_last_not_of(" \t");
    out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

template <typename T>
Setter real(T& field) {
  return [&field](const kv::Entry& e, const std::string& src) { field = kv::to_double(e, src); };
}

template <typename T>
Setter whole(T& field) {
  return [&field](const kv::Entry& e, const std::string& src) {
    const auto v = kv::to_uint(e, src);
    if (v > std::numeric_limits<T>::max()) throw ParseError(src, e.line, "'" + e.key + "' out of range");
    field = static_cast<T>(v);
  };
}

SetterTable device_setters(device::MefetParams& p) {
  return {
      {"eps_me", real(p.eps_me)}, {"eps_backgate", real(p.eps_backgate)}, {"t_me", real(p.t_me)},
      {"area_me", real(p.area_me)}, {"t_ox", real(p.t_ox)}, {"v_t", real(p.v_t)},
      {"v_g_nominal", real(p.v_g_nominal)}, {"r_on", real(p.r_on)}, {"r_off", real(p.r_off)},
      {"t_switch", real(p.t_switch)},
  };
}

SetterTable array_setters(cell::ArrayConfig& a) {
  return {
      {"rows", whole(a.rows)}, {"cols", whole(a.cols)}, {"v_dd", real(a.v_dd)},
      {"i_sense", real(a.i_sense)}, {"v_write", real(a.v_write)}, {"sa_offset", real(a.sa_offset)},
      {"r_access", real(a.r_access)}, {"clock_period", real(a.clock_period)},
  };
}

SetterTable cache_setters(cache::CacheConfig& c) {
  return {
      {"capacity", whole(c.capacity)}, {"associativity", whole(c.associativity)},
      {"line_size", whole(c.line_size)}, {"memory_latency_ns", real(c.memory_latency_ns)},
  };
}

SetterTable workload_setters(cache::WorkloadSpec& w, bool& seed_given) {
  return {
      {"n_accesses", whole(w.n_accesses)}, {"write_fraction", real(w.write_fraction)},
      {"footprint", whole(w.footprint)}, {"locality", real(w.locality)},
      {"seed", [&](const kv::Entry& e, const std::string& src) {
         w.seed = kv::to_uint(e, src);
         seed_given = true;
       }},
      {"line_size", whole(w.line_size)}, {"reuse_window", whole(w.reuse_window)}, {"cores", whole(w.cores)},
  };
}

SetterTable run_setters(RunConfig& cfg) {
  auto text = [](std::string& field) {
    return [&field](const kv::Entry& e, const std::string&) { field = e.value; };
  };
  return {
      {"profiles", text(cfg.profiles)},
      {"technologies", [&](const kv::Entry& e, const std::string&) { cfg.technologies = split_list(e.value); }},
      {"baseline", text(cfg.baseline)},
      {"candidate", text(cfg.candidate)},
      {"output_dir", text(cfg.output_dir)},
      {"formats", [&](const kv::Entry& e, const std::string& src) {
         try {
           cfg.formats = parse_formats(e.value);
         } catch (const ValidationError& err) {
           throw ParseError(src, e.line, err.what());
         }
       }},
      {"seed", whole(cfg.seed)},
      {"min_exec_time", real(cfg.min_exec_time)},
  };
}

void apply(const SetterTable& table, const kv::Section& section, const std::string& source) {
  for (const auto& e : section.entries) {
    auto it = table.find(e.key);
    if (it == table.end())
      throw ParseError(source, e.line, "unknown key '" + e.key + "' in [" + section.name + "]");
    it->second(e, source);
  }
}

}  // namespace

std::vector<report::Format> parse_formats(const std::string& list) {
  std::vector<report::Format> out;
  for (const auto& name : split_list(list)) {
    const auto f = report::parse_format(name);
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  if (out.empty()) throw ValidationError("at least one output format is required");
  return out;
}

std::vector<cache::WorkloadSpec> balanced_grid(std::uint64_t seed, std::uint64_t n_accesses) {
  std::vector<cache::WorkloadSpec> grid;
  for (double wf : {0.1, 0.3, 0.5}) {
    for (double loc : {0.5, 0.9}) {
      cache::WorkloadSpec w;
      w.name = "w" + std::to_string(static_cast<int>(wf * 100 + 0.5)) + "_l" +
               std::to_string(static_cast<int>(loc * 100 + 0.5));
      w.n_accesses = n_accesses;
      w.write_fraction = wf;
      w.locality = loc;
      w.footprint = 4ull * 1024 * 1024;
      w.seed = seed + grid.size();
      grid.push_back(w);
    }
  }
  return grid;
}

void RunConfig::validate() const {
  array.validate();
  cache.validate();
  if (workloads.empty()) throw ValidationError("run: no workloads");
  std::set<std::string> names;
  for (const auto& w : workloads) {
    if (w.name.empty()) throw ValidationError("run: workload name must not be empty");
    if (!names.insert(w.name).second) throw ValidationError("run: duplicate workload '" + w.name + "'");
    w.validate();
  }
  if (profiles.empty()) throw ValidationError("run: profiles must be 'builtin' or a file path");
  if (baseline.empty() || candidate.empty()) throw ValidationError("run: baseline and candidate must be set");
  if (output_dir.empty()) throw ValidationError("run: output_dir must not be empty");
  if (formats.empty()) throw ValidationError("run: at least one format is required");
  if (!(min_exec_time >= 0.0)) throw ValidationError("run: min_exec_time must be non-negative");
}

RunConfig from_document(const kv::Document& doc, const Overrides& overrides) {
  RunConfig cfg;
  const std::string& src = doc.source;
  struct PendingWorkload {
    cache::WorkloadSpec spec;
    bool seed_given = false;
  };
  std::vector<PendingWorkload> workloads;

  for (const auto& section : doc.sections) {
    if (section.name.empty()) {
      if (!section.entries.empty())
        throw ParseError(src, section.entries.front().line, "key outside a section");
    } else if (section.name == "device") {
      apply(device_setters(cfg.array.device), section, src);
    } else if (section.name == "array") {
      apply(array_setters(cfg.array), section, src);
    } else if (section.name == "cache") {
      apply(cache_setters(cfg.cache), section, src);
    } else if (section.name == "run") {
      apply(run_setters(cfg), section, src);
    } else if (section.name.rfind("workload.", 0) == 0) {
      PendingWorkload w;
      w.spec.name = section.name.substr(9);
      apply(workload_setters(w.spec, w.seed_given), section, src);
      workloads.push_back(std::move(w));
    } else {
      throw ParseError(src, section.line, "unknown section [" + section.name + "]");
    }
  }

  for (const auto& setting : overrides.settings) {
    const auto eq = setting.find('=');
    if (eq == std::string::npos) throw ValidationError("override '" + setting + "' is not key=value");
    kv::Entry e{setting.substr(0, eq), setting.substr(eq + 1), 0};
    auto dev = device_setters(cfg.array.device);
    auto arr = array_setters(cfg.array);
    if (auto it = dev.find(e.key); it != dev.end()) {
      it->second(e, "override");
    } else if (auto it2 = arr.find(e.key); it2 != arr.end()) {
      it2->second(e, "override");
    } else {
      throw ValidationError("override '" + e.key + "' is not a device or array parameter");
    }
  }
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.profiles) cfg.profiles = *overrides.profiles;
  if (overrides.output_dir) cfg.output_dir = *overrides.output_dir;
  if (overrides.formats) cfg.formats = *overrides.formats;

  if (workloads.empty()) {
    cfg.workloads = balanced_grid(cfg.seed);
  } else {
    for (std::size_t i = 0; i < workloads.size(); ++i) {
      auto spec = workloads[i].spec;
      if (!workloads[i].seed_given) spec.seed = cfg.seed + i;
      cfg.workloads.push_back(spec);
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_file(const std::string& path, const Overrides& overrides) {
  return from_document(kv::parse_file(path), overrides);
}

RunConfig defaults(const Overrides& overrides) { return from_document(kv::Document{"<defaults>", {}}, overrides); }

void write(std::ostream& out, const RunConfig& cfg) {
  using kv::format_double;
  out << "# resolved run configuration\n\n";
  device::write_params(out, cfg.array.device);

  const auto& a = cfg.array;
  out << "\n[array]\n"
      << "rows = " << a.rows << "\ncols = " << a.cols << "\nv_dd = " << format_double(a.v_dd)
      << "\ni_sense = " << format_double(a.i_sense) << "\nv_write = " << format_double(a.v_write)
      << "\nsa_offset = " << format_double(a.sa_offset) << "\nr_access = " << format_double(a.r_access)
      << "\nclock_period = " << format_double(a.clock_period) << '\n';

  const auto& c = cfg.cache;
  out << "\n[cache]\n"
      << "capacity = " << c.capacity << "\nassociativity = " << c.associativity
      << "\nline_size = " << c.line_size << "\nmemory_latency_ns = " << format_double(c.memory_latency_ns)
      << '\n';

  std::vector<std::string> formats;
  for (auto f : cfg.formats) formats.push_back(report::extension(f));
  out << "\n[run]\n"
      << "profiles = " << cfg.profiles << "\ntechnologies = " << join(cfg.technologies)
      << "\nbaseline = " << cfg.baseline << "\ncandidate = " << cfg.candidate
      << "\noutput_dir = " << cfg.output_dir << "\nformats = " << join(formats) << "\nseed = " << cfg.seed
      << "\nmin_exec_time = " << format_double(cfg.min_exec_time) << '\n';

  for (const auto& w : cfg.workloads) {
    out << "\n[workload." << w.name << "]\n"
        << "n_accesses = " << w.n_accesses << "\nwrite_fraction = " << format_double(w.write_fraction)
        << "\nfootprint = " << w.footprint << "\nlocality = " << format_double(w.locality)
        << "\nseed = " << w.seed << "\nline_size = " << w.line_size << "\nreuse_window = " << w.reuse_window
        << "\ncores = " << w.cores << '\n';
  }
}

}  // namespace meram::config
