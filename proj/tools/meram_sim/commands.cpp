#include "commands.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "meram/array_estimator.hpp"
#include "meram/error.hpp"
#include "meram/kv_file.hpp"
#include "meram/pipeline.hpp"

namespace meram::cli {
namespace fs = std::filesystem;
using kv::format_double;

namespace {

fs::path prepare_output(const config::RunConfig& cfg) {
  fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  std::ofstream resolved(dir / "resolved.cfg");
  config::write(resolved, cfg);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

void write_tables(const fs::path& dir, const config::RunConfig& cfg, const report::Table& table) {
  for (auto fmt : cfg.formats) write_file(dir / (table.name + "." + report::extension(fmt)), report::render(table, fmt));
}

}  // namespace

int cmd_device(const config::RunConfig& cfg, const DeviceOptions& opts, std::ostream& out) {
  const auto dir = prepare_output(cfg);
  const auto& params = cfg.array.device;
  cell::MeramArray array(cfg.array);

  std::vector<cell::ScriptStep> script;
  if (opts.script.empty()) {
    script = cell::two_experiment_script(cfg.array.clock_period);
  } else {
    std::ifstream in(opts.script);
    if (!in) throw ParseError(opts.script, 0, "cannot open script");
    script = cell::parse_script(in, opts.script);
  }

  // Track polarization flips caused by each write step.
  std::size_t writes = 0;
  std::size_t switched = 0;
  cell::MeramArray probe(cfg.array);
  std::vector<cell::ScriptStep> sorted = script;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.t < b.t; });
  const auto samples = cell::transient_trace(array, sorted, cfg.array.clock_period);
  for (const auto& step : sorted) {
    if (step.op != cell::ScriptOp::Write) continue;
    ++writes;
    const auto before = probe.cell(step.row, step.col).device.polarization;
    probe.write_bit(step.row, step.col, step.bit, cfg.array.clock_period / 2.0);
    if (probe.cell(step.row, step.col).device.polarization != before) ++switched;
  }

  std::ofstream wave(dir / "waveform.csv", std::ios::binary);
  cell::write_waveform_csv(wave, samples);

  std::string decisions;
  for (const auto& s : samples)
    if (s.rwl) decisions += (decisions.empty() ? "" : ",") + std::to_string(s.sa_out);

  const bool sub_threshold = cfg.array.v_write <= params.v_t;
  std::ostringstream summary;
  summary << "me_capacitance_f = " << format_double(device::me_capacitance(params)) << '\n'
          << "write_energy_j = " << format_double(device::write_energy(params, cfg.array.v_write)) << '\n'
          << "on_off_ratio = " << format_double(params.on_off_ratio()) << '\n'
          << "v_write = " << format_double(cfg.array.v_write) << '\n'
          << "v_t = " << format_double(params.v_t) << '\n'
          << "sub_threshold_write = " << (sub_threshold ? "yes" : "no") << '\n'
          << "writes = " << writes << '\n'
          << "switched_writes = " << switched << '\n'
          << "sa_decisions = " << decisions << '\n';
  write_file(dir / "device_summary.txt", summary.str());
  out << summary.str();
  if (sub_threshold) out << "warning: |v_write| does not exceed v_t; writes cannot switch the cell\n";
  return kExitOk;
}

int cmd_array(const config::RunConfig& cfg, const ArrayOptions& opts, std::ostream& out) {
  const auto dir = prepare_output(cfg);
  cell::MeramArray array(cfg.array);
  const std::size_t rows = array.rows();
  const std::size_t cols = array.cols();

  std::size_t roundtrips = 0;
  std::size_t roundtrip_failures = 0;
  std::size_t half_select_failures = 0;
  std::size_t destructive_reads = 0;

  auto snapshot = [&] {
    std::vector<device::Polarization> pol;
    pol.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) pol.push_back(array.cell(r, c).device.polarization);
    return pol;
  };
  auto write_and_check = [&](std::size_t r, std::size_t c, int bit) {
    auto before = snapshot();
    array.write_bit(r, c, bit);
    auto after = snapshot();
    before[r * cols + c] = after[r * cols + c];
    if (before != after) ++half_select_failures;
    const auto hash = array.state_hash();
    ++roundtrips;
    if (array.read_bit(r, c).bit != bit) ++roundtrip_failures;
    if (array.state_hash() != hash) ++destructive_reads;
  };

  const bool exhaustive = rows * cols <= 4096;
  if (exhaustive) {
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        for (int bit : {1, 0}) write_and_check(r, c, bit);
  } else {
    std::mt19937_64 rng(cfg.seed);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (rng() & 1) array.write_bit(r, c, 1);
    for (std::size_t i = 0; i < opts.operations; ++i) {
      const std::size_t r = rng() % rows;
      const std::size_t c = rng() % cols;
      if (rng() & 1) {
        write_and_check(r, c, static_cast<int>(rng() & 1));
      } else {
        const auto hash = array.state_hash();
        (void)array.read_bit(r, c);
        if (array.state_hash() != hash) ++destructive_reads;
      }
    }
  }

  const double v_low = array.v_low(0, 0);
  const double v_high = array.v_high(0, 0);
  const double v_ref = cell::reference_voltage(v_low, v_high);
  std::ostringstream rep;
  rep << "rows = " << rows << "\ncols = " << cols << "\nmode = " << (exhaustive ? "exhaustive" : "randomized")
      << "\nroundtrips = " << roundtrips << "\nroundtrip_failures = " << roundtrip_failures
      << "\nhalf_select_failures = " << half_select_failures << "\ndestructive_reads = " << destructive_reads
      << "\nv_low = " << format_double(v_low) << "\nv_high = " << format_double(v_high)
      << "\nv_ref = " << format_double(v_ref) << "\nmargin_0 = " << format_double(v_ref - v_low)
      << "\nmargin_1 = " << format_double(v_high - v_ref) << '\n';
  write_file(dir / "array_report.txt", rep.str());
  out << rep.str();
  const bool ok = roundtrip_failures == 0 && half_select_failures == 0 && destructive_reads == 0;
  return ok ? kExitOk : kExitInvariant;
}

int cmd_simulate(const config::RunConfig& cfg, const SimulateOptions& opts, std::ostream& out) {
  const auto dir = prepare_output(cfg);
  const auto profiles = pipeline::select_profiles(cfg);

  std::vector<report::EatReport> reports;
  auto run_one = [&](const std::string& name, const std::vector<cache::AccessRecord>& trace) {
    const auto counters = cache::count_accesses(cfg.cache, trace);
    for (const auto& p : profiles) {
      auto s = counters;
      s.exec_time = cache::exec_time(s, p, cfg.cache);
      reports.push_back(report::make_report(name, s, p));
    }
  };
  if (!opts.trace.empty()) {
    run_one(fs::path(opts.trace).stem().string(), cache::load_trace_file(opts.trace));
  } else {
    for (const auto& w : cfg.workloads) run_one(w.name, cache::gen_trace(w));
  }

  write_tables(dir, cfg, report::stats_table(reports));
  write_tables(dir, cfg, report::energy_table(reports));
  for (const auto& r : reports) {
    const auto& s = r.stats;
    out << r.workload << ' ' << r.technology << ": " << s.hits() << " hits, " << s.misses() << " misses, "
        << s.writebacks << " writebacks, " << format_double(s.exec_time) << " s\n";
  }
  return kExitOk;
}

int cmd_compare(const config::RunConfig& cfg, std::ostream& out) {
  const auto dir = prepare_output(cfg);
  const auto profiles = pipeline::select_profiles(cfg);
  const auto grid = pipeline::run_grid(cfg, profiles, pipeline::thread_budget());

  write_tables(dir, cfg, report::stats_table(grid.reports));
  write_tables(dir, cfg, report::energy_table(grid.reports));
  write_tables(dir, cfg, report::latency_table(grid.reports));
  write_tables(dir, cfg, report::eat_table(grid.reports));

  const bool has_candidate = std::any_of(profiles.begin(), profiles.end(),
                                         [&](const auto& p) { return p.name == cfg.candidate; });
  if (has_candidate && profiles.size() > 1) {
    const auto reds = report::reductions(grid.reports, cfg.candidate);
    write_tables(dir, cfg, report::reduction_table(reds));
    for (const auto& red : reds)
      out << cfg.candidate << " vs " << red.reference << ": mean EAT reduction "
          << format_double(red.mean) << " %\n";
  }
  for (const auto& w : cfg.workloads)
    out << w.name << ": minimum EAT " << report::min_eat_technology(grid.reports, w.name) << '\n';

  for (const auto& v : grid.violations) out << "invariant violation: " << v << '\n';
  return grid.violations.empty() ? kExitOk : kExitInvariant;
}

int cmd_report(const config::RunConfig& cfg, std::ostream& out) {
  const auto dir = prepare_output(cfg);
  const auto profiles = pipeline::select_profiles(cfg);
  write_tables(dir, cfg, report::profile_table(profiles));
  write_tables(dir, cfg, report::radar_table(profiles));

  // Cell-layout area against each profile's macro area.
  const std::uint64_t bits = cfg.cache.capacity * 8;
  report::Table area{"area",
                     {"layout", "cell_area_lambda2", "cell_area_nm2", "cells_only_mm2", "profile_area_mm2",
                      "calibrated_overhead", "inconsistent"},
                     {}};
  const std::pair<const char*, estimator::LayoutModel> layouts[] = {{"MERAM", estimator::meram_layout()},
                                                                    {"SRAM", estimator::sram_layout()}};
  for (const auto& [name, model] : layouts) {
    auto it = std::find_if(profiles.begin(), profiles.end(), [&](const auto& p) { return p.name == name; });
    if (it == profiles.end()) continue;
    const auto cal = estimator::calibrate_overhead(bits, it->area, model);
    area.rows.push_back({std::string(name), model.cell_area_lambda2, estimator::cell_area_nm2(model),
                         estimator::macro_area_mm2(bits, model), it->area, cal.overhead, cal.inconsistent});
    if (cal.inconsistent) out << "warning: " << name << " layout: " << cal.warning << '\n';
  }
  write_tables(dir, cfg, area);
  out << "wrote " << profiles.size() << " profiles to " << dir.string() << '\n';
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MEFET memory device-to-architecture simulator", "meram_sim"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::string formats;
  std::string profiles;
  std::uint64_t seed = 0;
  std::vector<std::string> settings;
  app.add_option("--config", config_path, "Run configuration file")->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  auto* fmt_opt = app.add_option("--format", formats, "Comma-separated output formats (csv, json)");
  auto* seed_opt = app.add_option("--seed", seed, "Base random seed");
  auto* prof_opt = app.add_option("--profiles", profiles, "Technology profile file, or 'builtin'");
  app.add_option("--set", settings, "Device or array parameter override key=value (repeatable)");

  DeviceOptions device_opts;
  auto* device = app.add_subcommand("device", "Two-experiment transient run and device summary");
  device->add_option("--script", device_opts.script, "Transient script 't_ns OP row col [bit]'");

  ArrayOptions array_opts;
  std::size_t rows = 0;
  std::size_t cols = 0;
  auto* array = app.add_subcommand("array", "Write/read roundtrip, half-select and sense-margin checks");
  auto* rows_opt = array->add_option("--rows", rows, "Array rows");
  auto* cols_opt = array->add_option("--cols", cols, "Array columns");
  array->add_option("--ops", array_opts.operations, "Randomized operations on large arrays");

  SimulateOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "Cache statistics for each technology profile");
  simulate->add_option("--trace", sim_opts.trace, "Trace file ('R <hex>' / 'W <hex>')");

  auto* compare = app.add_subcommand("compare", "Workload x technology EAT comparison");
  auto* report_cmd = app.add_subcommand("report", "Technology profile, radar and area tables");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    config::Overrides ov;
    ov.settings = settings;
    if (*seed_opt) ov.seed = seed;
    if (*out_opt) ov.output_dir = out_dir;
    if (*prof_opt) ov.profiles = profiles;
    if (*fmt_opt) ov.formats = config::parse_formats(formats);
    if (*rows_opt) ov.settings.push_back("rows=" + std::to_string(rows));
    if (*cols_opt) ov.settings.push_back("cols=" + std::to_string(cols));
    const auto cfg = config_path.empty() ? config::defaults(ov) : config::load_file(config_path, ov);
    if (cfg.profiles != "builtin" && !fs::exists(cfg.profiles)) {
      err << "error: profile file not found: " << cfg.profiles << '\n';
      return kExitUsage;
    }

    if (*device) return cmd_device(cfg, device_opts, out);
    if (*array) return cmd_array(cfg, array_opts, out);
    if (*simulate) return cmd_simulate(cfg, sim_opts, out);
    if (*compare) return cmd_compare(cfg, out);
    if (*report_cmd) return cmd_report(cfg, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace meram::cli
