#include "meram/cell_array.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "meram/error.hpp"
#include "meram/kv_file.hpp"

namespace meram::cell {

std::string to_string(BiasOp op) {
  switch (op) {
    case BiasOp::Read: return "read";
    case BiasOp::Write1: return "write1";
    case BiasOp::Write0: return "write0";
    case BiasOp::Hold: return "hold";
  }
  return "?";
}

BiasVector bias_for(BiasOp op, bool accessed, const LineLevels& levels) {
  BiasVector b;
  if (!accessed) return b;
  switch (op) {
    case BiasOp::Read:
      b.rwl = true;
      b.rbl_current = levels.i_sense;
      b.sl_sensed = true;
      break;
    case BiasOp::Write1:
      b.wwl = true;
      b.wbl = levels.v_write;
      break;
    case BiasOp::Write0:
      b.wwl = true;
      b.wbl = -levels.v_write;
      break;
    case BiasOp::Hold:
      break;
  }
  return b;
}

double sense_voltage(double r_cell, double r_access, double i_sense, double v_dd) {
  if (!(r_cell > 0.0)) throw ValidationError("sense_voltage: r_cell must be positive");
  if (!(v_dd > 0.0)) throw ValidationError("sense_voltage: v_dd must be positive");
  if (!(r_access >= 0.0)) throw ValidationError("sense_voltage: r_access must be non-negative");
  if (!(i_sense >= 0.0)) throw ValidationError("sense_voltage: i_sense must be non-negative");
  return std::min(i_sense * (r_cell + r_access), v_dd);
}

double reference_voltage(double v_low, double v_high) {
  if (!(v_low < v_high)) throw ValidationError("reference_voltage: v_low must be below v_high");
  return (v_low + v_high) / 2.0;
}

SenseResult strongarm_decide(double v_sense, double v_ref, double sa_offset, SensePhases phases) {
  // Precharge pulls both outputs to ground, so the decision depends only on
  // the inputs present during evaluation.
  SenseResult r;
  r.bit = v_sense > v_ref + sa_offset ? 1 : 0;
  r.trace = SenseTrace{v_sense, v_ref, std::abs(v_sense - v_ref), r.bit, phases};
  return r;
}

void ArrayConfig::validate() const {
  if (rows < 1 || cols < 1) throw ValidationError("array dimensions must be at least 1x1");
  if (!(v_dd > 0.0)) throw ValidationError("array v_dd must be positive");
  if (!(i_sense > 0.0)) throw ValidationError("array i_sense must be positive");
  if (!(v_write >= 0.0)) throw ValidationError("array v_write must be non-negative");
  if (!std::isfinite(sa_offset)) throw ValidationError("array sa_offset must be finite");
  if (!(r_access >= 0.0)) throw ValidationError("array r_access must be non-negative");
  device.validate();
  if (!(clock_period >= 2.0 * device.t_switch))
    throw ValidationError("clock period must be at least twice t_switch");
}

MeramArray::MeramArray(ArrayConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  cells_.assign(cfg_.rows * cfg_.cols, MeramCell{device::MefetState{}, cfg_.r_access});
}

void MeramArray::check_index(std::size_t row, std::size_t col) const {
  if (row >= cfg_.rows || col >= cfg_.cols)
    throw ValidationError("cell index (" + std::to_string(row) + "," + std::to_string(col) +
                          ") out of range for " + std::to_string(cfg_.rows) + "x" +
                          std::to_string(cfg_.cols) + " array");
}

const MeramCell& MeramArray::cell(std::size_t row, std::size_t col) const {
  check_index(row, col);
  return cells_[row * cfg_.cols + col];
}

void MeramArray::emit(std::size_t accessed_row, BiasOp op, const BiasVector& accessed_bias) {
  if (!observer_) return;
  const BiasVector idle = bias_for(op, false, cfg_.levels());
  for (std::size_t r = 0; r < cfg_.rows; ++r) {
    const bool accessed = r == accessed_row;
    observer_(BiasEvent{r, op, accessed, accessed ? accessed_bias : idle});
  }
}

void MeramArray::write_bit(std::size_t row, std::size_t col, int bit) {
  write_bit(row, col, bit, cfg_.write_pulse());
}

void MeramArray::idle_pulse(std::size_t except, double pulse) {
  std::vector<std::size_t> still;
  for (std::size_t i : pending_) {
    if (i == except) continue;
    auto& d = cells_[i].device;
    d = device::apply_gate_pulse(d, cfg_.device, 0.0, pulse);
    if (d.pending) still.push_back(i);
  }
  pending_ = std::move(still);
}

// The selected cell sees gate = -WBL(col); every other cell sees zero bias
// because its WWL is low or its WBL is undriven.
void MeramArray::write_bit(std::size_t row, std::size_t col, int bit, double pulse) {
  check_index(row, col);
  if (bit != 0 && bit != 1) throw ValidationError("write_bit: bit must be 0 or 1");
  const BiasOp op = bit ? BiasOp::Write1 : BiasOp::Write0;
  const BiasVector bias = bias_for(op, true, cfg_.levels());
  emit(row, op, bias);

  const std::size_t index = row * cfg_.cols + col;
  idle_pulse(index, pulse);
  auto& d = cells_[index].device;
  const double v_gate = bias.wwl && bias.wbl ? -*bias.wbl : 0.0;
  d = device::apply_gate_pulse(d, cfg_.device, v_gate, pulse);
  if (d.pending) pending_.push_back(index);
}

void MeramArray::disturb_write_line(std::size_t col, int bit) {
  check_index(0, col);
  BiasVector idle;
  idle.wbl = bit ? cfg_.v_write : -cfg_.v_write;
  if (observer_)
    for (std::size_t r = 0; r < cfg_.rows; ++r) observer_(BiasEvent{r, BiasOp::Hold, false, idle});
  // WWL is low on every row, so no gate sees the bit line.
  idle_pulse(cells_.size(), cfg_.write_pulse());
}

double MeramArray::v_low(std::size_t row, std::size_t col) const {
  return sense_voltage(cfg_.device.r_on, cell(row, col).r_access, cfg_.i_sense, cfg_.v_dd);
}

double MeramArray::v_high(std::size_t row, std::size_t col) const {
  return sense_voltage(cfg_.device.r_off, cell(row, col).r_access, cfg_.i_sense, cfg_.v_dd);
}

SenseResult MeramArray::read_bit(std::size_t row, std::size_t col, SensePhases phases) {
  check_index(row, col);
  const BiasVector bias = bias_for(BiasOp::Read, true, cfg_.levels());
  emit(row, BiasOp::Read, bias);

  const auto& c = cells_[row * cfg_.cols + col];
  const double r_cell = device::channel_resistance(c.device, cfg_.device);
  const double v_sense = sense_voltage(r_cell, c.r_access, *bias.rbl_current, cfg_.v_dd);
  const double v_ref = reference_voltage(v_low(row, col), v_high(row, col));
  return strongarm_decide(v_sense, v_ref, cfg_.sa_offset, phases);
}

std::uint64_t MeramArray::state_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto& c : cells_) {
    const unsigned char pol = c.device.polarization == device::Polarization::Up ? 1 : 0;
    mix(&pol, 1);
    const unsigned char has_pending = c.device.pending ? 1 : 0;
    mix(&has_pending, 1);
    if (c.device.pending) {
      const unsigned char tgt = c.device.pending->target == device::Polarization::Up ? 1 : 0;
      mix(&tgt, 1);
      mix(&c.device.pending->elapsed, sizeof(double));
    }
  }
  return h;
}

// ---- transient simulation ------------------------------------------------

namespace {

const std::map<std::string, ScriptOp>& op_names() {
  static const std::map<std::string, ScriptOp> names = {
      {"WRITE", ScriptOp::Write}, {"READ", ScriptOp::Read}, {"DISTURB", ScriptOp::Disturb}};
  return names;
}

std::string op_name(ScriptOp op) {
  for (const auto& [name, value] : op_names())
    if (value == op) return name;
  return "?";
}

}  // namespace

std::vector<ScriptStep> parse_script(std::istream& in, const std::string& source) {
  std::vector<ScriptStep> steps;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::string t_text;
    if (!(ls >> t_text)) continue;

    char* end = nullptr;
    const double t_ns = std::strtod(t_text.c_str(), &end);
    if (*end != '\0' || !(t_ns >= 0.0)) throw ParseError(source, line_no, "bad time '" + t_text + "'");

    std::string name;
    long long row = -1;
    long long col = -1;
    if (!(ls >> name >> row >> col)) throw ParseError(source, line_no, "expected 't_ns OP row col [bit]'");
    auto it = op_names().find(name);
    if (it == op_names().end()) throw ParseError(source, line_no, "unknown operation '" + name + "'");
    if (row < 0 || col < 0) throw ParseError(source, line_no, "negative cell index");

    ScriptStep step{t_ns * 1e-9, it->second, static_cast<std::size_t>(row),
                    static_cast<std::size_t>(col), 0};
    if (step.op != ScriptOp::Read) {
      int bit = -1;
      if (!(ls >> bit) || (bit != 0 && bit != 1))
        throw ParseError(source, line_no, name + " requires a bit of 0 or 1");
      step.bit = bit;
    }
    std::string extra;
    if (ls >> extra) throw ParseError(source, line_no, "trailing token '" + extra + "'");
    steps.push_back(step);
  }
  return steps;
}

void write_script(std::ostream& out, const std::vector<ScriptStep>& script) {
  for (const auto& s : script) {
    out << kv::format_double(s.t * 1e9) << ' ' << op_name(s.op) << ' ' << s.row << ' ' << s.col;
    if (s.op != ScriptOp::Read) out << ' ' << s.bit;
    out << '\n';
  }
}

std::vector<ScriptStep> two_experiment_script(double clock_period) {
  const double t = clock_period;
  return {
      {0 * t, ScriptOp::Write, 0, 0, 0},   {0 * t, ScriptOp::Read, 0, 0, 0},
      {1 * t, ScriptOp::Disturb, 0, 0, 1}, {1 * t, ScriptOp::Read, 0, 0, 0},
      {2 * t, ScriptOp::Write, 0, 0, 1},   {2 * t, ScriptOp::Read, 0, 0, 0},
      {3 * t, ScriptOp::Disturb, 0, 0, 0}, {3 * t, ScriptOp::Read, 0, 0, 0},
  };
}

std::vector<WaveformSample> transient_trace(MeramArray& array, const std::vector<ScriptStep>& script,
                                            double clock_period) {
  if (!(clock_period >= 2.0 * array.config().device.t_switch))
    throw ValidationError("transient_trace: clock period shorter than twice t_switch");

  struct Cycle {
    const ScriptStep* drive = nullptr;  // write or disturb
    const ScriptStep* read = nullptr;
  };
  std::map<std::uint64_t, Cycle> cycles;
  for (const auto& step : script) {
    const auto index = static_cast<std::uint64_t>(std::floor(step.t / clock_period + 1e-9));
    auto& cyc = cycles[index];
    auto& slot = step.op == ScriptOp::Read ? cyc.read : cyc.drive;
    if (slot != nullptr)
      throw ValidationError("transient_trace: more than one " +
                            std::string(step.op == ScriptOp::Read ? "read" : "write/disturb") +
                            " in clock cycle " + std::to_string(index));
    slot = &step;
  }

  const auto& cfg = array.config();
  std::vector<WaveformSample> samples;
  samples.reserve(cycles.size() * 2);
  for (const auto& [index, cyc] : cycles) {
    const double t0 = static_cast<double>(index) * clock_period;
    const double t_eval = t0 + clock_period / 2.0;

    WaveformSample pre;
    pre.time_s = t0;
    if (cyc.drive != nullptr) {
      const auto& s = *cyc.drive;
      pre.wbl_v = s.bit ? cfg.v_write : -cfg.v_write;
      if (s.op == ScriptOp::Write) {
        pre.wwl = 1;
        array.write_bit(s.row, s.col, s.bit, clock_period / 2.0);
      } else {
        array.disturb_write_line(s.col, s.bit);
      }
    }
    samples.push_back(pre);

    WaveformSample eval;
    eval.time_s = t_eval;
    if (cyc.read != nullptr) {
      const auto& s = *cyc.read;
      const auto result = array.read_bit(s.row, s.col, SensePhases{t0, t_eval});
      eval.rwl = 1;
      eval.rbl_a = cfg.i_sense;
      eval.sl_v = result.trace.v_sense;
      eval.v_sense = result.trace.v_sense;
      eval.v_ref = result.trace.v_ref;
      eval.sa_out = result.bit;
    }
    samples.push_back(eval);
  }
  return samples;
}

void write_waveform_csv(std::ostream& out, const std::vector<WaveformSample>& samples) {
  out << "time_s,wwl,rwl,wbl_v,rbl_a,sl_v,v_sense,v_ref,sa_out\n";
  using kv::format_double;
  for (const auto& s : samples) {
    out << format_double(s.time_s) << ',' << s.wwl << ',' << s.rwl << ',' << format_double(s.wbl_v)
        << ',' << format_double(s.rbl_a) << ',' << format_double(s.sl_v) << ','
        << format_double(s.v_sense) << ',' << format_double(s.v_ref) << ',' << s.sa_out << '\n';
  }
}

}  // namespace meram::cell
