#pragma once

// 2T-1MEFET bit-cell array: bias protocol, write path, current-sense read
// through a clocked two-phase latch comparator, and transient traces.
//
// Bit convention: a stored '1' is the high-resistance channel state, which
// makes the sensed voltage exceed the reference. The write bit line couples
// to the ME gate with inverted polarity, so +v_write on WBL drives the
// device Down (r_off) and stores '1'.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "meram/device.hpp"

namespace meram::cell {

enum class BiasOp { Read, Write1, Write0, Hold };

std::string to_string(BiasOp op);

// Control-line levels seen by one array row. Absent optional values are
// floating lines ("-" in the bias table).
struct BiasVector {
  bool wwl = false;
  bool rwl = false;
  std::optional<double> wbl;          // V
  std::optional<double> rbl_current;  // A
  bool sl_sensed = false;

  friend bool operator==(const BiasVector&, const BiasVector&) = default;
};

struct LineLevels {
  double i_sense = 900e-9;  // A
  double v_write = 0.1;     // V
};

BiasVector bias_for(BiasOp op, bool accessed, const LineLevels& levels = {});

// Ideal current source driven into the access transistor plus channel, clamped
// at the supply. Negative inputs and non-positive r_cell/v_dd throw.
double sense_voltage(double r_cell, double r_access, double i_sense, double v_dd);

// Midpoint of the two sense levels; requires v_low < v_high.
double reference_voltage(double v_low, double v_high);

struct SensePhases {
  double precharge = 0.0;  // s, CLK high: outputs reset
  double evaluate = 0.0;   // s, CLK low: latch resolves
};

struct SenseTrace {
  double v_sense = 0.0;
  double v_ref = 0.0;
  double margin = 0.0;
  int decision = 0;
  SensePhases phases;
};

struct SenseResult {
  int bit = 0;
  SenseTrace trace;
};

// Behavioral StrongARM latch. Ties resolve to 0.
SenseResult strongarm_decide(double v_sense, double v_ref, double sa_offset,
                             SensePhases phases = {});

struct MeramCell {
  device::MefetState device;
  double r_access = 0.0;  // ohm

  friend bool operator==(const MeramCell&, const MeramCell&) = default;
};

struct ArrayConfig {
  std::size_t rows = 4;
  std::size_t cols = 4;
  double v_dd = 1.0;            // V
  double i_sense = 900e-9;      // A
  double v_write = 0.1;         // V
  double sa_offset = 0.0;       // V
  double r_access = 0.0;        // ohm
  double clock_period = 3e-9;   // s
  device::MefetParams device;

  void validate() const;
  // Writes are held for half a clock period.
  double write_pulse() const { return clock_period / 2.0; }
  LineLevels levels() const { return {i_sense, v_write}; }

  friend bool operator==(const ArrayConfig&, const ArrayConfig&) = default;
};

// Observer for every row-level bias vector the array drives.
struct BiasEvent {
  std::size_t row;
  BiasOp op;
  bool accessed;
  BiasVector bias;
};
using BiasObserver = std::function<void(const BiasEvent&)>;

class MeramArray {
 public:
  explicit MeramArray(ArrayConfig cfg);

  const ArrayConfig& config() const { return cfg_; }
  std::size_t rows() const { return cfg_.rows; }
  std::size_t cols() const { return cfg_.cols; }

  const MeramCell& cell(std::size_t row, std::size_t col) const;

  void set_observer(BiasObserver observer) { observer_ = std::move(observer); }

  void write_bit(std::size_t row, std::size_t col, int bit);
  // Same with an explicit pulse width in seconds.
  void write_bit(std::size_t row, std::size_t col, int bit, double pulse);
  SenseResult read_bit(std::size_t row, std::size_t col, SensePhases phases = {});

  // Drives WBL of `col` to the write level for `bit` while every WWL stays
  // low. No cell may change.
  void disturb_write_line(std::size_t col, int bit);

  // Sense levels of the low- and high-resistance states for a cell.
  double v_low(std::size_t row, std::size_t col) const;
  double v_high(std::size_t row, std::size_t col) const;

  // FNV-1a hash of every cell's polarization and pending switch.
  std::uint64_t state_hash() const;

 private:
  void check_index(std::size_t row, std::size_t col) const;
  void emit(std::size_t accessed_row, BiasOp op, const BiasVector& accessed_bias);
  // Zero-bias pulse on every cell except `except`.
  void idle_pulse(std::size_t except, double pulse);

  ArrayConfig cfg_;
  std::vector<MeramCell> cells_;
  // Superset of the indices whose device holds a pending switch. Every other
  // cell is a fixed point of a zero-bias pulse.
  std::vector<std::size_t> pending_;
  BiasObserver observer_;
};

// ---- transient simulation ------------------------------------------------

enum class ScriptOp { Write, Read, Disturb };

struct ScriptStep {
  double t = 0.0;  // s, start of the clock cycle the step belongs to
  ScriptOp op = ScriptOp::Read;
  std::size_t row = 0;
  std::size_t col = 0;
  int bit = 0;
};

// Line-oriented "t_ns OP row col [bit]" with OP in {WRITE, READ, DISTURB};
// '#' starts a comment.
std::vector<ScriptStep> parse_script(std::istream& in, const std::string& source);
void write_script(std::ostream& out, const std::vector<ScriptStep>& script);

// Write 0 then read, re-read next cycle with WBL driven; then the same with a
// write of 1. One clock cycle per step pair.
std::vector<ScriptStep> two_experiment_script(double clock_period);

struct WaveformSample {
  double time_s = 0.0;
  int wwl = 0;
  int rwl = 0;
  double wbl_v = 0.0;
  double rbl_a = 0.0;
  double sl_v = 0.0;
  double v_sense = 0.0;
  double v_ref = 0.0;
  int sa_out = 0;
};

// Each touched clock cycle emits a precharge sample at its start (writes and
// WBL disturbs act here, SA outputs reset) and an evaluate sample at
// mid-period (reads resolve here). Steps are processed in time order.
std::vector<WaveformSample> transient_trace(MeramArray& array, const std::vector<ScriptStep>& script,
                                            double clock_period);

void write_waveform_csv(std::ostream& out, const std::vector<WaveformSample>& samples);

}  // namespace meram::cell
