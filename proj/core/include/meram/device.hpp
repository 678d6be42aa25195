#pragma once

// Behavioral compact model of the magneto-electric FET.
//
// The gate drive is compared against the chromia inversion threshold; an
// over-threshold drive has to be held for the coupling delay before the
// channel polarization follows it. The polarization selects one of two
// channel resistances and persists at zero bias.

#include <iosfwd>
#include <optional>
#include <string>

#include "meram/kv_file.hpp"

namespace meram::device {

inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m

struct MefetParams {
  double eps_me = 12.0;        // chromia relative permittivity
  double eps_backgate = 10.0;  // alumina relative permittivity
  double t_me = 10.0;          // ME layer thickness, nm
  double area_me = 900.0;      // ME layer area, nm^2
  double t_ox = 2.0;           // oxide barrier thickness, nm
  double v_t = 0.05;           // inversion threshold, V
  double v_g_nominal = 0.1;    // nominal gate drive, V
  double r_on = 1.05e3;        // ohm
  double r_off = 63.4e6;       // ohm
  double t_switch = 200e-12;   // coupling delay, s

  // Throws ValidationError.
  void validate() const;

  double on_off_ratio() const { return r_off / r_on; }

  friend bool operator==(const MefetParams&, const MefetParams&) = default;
};

// Applies [device]-style key=value overrides onto `base`. Unknown keys throw.
MefetParams apply_overrides(MefetParams base, const kv::Section& section,
                            const std::string& source);
MefetParams load_params(std::istream& in, const std::string& source);
void write_params(std::ostream& out, const MefetParams& p);

enum class Polarization { Down, Up };

struct PendingSwitch {
  Polarization target;
  double elapsed;  // s of uninterrupted over-threshold drive toward target

  friend bool operator==(const PendingSwitch&, const PendingSwitch&) = default;
};

struct MefetState {
  Polarization polarization = Polarization::Down;
  std::optional<PendingSwitch> pending;

  friend bool operator==(const MefetState&, const MefetState&) = default;
};

// Parallel-plate capacitance of the ME layer, F. The back-gate oxide is not
// included.
double me_capacitance(const MefetParams& p);

// C*V^2 to charge the ME capacitor to `v`, J.
double write_energy(const MefetParams& p, double v);

// Holds `v_gate` for `duration` seconds. Positive drive targets Up.
MefetState apply_gate_pulse(MefetState s, const MefetParams& p, double v_gate, double duration);

// Up selects r_on, Down selects r_off.
double channel_resistance(const MefetState& s, const MefetParams& p);

// Spin detected at the drain terminal: +1 for Up, -1 for Down.
int drain_spin(const MefetState& s);

std::string to_string(Polarization p);

}  // namespace meram::device
