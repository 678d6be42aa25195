#include "meram/device.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <ostream>

#include "meram/error.hpp"

namespace meram::device {
namespace {

// Accumulated pulse time is compared with this slack so that a 200 ps switch
// built from many short steps still fires at exactly 200 ps.
constexpr double kTimeSlack = 1e-18;

using Field = double MefetParams::*;

const std::map<std::string, Field>& field_table() {
  static const std::map<std::string, Field> table = {
      {"eps_me", &MefetParams::eps_me},       {"eps_backgate", &MefetParams::eps_backgate},
      {"t_me", &MefetParams::t_me},           {"area_me", &MefetParams::area_me},
      {"t_ox", &MefetParams::t_ox},           {"v_t", &MefetParams::v_t},
      {"v_g_nominal", &MefetParams::v_g_nominal}, {"r_on", &MefetParams::r_on},
      {"r_off", &MefetParams::r_off},         {"t_switch", &MefetParams::t_switch},
  };
  return table;
}

}  // namespace

void MefetParams::validate() const {
  for (const auto& [name, field] : field_table()) {
    const double v = this->*field;
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError("MefetParams." + name + " must be positive and finite");
  }
  if (!(r_off > r_on)) throw ValidationError("MefetParams: r_off must exceed r_on");
  if (!(v_g_nominal > v_t)) throw ValidationError("MefetParams: v_g_nominal must exceed v_t");
}

MefetParams apply_overrides(MefetParams base, const kv::Section& section,
                            const std::string& source) {
  const auto& table = field_table();
  for (const auto& e : section.entries) {
    auto it = table.find(e.key);
    if (it == table.end()) throw ParseError(source, e.line, "unknown device parameter '" + e.key + "'");
    base.*(it->second) = kv::to_double(e, source);
  }
  base.validate();
  return base;
}

MefetParams load_params(std::istream& in, const std::string& source) {
  const auto doc = kv::parse(in, source);
  MefetParams p;
  for (const auto& section : doc.sections) {
    if (!section.name.empty() && section.name != "device")
      throw ParseError(source, section.line, "unexpected section [" + section.name + "]");
    p = apply_overrides(p, section, source);
  }
  p.validate();
  return p;
}

void write_params(std::ostream& out, const MefetParams& p) {
  out << "[device]\n";
  // Emit in declaration order rather than map order.
  const char* order[] = {"eps_me", "eps_backgate", "t_me", "area_me", "t_ox",
                         "v_t",    "v_g_nominal",  "r_on", "r_off",   "t_switch"};
  const auto& table = field_table();
  for (const char* key : order) out << key << " = " << kv::format_double(p.*(table.at(key))) << '\n';
}

double me_capacitance(const MefetParams& p) {
  p.validate();
  const double area_m2 = p.area_me * 1e-18;
  const double thickness_m = p.t_me * 1e-9;
  return kVacuumPermittivity * p.eps_me * area_m2 / thickness_m;
}

double write_energy(const MefetParams& p, double v) { return me_capacitance(p) * v * v; }

MefetState apply_gate_pulse(MefetState s, const MefetParams& p, double v_gate, double duration) {
  if (!(duration >= 0.0)) throw ValidationError("apply_gate_pulse: duration must be non-negative");

  if (std::abs(v_gate) <= p.v_t) {
    s.pending.reset();
    return s;
  }

  const Polarization target = v_gate > 0.0 ? Polarization::Up : Polarization::Down;
  if (target == s.polarization) {
    s.pending.reset();
    return s;
  }

  double elapsed = duration;
  if (s.pending && s.pending->target == target) elapsed += s.pending->elapsed;

  if (elapsed + kTimeSlack >= p.t_switch) {
    s.polarization = target;
    s.pending.reset();
  } else {
    s.pending = PendingSwitch{target, elapsed};
  }
  return s;
}

double channel_resistance(const MefetState& s, const MefetParams& p) {
  return s.polarization == Polarization::Up ? p.r_on : p.r_off;
}

int drain_spin(const MefetState& s) { return s.polarization == Polarization::Up ? +1 : -1; }

std::string to_string(Polarization p) { return p == Polarization::Up ? "up" : "down"; }

}  // namespace meram::device
