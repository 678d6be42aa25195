#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "device_oracle.hpp"
#include "meram/device.hpp"
#include "meram/error.hpp"

namespace meram::device {
namespace {

constexpr double kPs = 1e-12;

TEST(MefetParams, DefaultsMatchCompactModelTable) {
  const MefetParams p;
  EXPECT_EQ(p.eps_me, 12.0);
  EXPECT_EQ(p.eps_backgate, 10.0);
  EXPECT_EQ(p.t_me, 10.0);
  EXPECT_EQ(p.area_me, 900.0);
  EXPECT_EQ(p.t_ox, 2.0);
  EXPECT_EQ(p.v_t, 0.05);
  EXPECT_EQ(p.v_g_nominal, 0.1);
  EXPECT_EQ(p.r_on, 1.05e3);
  EXPECT_EQ(p.r_off, 63.4e6);
  EXPECT_EQ(p.t_switch, 200e-12);
  EXPECT_NO_THROW(p.validate());
}

TEST(MefetParams, RejectsInvalid) {
  MefetParams p;
  p.area_me = 0.0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = MefetParams{};
  p.r_off = p.r_on;
  EXPECT_THROW(p.validate(), ValidationError);
  p = MefetParams{};
  p.v_g_nominal = p.v_t;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(MefetParams, OverrideFileRoundTrip) {
  MefetParams p;
  p.t_switch = 150e-12;
  p.r_on = 2e3;
  std::stringstream ss;
  write_params(ss, p);
  EXPECT_EQ(load_params(ss, "mem"), p);
}

TEST(MefetParams, OverrideFileRejectsUnknownKey) {
  std::istringstream in("[device]\nv_t = 0.05\nbogus = 1\n");
  EXPECT_THROW(load_params(in, "mem"), ParseError);
}

TEST(MeCapacitance, ParallelPlate) {
  // 8.8541878128e-12 F/m * 12 * 900e-18 m^2 / 10e-9 m, evaluated by hand.
  const double expected = 9.562522837824e-18;
  EXPECT_NEAR(me_capacitance(MefetParams{}), expected, expected * 1e-9);
  EXPECT_NEAR(me_capacitance(MefetParams{}), 9.56e-18, 9.56e-18 * 0.01);
}

TEST(MeCapacitance, HalvesWhenThicknessDoubles) {
  MefetParams thick;
  thick.t_me = 20.0;
  EXPECT_DOUBLE_EQ(me_capacitance(thick), me_capacitance(MefetParams{}) / 2.0);
}

TEST(MeCapacitance, ZeroAreaIsRejected) {
  MefetParams p;
  p.area_me = 0.0;
  EXPECT_THROW(me_capacitance(p), ValidationError);
}

TEST(WriteEnergy, CapacitorChargeEnergy) {
  const MefetParams p;
  EXPECT_NEAR(write_energy(p, 0.1), 9.562522837824e-20, 1e-28);
  EXPECT_EQ(write_energy(p, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(write_energy(p, -0.1), write_energy(p, 0.1));
}

TEST(GatePulse, LongPositivePulseSwitchesUp) {
  const MefetParams p;
  const auto s = apply_gate_pulse(MefetState{}, p, 0.1, 300 * kPs);
  EXPECT_EQ(s.polarization, Polarization::Up);
  EXPECT_FALSE(s.pending.has_value());
}

TEST(GatePulse, PendingClearsBetweenShortPulses) {
  const MefetParams p;
  MefetState s;
  s = apply_gate_pulse(s, p, 0.1, 100 * kPs);
  ASSERT_TRUE(s.pending.has_value());
  s = apply_gate_pulse(s, p, 0.0, 1e-3);
  EXPECT_FALSE(s.pending.has_value());
  s = apply_gate_pulse(s, p, 0.1, 100 * kPs);
  EXPECT_EQ(s.polarization, Polarization::Down);

  const int ref = oracle::integrate_polarization(-1, {{0.1, 100}, {0.0, 5000}, {0.1, 100}}, p.v_t, 200);
  EXPECT_EQ(ref, -1);
}

TEST(GatePulse, BackToBackShortPulsesAccumulate) {
  const MefetParams p;
  MefetState s;
  s = apply_gate_pulse(s, p, 0.1, 100 * kPs);
  s = apply_gate_pulse(s, p, 0.1, 100 * kPs);
  EXPECT_EQ(s.polarization, Polarization::Up);
}

TEST(GatePulse, BelowThresholdNeverSwitches) {
  const MefetParams p;
  MefetState up;
  up.polarization = Polarization::Up;
  EXPECT_EQ(apply_gate_pulse(up, p, 0.04, 1.0).polarization, Polarization::Up);
  // |v| == v_t is not over threshold.
  EXPECT_EQ(apply_gate_pulse(up, p, -0.05, 1.0).polarization, Polarization::Up);
}

TEST(GatePulse, NegativeDurationRejected) {
  EXPECT_THROW(apply_gate_pulse(MefetState{}, MefetParams{}, 0.1, -1e-12), ValidationError);
}

TEST(ChannelResistance, TwoLevels) {
  const MefetParams p;
  MefetState s;
  EXPECT_EQ(channel_resistance(s, p), 63.4e6);
  s.polarization = Polarization::Up;
  EXPECT_EQ(channel_resistance(s, p), 1.05e3);
  EXPECT_NEAR(p.on_off_ratio(), 60380.952380952, 1e-6);
}

TEST(DrainSpin, FollowsPolarization) {
  MefetState s;
  EXPECT_EQ(drain_spin(s), -1);
  s.polarization = Polarization::Up;
  EXPECT_EQ(drain_spin(s), +1);
  const MefetParams p;
  for (int i = 0; i < 10; ++i) {
    (void)channel_resistance(s, p);
    (void)drain_spin(s);
  }
  EXPECT_EQ(drain_spin(s), +1);
}

// ---- properties ----------------------------------------------------------

MefetState random_state(std::mt19937_64& rng) {
  MefetState s;
  s.polarization = rng() & 1 ? Polarization::Up : Polarization::Down;
  return s;
}

TEST(DeviceProperties, ZeroBiasIsNonVolatile) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dur(0.0, 1.0);
  const MefetParams p;
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_state(rng);
    const auto after = apply_gate_pulse(s, p, 0.0, dur(rng));
    EXPECT_EQ(after, s);
  }
}

TEST(DeviceProperties, StrictThreshold) {
  std::mt19937_64 rng(12);
  const MefetParams p;
  std::uniform_real_distribution<double> v(-p.v_t, p.v_t);
  std::uniform_real_distribution<double> dur(0.0, 1e-6);
  for (int i = 0; i < 5000; ++i) {
    const auto s = random_state(rng);
    EXPECT_EQ(apply_gate_pulse(s, p, v(rng), dur(rng)).polarization, s.polarization);
  }
}

TEST(DeviceProperties, SingleShortPulseNeverSwitches) {
  std::mt19937_64 rng(13);
  const MefetParams p;
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  std::uniform_real_distribution<double> dur(0.0, p.t_switch * 0.999);
  for (int i = 0; i < 5000; ++i) {
    const auto s = random_state(rng);
    EXPECT_EQ(apply_gate_pulse(s, p, v(rng), dur(rng)).polarization, s.polarization);
  }
}

TEST(DeviceProperties, WritingTwiceEqualsOnce) {
  const MefetParams p;
  for (double v : {0.1, -0.1}) {
    for (auto pol : {Polarization::Up, Polarization::Down}) {
      MefetState s;
      s.polarization = pol;
      const auto once = apply_gate_pulse(s, p, v, 300 * kPs);
      EXPECT_EQ(apply_gate_pulse(once, p, v, 300 * kPs), once);
    }
  }
}

TEST(DeviceProperties, MatchesPicosecondIntegrator) {
  std::mt19937_64 rng(14);
  const MefetParams p;
  const double levels[] = {-0.1, -0.06, -0.05, -0.02, 0.0, 0.03, 0.05, 0.07, 0.1};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<oracle::Pulse> pulses(1 + rng() % 12);
    for (auto& pulse : pulses) pulse = {levels[rng() % std::size(levels)], static_cast<std::int64_t>(rng() % 400)};
    MefetState s = random_state(rng);
    const int initial = s.polarization == Polarization::Up ? 1 : -1;
    for (const auto& pulse : pulses) s = apply_gate_pulse(s, p, pulse.volts, pulse.picoseconds * kPs);
    ASSERT_EQ(drain_spin(s), oracle::integrate_polarization(initial, pulses, p.v_t, 200)) << "trial " << trial;
  }
}

}  // namespace
}  // namespace meram::device
