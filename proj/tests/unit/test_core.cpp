#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "tgem/conditions.hpp"
#include "tgem/error.hpp"
#include "tgem/medium.hpp"
#include "tgem/protocol.hpp"

using namespace tgem;

namespace {

constexpr double c_light = 299792458.0;

}  // namespace

TEST(Nondimensionalize, DesignPointDepth) {
  const Config c = fixture::design_point();
  const auto p = nondimensionalize(c.medium, c.pulse);
  EXPECT_NEAR(p.gamma_tau, 0.1, 1e-12);
  EXPECT_NEAR(p.kdotL_tau, 2.0, 1e-12);
  EXPECT_NEAR(p.d_eff, 2.5, 1e-12);
  EXPECT_EQ(p.delta_tau, 0.0);
}

TEST(Nondimensionalize, NoAtomsNoDepth) {
  Config c = fixture::design_point();
  c.medium.d_in = 0.0;
  EXPECT_EQ(nondimensionalize(c.medium, c.pulse).d_eff, 0.0);
}

TEST(Nondimensionalize, AlgebraicExample) {
  Config c = fixture::design_point();
  c.medium.d_in = 10.0;
  c.medium.gamma = 0.2 / c.pulse.tau;
  EXPECT_NEAR(nondimensionalize(c.medium, c.pulse).d_eff, 1.0, 1e-12);
}

TEST(Nondimensionalize, NoGradientIsReported) {
  Config c = fixture::design_point();
  c.medium.n_dot_write = 0.0;
  try {
    nondimensionalize(c.medium, c.pulse);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "no gradient: memory bandwidth undefined");
  }
}

TEST(Nondimensionalize, DepthClosureHoldsForRandomInputs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    Config c = fixture::design_point();
    c.medium.d_in = 200.0 * u(rng);
    c.medium.gamma = (0.01 + u(rng)) / c.pulse.tau;
    c.medium.n_dot_write *= 0.1 + 5.0 * u(rng);
    const auto p = nondimensionalize(c.medium, c.pulse);
    EXPECT_DOUBLE_EQ(p.d_eff * p.kdotL_tau, c.medium.d_in * p.gamma_tau);
  }
}

TEST(MediumSpec, ValidationNamesTheField) {
  MediumSpec m;
  m.n_i = 1.0;
  try {
    m.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "medium.n_i");
  }
  m = MediumSpec{};
  m.gamma = -1.0;
  EXPECT_THROW(m.validate(), ConfigError);
  m = MediumSpec{};
  m.length = 0.0;
  EXPECT_THROW(m.validate(), ConfigError);
}

TEST(MediumSpec, ReadRampMirrorsWriteUnlessOverridden) {
  MediumSpec m;
  m.n_dot_write = 3.0;
  EXPECT_EQ(m.read_ramp(), -3.0);
  EXPECT_FALSE(m.asymmetric_read());
  m.n_dot_read = -2.0;
  EXPECT_TRUE(m.asymmetric_read());
  EXPECT_DOUBLE_EQ(m.k_dot_write(), 3.0 * 2.0 * fixture::kPi / m.lambda0);
}

TEST(PulseSpec, GaussianEnergyClosedForm) {
  PulseSpec p;
  p.tau = 2e-9;
  p.amplitude = 1.5;
  EXPECT_NEAR(p.energy(), 1.5 * 1.5 * 2e-9 * std::sqrt(fixture::kPi), 1e-24);
  EXPECT_NEAR(p.energy_between(-1.0, 1.0), p.energy(), 1e-22);
  EXPECT_NEAR(p.energy_between(p.t0, 1.0), 0.5 * p.energy(), 1e-22);
}

TEST(PulseSpec, SampledEnergyMatchesSquare) {
  PulseSpec p;
  p.shape = PulseShape::sampled;
  p.samples = {1.0, 1.0, 1.0};
  p.sample_dt = 1e-9;
  p.t0 = 5e-9;
  EXPECT_NEAR(p.energy(), 2e-9, 1e-21);
  EXPECT_EQ(p.envelope(0.0), cplx{});
  EXPECT_NEAR(std::abs(p.envelope(5e-9)), 1.0, 1e-15);
}

TEST(EffectiveDetuning, InputFaceSeesStaticDetuning) {
  Config c = fixture::design_point();
  c.medium.delta = 1e8;
  for (double t : {0.0, c.schedule.t_write + 1e-12, c.schedule.total()})
    EXPECT_EQ(effective_detuning(0.0, t, c.medium, c.schedule), 1e8);
}

TEST(EffectiveDetuning, FarFaceSpansTheBandDuringWrite) {
  const Config c = fixture::design_point();
  const double v = effective_detuning(c.medium.length, 0.5 * c.schedule.t_write, c.medium, c.schedule);
  EXPECT_NEAR(v * c.pulse.tau, 2.0, 1e-12);
}

TEST(EffectiveDetuning, HoldPhaseIsFlat) {
  Config c = fixture::design_point();
  c.medium.delta = -3e7;
  const double t = c.schedule.t_write + 0.5 * c.schedule.t_hold;
  EXPECT_EQ(effective_detuning(0.5 * c.medium.length, t, c.medium, c.schedule), -3e7);
}

TEST(EffectiveDetuning, LinearInZWithPhaseSlope) {
  const Config c = fixture::design_point();
  const double L = c.medium.length;
  const double times[] = {0.3 * c.schedule.t_write, c.schedule.t_write + 0.1 * c.schedule.t_hold,
                          c.schedule.hold_end() + 0.5 * c.schedule.t_read};
  const double slopes[] = {c.medium.k_dot_write(), 0.0, c.medium.k_dot_read()};
  for (int k = 0; k < 3; ++k) {
    const double a = effective_detuning(0.0, times[k], c.medium, c.schedule);
    const double b = effective_detuning(0.25 * L, times[k], c.medium, c.schedule);
    const double d = effective_detuning(L, times[k], c.medium, c.schedule);
    EXPECT_NEAR((d - a) / L, slopes[k], 1e-9 * std::abs(c.medium.k_dot_write()));
    EXPECT_NEAR(b - a, 0.25 * (d - a), 1e-6 * std::abs(d - a) + 1e-12);
  }
}

TEST(EffectiveDetuning, OutsideProtocolIsAnError) {
  const Config c = fixture::design_point();
  try {
    effective_detuning(0.0, c.schedule.total() * 1.01, c.medium, c.schedule);
    FAIL();
  } catch (const ProtocolError& e) {
    EXPECT_STREQ(e.what(), "time beyond protocol");
  }
  EXPECT_THROW(effective_detuning(0.0, -1e-12, c.medium, c.schedule), ProtocolError);
  EXPECT_THROW(effective_detuning(1.5 * c.medium.length, 0.0, c.medium, c.schedule), ProtocolError);
}

TEST(Protocol, IntegralsArePiecewiseExact) {
  const Config c = fixture::design_point();
  const auto p = Protocol::index_ramp(c.medium, c.schedule);
  const double w = c.schedule.write_end();
  const double h = c.schedule.hold_end();
  const double kw = c.medium.k_dot_write();
  const double kr = c.medium.k_dot_read();
  const double a = 0.5 * w;
  const double b = h + 0.25 * c.schedule.t_read;
  const double expected = kw * (w - a) + kr * (b - h);
  EXPECT_NEAR(p.gradient_integral(a, b), expected, 1e-9 * std::abs(expected));
  const double g = c.medium.gamma;
  EXPECT_NEAR(p.decay_integral(a, b), g * (w - a) + g * (b - h), 1e-12);
}

TEST(Protocol, HoldDecayFollowsSwitch) {
  Config c = fixture::design_point();
  EXPECT_EQ(Protocol::index_ramp(c.medium, c.schedule).decay(Phase::hold), 0.0);
  c.schedule.gamma_hold_off = false;
  EXPECT_EQ(Protocol::index_ramp(c.medium, c.schedule).decay(Phase::hold), c.medium.gamma);
}

TEST(IndexRamp, ContinuousAcrossBoundaries) {
  const Config c = fixture::design_point();
  const IndexRamp r(c.medium, c.schedule);
  const double eps = 1e-15;
  for (double t : {c.schedule.write_end(), c.schedule.hold_end()}) {
    EXPECT_NEAR(r.n_at(t - eps), r.n_at(t + eps), 2.5 * std::abs(c.medium.n_dot_write) * eps);
  }
  EXPECT_EQ(r.n_at(0.0), c.medium.n_i);
  // Symmetric read ramp undoes the write ramp after an equal duration.
  EXPECT_NEAR(r.n_at(c.schedule.hold_end() + c.schedule.t_write), c.medium.n_i, 1e-15);
}

TEST(Conditions, DesignPointAllPass) {
  const Config c = fixture::design_point();
  const auto rep = check_conditions(c.medium, c.pulse, c.schedule);
  const double tau = c.pulse.tau;
  const double L = 0.01;
  const double n = 2.26;
  const double omega0 = 2.0 * fixture::kPi * c_light / 795e-9;
  EXPECT_NEAR(rep.at("carrier").ratio, 1.0 / (omega0 * tau), 1e-12);
  EXPECT_NEAR(rep.at("pulse_extent").ratio, L / (c_light * tau), 1e-12);
  EXPECT_NEAR(rep.at("gradient").ratio, (2.0 / tau) * n * L / (2.0 * c_light), 1e-12);
  // n(t) ramps for the whole 6 tau write window.
  const double dn = (2.0 * 795e-9 / (2.0 * fixture::kPi * L * tau)) * 6.0 * tau;
  EXPECT_NEAR(rep.at("index_change").ratio, dn / n, 1e-12);
  EXPECT_NEAR(rep.at("wavevector").ratio, 795e-9 / (2.0 * fixture::kPi * n * L), 1e-15);

  EXPECT_NEAR(rep.at("gradient").ratio, 0.0474, 5e-4);
  EXPECT_NEAR(rep.at("wavevector").ratio, 5.6e-6, 0.05e-6);
  double largest = 0.0;
  for (const auto& ch : rep.checks) {
    EXPECT_EQ(ch.grade, Grade::pass) << ch.name;
    largest = std::max(largest, ch.ratio);
  }
  EXPECT_EQ(largest, rep.at("gradient").ratio);
  EXPECT_EQ(rep.overall, Grade::pass);
  EXPECT_FALSE(rep.no_gradient);
}

TEST(Conditions, PulseAsLongAsMediumFails) {
  Config c = fixture::design_point();
  c.medium.length = c_light * c.pulse.tau;
  const auto rep = check_conditions(c.medium, c.pulse, c.schedule);
  EXPECT_NEAR(rep.at("pulse_extent").ratio, 1.0, 1e-12);
  EXPECT_EQ(rep.at("pulse_extent").grade, Grade::fail);
  EXPECT_EQ(rep.overall, Grade::fail);
}

TEST(Conditions, ZeroRampPassesButFlagsNoGradient) {
  Config c = fixture::design_point();
  c.medium.n_dot_write = 0.0;
  const auto rep = check_conditions(c.medium, c.pulse, c.schedule);
  EXPECT_EQ(rep.at("index_change").ratio, 0.0);
  EXPECT_EQ(rep.at("index_change").grade, Grade::pass);
  EXPECT_TRUE(rep.no_gradient);
}

TEST(Conditions, GradeThresholds) {
  EXPECT_EQ(grade_ratio(0.0499), Grade::pass);
  EXPECT_EQ(grade_ratio(0.05), Grade::warn);
  EXPECT_EQ(grade_ratio(0.1999), Grade::warn);
  EXPECT_EQ(grade_ratio(0.2), Grade::fail);
  EXPECT_EQ(grade_ratio(std::nan("")), Grade::fail);
}

TEST(Conditions, LongerPulsesNeverWorsenCarrierOrExtent) {
  Config c = fixture::design_point();
  c.medium.length = 0.5;  // pushes pulse_extent through warn and fail
  Grade prev_carrier = Grade::fail;
  Grade prev_extent = Grade::fail;
  double prev_r1 = INFINITY;
  double prev_r2 = INFINITY;
  for (double tau = 1e-16; tau < 1e-6; tau *= 1.7) {
    c.pulse.tau = tau;
    const auto rep = check_conditions(c.medium, c.pulse, c.schedule);
    const auto& a = rep.at("carrier");
    const auto& b = rep.at("pulse_extent");
    EXPECT_LE(a.ratio, prev_r1);
    EXPECT_LE(b.ratio, prev_r2);
    EXPECT_LE(static_cast<int>(a.grade), static_cast<int>(prev_carrier));
    EXPECT_LE(static_cast<int>(b.grade), static_cast<int>(prev_extent));
    prev_carrier = a.grade;
    prev_extent = b.grade;
    prev_r1 = a.ratio;
    prev_r2 = b.ratio;
  }
}

TEST(GridGuards, FlagCoarseGrids) {
  Config c = fixture::design_point();
  EXPECT_TRUE(grid_guard_violations(c.grid, c.medium, c.pulse, c.schedule).empty());
  c.grid.nt = 100;
  auto v = grid_guard_violations(c.grid, c.medium, c.pulse, c.schedule);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().rfind("grid.nt", 0), 0u);
  c = fixture::design_point();
  c.grid.nz = 5;
  v = grid_guard_violations(c.grid, c.medium, c.pulse, c.schedule);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.front().rfind("grid.nz", 0), 0u);
}
