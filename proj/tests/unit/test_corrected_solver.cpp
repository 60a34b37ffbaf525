#include <gtest/gtest.h>

#include <cmath>
#include <iostream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tgem/analysis.hpp"
#include "tgem/conditions.hpp"
#include "tgem/corrected_solver.hpp"
#include "tgem/error.hpp"

using namespace tgem;

namespace {

double relative_difference(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double scale = 0.0;
  double worst = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    scale = std::max(scale, std::abs(b[n]));
    worst = std::max(worst, std::abs(a[n] - b[n]));
  }
  return worst / scale;
}

Config static_index(Config c) {
  c.medium.n_dot_write = 0.0;
  c.center_in_band = false;
  c.pulse.carrier_offset = 0.0;
  c.medium.delta = 1.0 / c.pulse.tau;
  c.medium.d_in = 5.0;  // static line: the resonant depth itself sets the cell guard
  c.refresh();
  return c;
}

// Snapshots of a pure tone exp(-i w t), uniform in z.
SimRecord tone_record(double w, double ht, std::size_t nsnap, std::size_t nz) {
  SimRecord r;
  for (std::size_t k = 0; k < nsnap; ++k) {
    FieldState s;
    s.t = 1e-9 + static_cast<double>(k) * ht;
    const cplx v = std::exp(cplx(0.0, -w * s.t));
    s.field.assign(nz, 0.7 * v);
    s.coherence.assign(nz, 0.01 * v);
    r.snapshots.push_back(s);
    r.times.push_back(s.t);
  }
  r.snapshot_stride = 1;
  return r;
}

}  // namespace

TEST(StepCorrected, ReducesToStepWithoutRampOrDelay) {
  const Config c = static_index(fixture::small());
  CorrectionTerms terms;
  terms.retarded_time = false;
  const auto input = pulse_signal(c.pulse);
  FieldState a = initial_state(c.grid.nz, 0.0, input);
  FieldState b = a;
  const double dt = c.grid.dt(c.schedule.total());
  for (int k = 0; k < 500; ++k) {
    a = step(a, dt, c.medium, c.schedule, c.pulse);
    b = step_corrected(b, dt, c.medium, c.schedule, c.pulse, terms);
    ASSERT_EQ(a.field, b.field) << k;
    ASSERT_EQ(a.coherence, b.coherence) << k;
  }
}

TEST(RunCorrected, ReducesToSimplifiedRunBitIdentically) {
  const Config c = static_index(fixture::small());
  CorrectionTerms terms;
  terms.retarded_time = false;
  const SimRecord a = run_protocol(c.medium, c.pulse, c.schedule, c.grid);
  const SimRecord b = run_protocol_corrected(c.medium, c.pulse, c.schedule, c.grid, terms);
  EXPECT_EQ(a.output_series, b.output_series);
  EXPECT_FALSE(b.retarded_frame);
}

TEST(RunCorrected, NoTermsEqualsSimplifiedWithRamp) {
  const Config c = fixture::small();
  const CorrectionTerms none{false, false, false};
  const SimRecord a = run_protocol(c.medium, c.pulse, c.schedule, c.grid);
  const SimRecord b = run_protocol_corrected(c.medium, c.pulse, c.schedule, c.grid, none);
  EXPECT_EQ(a.output_series, b.output_series);
}

TEST(RunCorrected, ConvergesToSimplifiedAsMediumShrinks) {
  Config c = static_index(fixture::small());
  c.grid.nt = 8000;
  std::vector<double> diffs;
  for (double extent : {1e-2, 1e-3, 1e-4, 1e-5}) {
    c.medium.length = extent * kSpeedOfLight * c.pulse.tau;
    const SimRecord a = run_protocol(c.medium, c.pulse, c.schedule, c.grid);
    const SimRecord b = run_protocol_corrected(c.medium, c.pulse, c.schedule, c.grid);
    ASSERT_TRUE(b.retarded_frame);
    diffs.push_back(relative_difference(b.output_series, a.output_series));
  }
  for (std::size_t k = 1; k < diffs.size(); ++k) EXPECT_LT(diffs[k], diffs[k - 1]);
  EXPECT_LE(diffs.back(), 1e-4);
}

TEST(RunCorrected, DesignPointGapWithinTwoPercent) {
  const Config c = fixture::design_point();
  const double simple = measure_efficiency(run_protocol(c.medium, c.pulse, c.schedule, c.grid)).efficiency;
  const double corrected =
      measure_efficiency(run_protocol_corrected(c.medium, c.pulse, c.schedule, c.grid)).efficiency;
  std::cout << "efficiency simplified " << simple << ", corrected " << corrected << "\n";
  EXPECT_LE(std::abs(corrected - simple), 0.02);
  EXPECT_GT(std::abs(corrected - simple), 0.0);
}

TEST(RunCorrected, GapScalesLinearlyWithMediumLength) {
  Config c = fixture::design_point();
  std::vector<double> x;
  std::vector<double> y;
  for (double extent : {1.0 / 50, 1.0 / 20, 1.0 / 10, 1.0 / 5}) {
    c.medium.length = extent * kSpeedOfLight * c.pulse.tau;
    // Same kdot L tau and d_in at every length.
    c.medium.n_dot_write = n_dot_for_bandwidth(2.0, c.medium.lambda0, c.medium.length, c.pulse.tau);
    c.refresh();
    RunOptions o;
    o.force = true;
    const double a = measure_efficiency(run_protocol(c.medium, c.pulse, c.schedule, c.grid, o)).efficiency;
    const double b =
        measure_efficiency(run_protocol_corrected(c.medium, c.pulse, c.schedule, c.grid, {}, o)).efficiency;
    x.push_back(std::log(extent));
    y.push_back(std::log(std::abs(b - a)));
  }
  const double s = oracle::slope(x, y);
  std::cout << "gap vs L/(c tau) log-log slope " << s << "\n";
  EXPECT_NEAR(s, 1.0, 0.3);
}

TEST(Audit, DesignPointRatiosSmall) {
  Config c = fixture::design_point();
  c.grid.snapshot_stride = 50;
  const SimRecord r = run_protocol_corrected(c.medium, c.pulse, c.schedule, c.grid);
  const TermAudit a = audit_terms(r, c.medium, c.schedule, c.pulse);
  ASSERT_EQ(a.terms.size(), 10u);
  for (const auto& t : a.terms) {
    EXPECT_TRUE(std::isfinite(t.ratio)) << t.name;
    EXPECT_LE(t.ratio, 0.05) << t.name;
    EXPECT_FALSE(t.parameter.empty());
    if (t.measured) {
      EXPECT_LE(t.ratio, 10.0 * t.predicted) << t.name;
      EXPECT_GE(t.ratio, 0.1 * t.predicted) << t.name;
    }
  }
  const double k0L = 2.26 * 2.0 * fixture::kPi / 795e-9 * 0.01;
  EXPECT_NEAR(a.at("d2z_field").predicted, 1.0 / k0L, 1e-12);
  EXPECT_NEAR(a.at("d2z_field").predicted, 5.6e-6, 0.05e-6);
  EXPECT_LE(a.max_ratio(), 0.05);
}

TEST(Audit, PureToneTimeDerivatives) {
  const double omega0 = fixture::design_point().medium.omega0();
  const double w = 2e9;
  const SimRecord r = tone_record(w, 2e-12, 9, 12);
  const Config c = fixture::design_point();
  const TermAudit a = audit_terms(r, c.medium, c.schedule, c.pulse);
  EXPECT_NEAR(a.at("d2t_field").ratio, w / (2.0 * omega0), 0.01 * w / (2.0 * omega0));
  const double pol = (2.0 * omega0 * w + w * w) / (omega0 * omega0);
  EXPECT_NEAR(a.at("polarization_derivs").ratio, pol, 0.01 * pol);
  // A z-independent field has no spatial derivative.
  EXPECT_EQ(a.at("d2z_field").max_dropped, 0.0);
}

TEST(Audit, StaticIndexZeroesRampTerms) {
  Config c = static_index(fixture::small());
  c.grid.snapshot_stride = 20;
  const SimRecord r = run_protocol(c.medium, c.pulse, c.schedule, c.grid);
  const TermAudit a = audit_terms(r, c.medium, c.schedule, c.pulse);
  for (const char* name : {"n_dot_squared", "n_dot_field", "index_phase", "n_dot_dt", "coefficient",
                           "carrier_vs_bandwidth"})
    EXPECT_EQ(a.at(name).ratio, 0.0) << name;
  EXPECT_GT(a.at("retarded_time").ratio, 0.0);
}

TEST(Audit, TooFewSnapshotsNamesStride) {
  Config c = fixture::small();
  c.grid.snapshot_stride = 1000;
  const SimRecord r = run_protocol(c.medium, c.pulse, c.schedule, c.grid);
  ASSERT_EQ(r.snapshots.size(), 3u);
  try {
    audit_terms(r, c.medium, c.schedule, c.pulse);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("grid.snapshot_stride to at most 500"), std::string::npos)
        << e.what();
  }
  EXPECT_THROW(audit_terms(SimRecord{}, c.medium, c.schedule, c.pulse), Error);
}

TEST(Audit, CoefficientCorrectionBoundedByIndexSwing) {
  for (double scale : {0.5, 1.0, 3.0}) {
    Config c = fixture::design_point();
    c.medium.n_dot_write *= scale;
    const IndexRamp ramp(c.medium, c.schedule);
    const double bound = ramp.max_excursion() / c.medium.n_i;
    const double kdot = std::abs(c.medium.k_dot_write());
    for (double t = 0.0; t <= c.schedule.t_write; t += c.schedule.t_write / 64.0)
      EXPECT_LE(kdot * t / c.medium.k_i(), bound * (1.0 + 1e-12));
  }
}

TEST(Audit, PassingConfigurationsStayBelowTenPercent) {
  int audited = 0;
  for (double length : {0.002, 0.01, 0.03}) {
    for (double tau_scale : {1.0, 3.0}) {
      Config c = fixture::small();
      c.pulse.tau *= tau_scale;
      c.pulse.t0 *= tau_scale;
      c.schedule.t_write *= tau_scale;
      c.schedule.t_hold *= tau_scale;
      c.schedule.t_read *= tau_scale;
      c.medium.gamma /= tau_scale;
      c.medium.length = length;
      c.medium.n_dot_write = n_dot_for_bandwidth(2.0, c.medium.lambda0, length, c.pulse.tau);
      c.grid.snapshot_stride = 10;
      c.refresh();
      if (check_conditions(c.medium, c.pulse, c.schedule).overall != Grade::pass) continue;
      const SimRecord r = run_protocol_corrected(c.medium, c.pulse, c.schedule, c.grid);
      const TermAudit a = audit_terms(r, c.medium, c.schedule, c.pulse);
      EXPECT_LE(a.max_ratio(), 0.1) << "L = " << length << ", tau x" << tau_scale;
      ++audited;
    }
  }
  EXPECT_GE(audited, 3);
}
