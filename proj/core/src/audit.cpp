#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tgem/corrected_solver.hpp"
#include "tgem/error.hpp"

namespace tgem {

namespace {

constexpr std::size_t kTrim = 2;

struct Extremes {
  double dropped = 0.0;
  double kept = 0.0;
  void update(double d, double k) {
    dropped = std::max(dropped, d);
    kept = std::max(kept, k);
  }
};

TermRecord make(std::string name, std::string dropped, std::string kept, const Extremes& e,
                std::string parameter, double predicted, bool measured = true) {
  TermRecord r;
  r.name = std::move(name);
  r.dropped = std::move(dropped);
  r.kept = std::move(kept);
  r.max_dropped = e.dropped;
  r.max_kept = e.kept;
  r.ratio = e.kept > 0.0 ? e.dropped / e.kept : (e.dropped > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  r.parameter = std::move(parameter);
  r.predicted = predicted;
  r.measured = measured;
  return r;
}

}  // namespace

const TermRecord& TermAudit::at(const std::string& name) const {
  for (const auto& t : terms)
    if (t.name == name) return t;
  throw Error("no audited term named " + name);
}

double TermAudit::max_ratio() const {
  double m = 0.0;
  for (const auto& t : terms) m = std::max(m, t.ratio);
  return m;
}

TermAudit audit_terms(const SimRecord& record, const MediumSpec& medium,
                      const ScheduleSpec& schedule, const PulseSpec& pulse) {
  const auto& snaps = record.snapshots;
  const std::size_t needed = 2 * kTrim + 1;
  if (snaps.size() < needed) {
    const std::size_t steps = record.times.empty() ? 0 : record.times.size() - 1;
    throw Error("audit needs at least " + std::to_string(needed) +
                " snapshots; set grid.snapshot_stride to at most " +
                std::to_string(std::max<std::size_t>(1, steps / (needed - 1))));
  }
  const std::size_t nz = snaps.front().field.size();
  if (nz < 2 * kTrim + 3) throw Error("audit needs grid.nz >= " + std::to_string(2 * kTrim + 3));

  const double c = kSpeedOfLight;
  const double omega0 = medium.omega0();
  const IndexRamp ramp(medium, schedule);
  const double L = medium.length;
  const double dz = L / static_cast<double>(nz - 1);
  const double ht = snaps[1].t - snaps[0].t;
  // Retarded-frame snapshots: d/dz at fixed lab time = d/dz' - (n_bar/c) d/dt'.
  const double delay = record.retarded_frame ? ramp.mean_index() / c : 0.0;

  Extremes d2z, d2t, pol, ndot2, ndot_field, retarded, phase;
  for (std::size_t k = kTrim; k + kTrim < snaps.size(); ++k) {
    const auto& prev = snaps[k - 1];
    const auto& cur = snaps[k];
    const auto& next = snaps[k + 1];
    const double t = cur.t;
    const double n = ramp.n_at(t);
    const double ndot = std::abs(ramp.n_dot_at(t));
    const double k0 = ramp.k0_at(t);
    const double kdot = std::abs(ramp.k_dot_at(t));

    for (std::size_t j = kTrim; j + kTrim < nz; ++j) {
      const cplx f = cur.field[j];
      const cplx ft = (next.field[j] - prev.field[j]) / (2.0 * ht);
      const cplx ftt = (next.field[j] - 2.0 * f + prev.field[j]) / (ht * ht);
      const cplx fz = (cur.field[j + 1] - cur.field[j - 1]) / (2.0 * dz) - delay * ft;
      const cplx fzz = (cur.field[j + 1] - 2.0 * f + cur.field[j - 1]) / (dz * dz);
      const cplx s = cur.coherence[j];
      const cplx st = (next.coherence[j] - prev.coherence[j]) / (2.0 * ht);
      const cplx stt = (next.coherence[j] - 2.0 * s + prev.coherence[j]) / (ht * ht);
      const double z = L * static_cast<double>(j) / static_cast<double>(nz - 1);

      d2z.update(std::abs(fzz), 2.0 * k0 * std::abs(fz));
      d2t.update(std::abs(ftt), 2.0 * omega0 * std::abs(ft));
      pol.update(std::abs(stt - cplx(0.0, 2.0 * omega0) * st), omega0 * omega0 * std::abs(s));
      ndot2.update(ndot * std::abs(f), 2.0 * n * std::abs(ft));
      ndot_field.update(2.0 * ndot * std::abs(f), n * std::abs(ft));
      retarded.update(n / c * std::abs(ft), std::abs(fz));
      phase.update(n * kdot * z / c * std::abs(f), std::abs(fz));
    }
  }

  const double tau = pulse.tau;
  const double n_i = medium.n_i;
  const double kdot_max = std::max(std::abs(medium.k_dot_write()), std::abs(medium.k_dot_read()));
  const double ndot_max = std::max(std::abs(medium.n_dot_write), std::abs(medium.read_ramp()));
  const double k_i = medium.k_i();

  TermAudit audit;
  audit.terms.push_back(make("d2z_field", "d2E/dz2", "2 k0 dE/dz", d2z, "1/(k0 L)", 1.0 / (k_i * L)));
  audit.terms.push_back(make("d2t_field", "(n^2/c^2) d2E/dt2", "(2 n^2 omega0/c^2) dE/dt", d2t,
                             "1/(omega0 tau)", 1.0 / (omega0 * tau)));
  audit.terms.push_back(make("polarization_derivs", "d2P/dt2 - 2i omega0 dP/dt", "omega0^2 P", pol,
                             "1/(omega0 tau)", 2.0 / (omega0 * tau)));
  audit.terms.push_back(make("n_dot_squared", "(ndot^2/(c^2 k0)) E", "(2 n ndot/(c^2 k0)) dE/dt",
                             ndot2, "dn/n", ndot_max * tau / (2.0 * n_i)));
  audit.terms.push_back(make("n_dot_field", "(2 ndot/c) E", "(n/c) dE/dt", ndot_field, "dn/n",
                             2.0 * ndot_max * tau / n_i));
  audit.terms.push_back(make("retarded_time", "(n/c) dE/dt", "dE/dz", retarded, "L/(c tau)",
                             n_i * L / (c * tau)));
  audit.terms.push_back(make("index_phase", "(n kdot z/c) E", "dE/dz", phase,
                             "kdot L n L/(2c)", kdot_max * L * n_i * L / (2.0 * c)));

  // Coefficient-only comparisons: no field data involved.
  Extremes ndot_dt;
  ndot_dt.update(2.0 * ndot_max, n_i * omega0);
  audit.terms.push_back(make("n_dot_dt", "(2 n ndot/(c^2 k0)) dE/dt", "(n/c) dE/dt", ndot_dt,
                             "dn/(n omega0 tau)", 2.0 * ndot_max / (n_i * omega0), false));
  Extremes coeff;
  coeff.update(ramp.max_excursion(), n_i);
  audit.terms.push_back(make("coefficient", "kdot t / k_i", "1", coeff, "dn/n_i",
                             ramp.max_excursion() / n_i, false));
  Extremes carrier;
  carrier.update(kdot_max * L, omega0);
  audit.terms.push_back(
      make("carrier_vs_bandwidth", "kdot L", "omega0", carrier, "kdot L/omega0", kdot_max * L / omega0, false));
  return audit;
}

}  // namespace tgem
