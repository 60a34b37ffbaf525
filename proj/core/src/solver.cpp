#include "tgem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tgem/conditions.hpp"
#include "tgem/detail/integrator.hpp"
#include "tgem/error.hpp"

namespace tgem {

namespace detail {

namespace {

constexpr cplx kI{0.0, 1.0};

double trapezoid_norm(std::span<const cplx> v, double dz) {
  if (v.size() < 2) return 0.0;
  double sum = 0.5 * (std::norm(v.front()) + std::norm(v.back()));
  for (std::size_t j = 1; j + 1 < v.size(); ++j) sum += std::norm(v[j]);
  return sum * dz;
}

std::size_t first_non_finite(const std::vector<cplx>& v) {
  for (std::size_t j = 0; j < v.size(); ++j)
    if (!std::isfinite(v[j].real()) || !std::isfinite(v[j].imag())) return j;
  return v.size();
}

}  // namespace

cplx phi1(cplx a) noexcept {
  if (std::abs(a) < 1e-2) {
    return 1.0 + a * (-1.0 / 2.0 +
                      a * (1.0 / 6.0 +
                           a * (-1.0 / 24.0 +
                                a * (1.0 / 120.0 + a * (-1.0 / 720.0 + a * (1.0 / 5040.0))))));
  }
  return (1.0 - std::exp(-a)) / a;
}

Integrator::Integrator(const Protocol& protocol, double coupling, double length, std::size_t nz,
                       InputSignal input, FieldCorrections corrections)
    : protocol_(protocol),
      coupling_(coupling),
      length_(length),
      dz_(length / static_cast<double>(nz - 1)),
      z_(nz),
      input_(std::move(input)),
      corrections_(std::move(corrections)),
      half_exp_(nz),
      full_exp_(nz),
      predicted_(nz),
      mid_field_(nz) {
  if (nz < 2) throw ConfigError("grid.nz", "must be >= 2");
  for (std::size_t j = 0; j < nz; ++j)
    z_[j] = length * static_cast<double>(j) / static_cast<double>(nz - 1);
  if ((corrections_.index_phase || corrections_.coefficient) && !corrections_.ramp)
    throw Error("field corrections need an index ramp");
}

FieldState Integrator::initial(double t) const {
  FieldState s;
  s.t = t;
  s.coherence.assign(z_.size(), cplx{});
  s.field.assign(z_.size(), cplx{});
  sweep(s.coherence, t, s.field);
  return s;
}

// Exponent of the homogeneous propagator over [t0, t1] per cell:
// integral of gamma + i (delta + gradient z), at lab time shifted by the cell delay.
void Integrator::exponents(double t0, double t1, std::vector<cplx>& out) const {
  const double delta_phase = protocol_.static_detuning() * (t1 - t0);
  if (corrections_.delay_per_length == 0.0) {
    const double g = protocol_.gradient_integral(t0, t1);
    const double decay = protocol_.decay_integral(t0, t1);
    for (std::size_t j = 0; j < z_.size(); ++j) out[j] = cplx(decay, delta_phase + z_[j] * g);
    return;
  }
  for (std::size_t j = 0; j < z_.size(); ++j) {
    const double s = delay(j);
    const double g = protocol_.gradient_integral(t0 + s, t1 + s);
    const double decay = protocol_.decay_integral(t0 + s, t1 + s);
    out[j] = cplx(decay, delta_phase + z_[j] * g);
  }
}

void Integrator::sweep(std::span<const cplx> coherence, double t, std::span<cplx> field) const {
  const std::size_t n = z_.size();
  field[0] = input_(t);
  const cplx half_source(0.0, 0.5 * dz_ * coupling_);

  if (!corrections_.active()) {
    for (std::size_t j = 0; j + 1 < n; ++j)
      field[j + 1] = field[j] + half_source * (coherence[j] + coherence[j + 1]);
    return;
  }

  const IndexRamp* ramp = corrections_.ramp ? &*corrections_.ramp : nullptr;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double z_mid = 0.5 * (z_[j] + z_[j + 1]);
    const double t_lab = t + z_mid * corrections_.delay_per_length;
    cplx source = half_source;
    if (corrections_.coefficient) source *= ramp->n_initial() / ramp->n_at(t_lab);
    double phase = 0.0;
    if (corrections_.index_phase) {
      const double beta = ramp->n_at(t_lab) * ramp->k_dot_at(t_lab) / kSpeedOfLight;
      phase = beta * 0.5 * (z_[j + 1] * z_[j + 1] - z_[j] * z_[j]);
    }
    if (phase != 0.0) {
      const cplx p = std::polar(1.0, -phase);
      field[j + 1] = p * field[j] + source * (p * coherence[j] + coherence[j + 1]);
    } else {
      field[j + 1] = field[j] + source * (coherence[j] + coherence[j + 1]);
    }
  }
}

double Integrator::advance(FieldState& state, double dt) const {
  return advance_to(state, state.t + dt);
}

double Integrator::advance_to(FieldState& state, double t1) const {
  const std::size_t n = z_.size();
  const double t = state.t;
  const double tm = t + 0.5 * (t1 - t);
  exponents(t, tm, half_exp_);
  exponents(t, t1, full_exp_);

  // Predictor: half step with the field held at its start-of-step value.
  for (std::size_t j = 0; j < n; ++j) {
    const cplx a = half_exp_[j];
    predicted_[j] = std::exp(-a) * state.coherence[j] + kI * state.field[j] * ((tm - t) * phi1(a));
  }
  sweep(predicted_, tm, mid_field_);

  // Full step with the midpoint field.
  double decayed = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const cplx a = full_exp_[j];
    const cplx old = state.coherence[j];
    const cplx updated = std::exp(-a) * old + kI * mid_field_[j] * ((t1 - t) * phi1(a));
    const double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    decayed += w * a.real() * (std::norm(old) + std::norm(updated));
    state.coherence[j] = updated;
  }
  sweep(state.coherence, t1, state.field);
  state.t = t1;
  return coupling_ * decayed * dz_;
}

SimRecord integrate(const Integrator& integrator, const GridSpec& grid, double total,
                    const PhaseMarkers& markers) {
  const std::size_t nt = grid.nt;
  const double dt = total / static_cast<double>(nt);
  const double dz = integrator.dz();
  const double coupling = integrator.coupling();

  SimRecord rec;
  rec.phase_markers = markers;
  rec.coupling = coupling;
  rec.length = integrator.length();
  rec.dt = dt;
  rec.snapshot_stride = grid.snapshot_stride;
  rec.retarded_frame = integrator.corrections().delay_per_length != 0.0;
  rec.times.resize(nt + 1);
  for (std::size_t n = 0; n < nt; ++n) rec.times[n] = static_cast<double>(n) * dt;
  rec.times[nt] = total;

  rec.input_series.resize(nt + 1);
  std::vector<cplx> raw_output(nt + 1);
  std::vector<double> stored(nt + 1);
  std::vector<double> decayed(nt + 1, 0.0);
  double max_norm = 0.0;

  FieldState state = integrator.initial(0.0);
  auto observe = [&](std::size_t n) {
    rec.input_series[n] = state.field.front();
    raw_output[n] = state.field.back();
    stored[n] = coupling * trapezoid_norm(state.coherence, dz);
    for (const auto& s : state.coherence) max_norm = std::max(max_norm, std::norm(s));
    if (grid.snapshot_stride > 0 && n % grid.snapshot_stride == 0) rec.snapshots.push_back(state);
  };
  observe(0);

  for (std::size_t n = 0; n < nt; ++n) {
    const double lost = integrator.advance_to(state, rec.times[n + 1]);
    if (auto j = first_non_finite(state.coherence); j < state.coherence.size())
      throw NumericError(n + 1, j, "non-finite coherence");
    if (auto j = first_non_finite(state.field); j < state.field.size())
      throw NumericError(n + 1, j, "non-finite field");
    decayed[n + 1] = decayed[n] + lost;
    observe(n + 1);
  }

  // Output in lab time. In the retarded frame the z = L sample at t' belongs to t' + n L / c.
  if (rec.retarded_frame) {
    const double shift = integrator.delay(integrator.size() - 1);
    rec.output_series.resize(nt + 1);
    for (std::size_t n = 0; n <= nt; ++n) {
      const double x = (rec.times[n] - shift) / dt;
      if (x <= 0.0) {
        rec.output_series[n] = raw_output[0];
        continue;
      }
      const auto i = std::min(static_cast<std::size_t>(x), nt - 1);
      const double frac = std::min(x - static_cast<double>(i), 1.0);
      rec.output_series[n] = raw_output[i] + (raw_output[i + 1] - raw_output[i]) * frac;
    }
  } else {
    rec.output_series = std::move(raw_output);
  }

  rec.energy_ledger.resize(nt + 1);
  double flux_in = 0.0;
  double flux_out = 0.0;
  for (std::size_t n = 0; n <= nt; ++n) {
    if (n > 0) {
      const double h = rec.times[n] - rec.times[n - 1];
      flux_in += 0.5 * h * (std::norm(rec.input_series[n - 1]) + std::norm(rec.input_series[n]));
      flux_out += 0.5 * h * (std::norm(rec.output_series[n - 1]) + std::norm(rec.output_series[n]));
    }
    rec.energy_ledger[n] = {rec.times[n], flux_in, flux_out, stored[n], decayed[n]};
  }

  rec.max_coherence = std::sqrt(max_norm);
  if (rec.max_coherence > kWeakSignalLimit) {
    std::ostringstream os;
    os << "weak-signal limit exceeded: max |coherence| = " << rec.max_coherence;
    rec.warnings.push_back(os.str());
  }
  return rec;
}

void gate_run(const MediumSpec& medium, const PulseSpec& pulse, const ScheduleSpec& schedule,
              const GridSpec& grid, const RunOptions& options, std::vector<std::string>& warnings) {
  medium.validate();
  pulse.validate();
  schedule.validate();
  grid.validate();

  const ConditionReport report = check_conditions(medium, pulse, schedule);
  if (report.overall == Grade::fail && !options.force) {
    std::string names;
    for (const auto& c : report.checks)
      if (c.grade == Grade::fail) names += (names.empty() ? "" : ", ") + c.name;
    throw ConditionError("validity condition failed: " + names, report.to_text());
  }
  if (report.overall != Grade::pass) warnings.push_back("validity conditions graded " +
                                                        std::string(to_string(report.overall)));
  if (report.no_gradient) warnings.push_back("no gradient: memory bandwidth undefined");
  if (medium.asymmetric_read()) warnings.push_back("asymmetric read ramp");

  const auto violations = grid_guard_violations(grid, medium, pulse, schedule);
  if (!violations.empty()) {
    if (!options.force) {
      const auto& v = violations.front();
      const auto colon = v.find(':');
      throw ConfigError(v.substr(0, colon), v.substr(colon + 2));
    }
    for (const auto& v : violations) warnings.push_back("resolution guard: " + v);
  }

  if (!options.allow_clipping) {
    const double energy = pulse.energy();
    if (energy > 0.0) {
      const double clipped = 1.0 - pulse.energy_between(0.0, schedule.t_write) / energy;
      if (clipped > kMaxClippedFraction) {
        std::ostringstream os;
        os << "write window clips " << clipped << " of the input pulse energy (limit "
           << kMaxClippedFraction << ")";
        throw ProtocolError(os.str());
      }
    }
  }
}

}  // namespace detail

namespace {

SimRecord run_gated(const Protocol& protocol, const MediumSpec& medium, const PulseSpec& pulse,
                    const ScheduleSpec& schedule, const GridSpec& grid, const RunOptions& options) {
  std::vector<std::string> warnings;
  detail::gate_run(medium, pulse, schedule, grid, options, warnings);
  const detail::Integrator integrator(protocol, medium.coupling(), medium.length, grid.nz,
                                      pulse_signal(pulse));
  SimRecord rec = detail::integrate(integrator, grid, schedule.total(), protocol.markers());
  warnings.insert(warnings.end(), rec.warnings.begin(), rec.warnings.end());
  rec.warnings = std::move(warnings);
  return rec;
}

}  // namespace

InputSignal pulse_signal(const PulseSpec& pulse) {
  return [pulse](double t) { return pulse.envelope(t); };
}

FieldState initial_state(std::size_t nz, double t, const InputSignal& input) {
  FieldState s;
  s.t = t;
  s.coherence.assign(nz, cplx{});
  s.field.assign(nz, input(t));
  return s;
}

FieldState step(const FieldState& state, double dt, const Protocol& protocol, double coupling,
                double length, const InputSignal& input) {
  const detail::Integrator integrator(protocol, coupling, length, state.coherence.size(), input);
  FieldState next = state;
  integrator.advance(next, dt);
  return next;
}

FieldState step(const FieldState& state, double dt, const MediumSpec& medium,
                const ScheduleSpec& schedule, const PulseSpec& pulse) {
  return step(state, dt, Protocol::index_ramp(medium, schedule), medium.coupling(), medium.length,
              pulse_signal(pulse));
}

SimRecord run_dynamics(const Protocol& protocol, double coupling, double length,
                       const InputSignal& input, const GridSpec& grid) {
  grid.validate();
  const detail::Integrator integrator(protocol, coupling, length, grid.nz, input);
  return detail::integrate(integrator, grid, protocol.markers().read_end, protocol.markers());
}

SimRecord run_protocol(const MediumSpec& medium, const PulseSpec& pulse,
                       const ScheduleSpec& schedule, const GridSpec& grid,
                       const RunOptions& options) {
  return run_gated(Protocol::index_ramp(medium, schedule), medium, pulse, schedule, grid, options);
}

SimRecord run_gem(double eta, const MediumSpec& medium, const PulseSpec& pulse,
                  const ScheduleSpec& schedule, const GridSpec& grid, const RunOptions& options) {
  const auto protocol =
      Protocol::spatial_gradient(eta, -eta, medium.delta, medium.gamma, schedule);
  return run_gated(protocol, medium, pulse, schedule, grid, options);
}

EnergyComponents compute_energy(const FieldState& state, double coupling, double length) {
  EnergyComponents e;
  if (state.field.empty()) return e;
  e.flux_in = std::norm(state.field.front());
  e.flux_out = std::norm(state.field.back());
  const double dz = length / static_cast<double>(state.coherence.size() - 1);
  e.stored = coupling * detail::trapezoid_norm(state.coherence, dz);
  return e;
}

EnergyComponents compute_energy(const FieldState& state, const MediumSpec& medium) {
  return compute_energy(state, medium.coupling(), medium.length);
}

}  // namespace tgem
