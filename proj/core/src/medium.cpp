#include "tgem/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tgem/error.hpp"

namespace tgem {

namespace {

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigError(key, what);
}

bool finite(double v) { return std::isfinite(v); }

// Integral of |a + (b - a) s|^2 for s in [s0, s1] (Simpson is exact for quadratics).
double segment_energy(cplx a, cplx b, double s0, double s1, double h) {
  auto at = [&](double s) { return std::norm(a + (b - a) * s); };
  return (s1 - s0) * h / 6.0 * (at(s0) + 4.0 * at(0.5 * (s0 + s1)) + at(s1));
}

}  // namespace

double MediumSpec::coupling() const {
  if (d_eff) {
    const double kdot = std::abs(k_dot_write());
    if (kdot == 0.0) throw ConfigError("medium.d_eff", "requires a nonzero write ramp");
    return *d_eff * kdot / kTwoPi;
  }
  return d_in * gamma / (kTwoPi * length);
}

void MediumSpec::validate() const {
  require(finite(n_i) && n_i > 1.0, "medium.n_i", "must be > 1");
  require(finite(length) && length > 0.0, "medium.length", "must be > 0");
  require(finite(gamma) && gamma >= 0.0, "medium.gamma", "must be >= 0");
  require(finite(d_in) && d_in >= 0.0, "medium.d_in", "must be >= 0");
  require(finite(lambda0) && lambda0 > 0.0, "medium.lambda0", "must be > 0");
  require(finite(delta), "medium.delta", "must be finite");
  require(finite(n_dot_write), "medium.n_dot_write", "must be finite");
  if (n_dot_read) require(finite(*n_dot_read), "medium.n_dot_read", "must be finite");
  if (d_eff) {
    require(finite(*d_eff) && *d_eff >= 0.0, "medium.d_eff", "must be >= 0");
    require(d_in == 0.0, "medium.d_eff", "d_in and d_eff are mutually exclusive");
    require(n_dot_write != 0.0, "medium.d_eff", "requires a nonzero write ramp");
  }
}

cplx PulseSpec::envelope(double t) const {
  double magnitude = 0.0;
  switch (shape) {
    case PulseShape::gaussian: {
      const double u = (t - t0) / tau;
      magnitude = amplitude * std::exp(-0.5 * u * u);
      break;
    }
    case PulseShape::square:
      magnitude = (t >= t0 - 0.5 * tau && t < t0 + 0.5 * tau) ? amplitude : 0.0;
      break;
    case PulseShape::sampled: {
      if (samples.empty()) return {};
      const double start = t0 - 0.5 * sample_dt * static_cast<double>(samples.size() - 1);
      const double x = (t - start) / sample_dt;
      if (x < 0.0 || x > static_cast<double>(samples.size() - 1)) return {};
      const auto i = std::min(static_cast<std::size_t>(x), samples.size() - 2);
      const double frac = x - static_cast<double>(i);
      const cplx value = samples[i] + (samples[i + 1] - samples[i]) * frac;
      return amplitude * value * std::polar(1.0, -carrier_offset * t);
    }
  }
  if (magnitude == 0.0) return {};
  return std::polar(magnitude, -carrier_offset * t);
}

double PulseSpec::energy() const {
  switch (shape) {
    case PulseShape::gaussian:
      return amplitude * amplitude * tau * std::sqrt(kPi);
    case PulseShape::square:
      return amplitude * amplitude * tau;
    case PulseShape::sampled: {
      const double inf = std::numeric_limits<double>::infinity();
      return energy_between(-inf, inf);
    }
  }
  return 0.0;
}

double PulseSpec::energy_between(double a, double b) const {
  if (!(b > a)) return 0.0;
  switch (shape) {
    case PulseShape::gaussian:
      return 0.5 * amplitude * amplitude * tau * std::sqrt(kPi) *
             (std::erf((b - t0) / tau) - std::erf((a - t0) / tau));
    case PulseShape::square: {
      const double lo = std::max(a, t0 - 0.5 * tau);
      const double hi = std::min(b, t0 + 0.5 * tau);
      return hi > lo ? amplitude * amplitude * (hi - lo) : 0.0;
    }
    case PulseShape::sampled: {
      if (samples.size() < 2) return 0.0;
      const double start = t0 - 0.5 * sample_dt * static_cast<double>(samples.size() - 1);
      double total = 0.0;
      for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const double seg0 = start + sample_dt * static_cast<double>(i);
        const double s0 = std::clamp((a - seg0) / sample_dt, 0.0, 1.0);
        const double s1 = std::clamp((b - seg0) / sample_dt, 0.0, 1.0);
        if (s1 > s0) total += segment_energy(samples[i], samples[i + 1], s0, s1, sample_dt);
      }
      return amplitude * amplitude * total;
    }
  }
  return 0.0;
}

double PulseSpec::support_half_width() const {
  switch (shape) {
    case PulseShape::gaussian:
      return 6.0 * tau;
    case PulseShape::square:
      return 0.5 * tau;
    case PulseShape::sampled:
      return 0.5 * sample_dt * static_cast<double>(samples.empty() ? 0 : samples.size() - 1);
  }
  return 0.0;
}

void PulseSpec::validate() const {
  require(finite(tau) && tau > 0.0, "pulse.tau", "must be > 0");
  require(finite(t0), "pulse.t0", "must be finite");
  require(finite(amplitude), "pulse.amplitude", "must be finite");
  require(finite(carrier_offset), "pulse.carrier_offset", "must be finite");
  if (shape == PulseShape::sampled) {
    require(samples.size() >= 2, "pulse.samples_re", "sampled shape needs at least two samples");
    require(finite(sample_dt) && sample_dt > 0.0, "pulse.sample_dt", "must be > 0");
    for (const auto& s : samples)
      require(finite(s.real()) && finite(s.imag()), "pulse.samples_re", "samples must be finite");
  }
}

void ScheduleSpec::validate() const {
  require(finite(t_write) && t_write > 0.0, "schedule.t_write", "must be > 0");
  require(finite(t_hold) && t_hold >= 0.0, "schedule.t_hold", "must be >= 0");
  require(finite(t_read) && t_read > 0.0, "schedule.t_read", "must be > 0");
}

void GridSpec::validate() const {
  require(nz >= 2, "grid.nz", "must be >= 2");
  require(nt >= 2, "grid.nt", "must be >= 2");
  require(ledger_stride >= 1, "grid.ledger_stride", "must be >= 1");
}

double effective_depth(const MediumSpec& medium) {
  if (medium.d_eff) return *medium.d_eff;
  const double kdotL = std::abs(medium.k_dot_write()) * medium.length;
  if (kdotL == 0.0) throw Error("no gradient: memory bandwidth undefined");
  return medium.d_in * medium.gamma / kdotL;
}

DimensionlessParams nondimensionalize(const MediumSpec& medium, const PulseSpec& pulse) {
  const double kdotL = std::abs(medium.k_dot_write()) * medium.length;
  if (kdotL == 0.0) throw Error("no gradient: memory bandwidth undefined");
  DimensionlessParams p;
  p.gamma_tau = medium.gamma * pulse.tau;
  p.kdotL_tau = kdotL * pulse.tau;
  p.d_eff = medium.d_eff ? *medium.d_eff : medium.d_in * p.gamma_tau / p.kdotL_tau;
  p.delta_tau = medium.delta * pulse.tau;
  return p;
}

double n_dot_for_bandwidth(double kdotL_tau, double lambda0, double length, double tau) {
  return kdotL_tau * lambda0 / (kTwoPi * length * tau);
}

std::vector<std::string> grid_guard_violations(const GridSpec& grid, const MediumSpec& medium,
                                               const PulseSpec& pulse,
                                               const ScheduleSpec& schedule) {
  std::vector<std::string> out;
  const double dt = grid.dt(schedule.total());
  const double dz = grid.dz(medium.length);

  if (dt > pulse.tau / 20.0) out.push_back("grid.nt: dt exceeds tau/20");

  const double L = medium.length;
  const double rate = std::max({std::abs(medium.delta), std::abs(medium.delta + medium.k_dot_write() * L),
                                std::abs(medium.delta + medium.k_dot_read() * L),
                                std::abs(pulse.carrier_offset), medium.gamma});
  if (rate > 0.0 && dt > 0.1 / rate) out.push_back("grid.nt: dt exceeds 0.1 / max(|delta + kdot L|, gamma)");

  double depth = medium.d_in;
  if (medium.d_eff || medium.k_dot_write() != 0.0) depth = effective_depth(medium);
  if (depth * dz / L > 0.2) out.push_back("grid.nz: optical depth per cell exceeds 0.2");
  return out;
}

}  // namespace tgem
