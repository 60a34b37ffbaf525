#include "tgem/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tgem/config.hpp"
#include "tgem/error.hpp"

namespace tgem {

double analytic_efficiency(double d_in, double gamma_tau, double kdotL_tau) {
  if (!(kdotL_tau > 0.0)) throw Error("kdotL_tau must be > 0");
  if (!(d_in >= 0.0) || !(gamma_tau >= 0.0)) throw Error("d_in and gamma_tau must be >= 0");
  // Extended precision inside, one rounding at the end.
  const long double d = static_cast<long double>(d_in) * gamma_tau / kdotL_tau;
  const long double absorbed = -std::expm1(-d);
  return static_cast<double>(std::exp(-2.0L * gamma_tau) * absorbed * absorbed);
}

namespace {

// Cumulative ledger quantity at an arbitrary time, linear between rows.
template <class Get>
double ledger_at(const std::vector<LedgerRow>& ledger, double t, Get get) {
  if (t <= ledger.front().t) return get(ledger.front());
  if (t >= ledger.back().t) return get(ledger.back());
  auto it = std::lower_bound(ledger.begin(), ledger.end(), t,
                             [](const LedgerRow& r, double v) { return r.t < v; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return get(lo) + w * (get(hi) - get(lo));
}

}  // namespace

EfficiencyMeasurement measure_efficiency(const SimRecord& record) {
  const auto& ledger = record.energy_ledger;
  const auto& m = record.phase_markers;
  if (ledger.size() < 2) throw Error("record has no energy ledger");
  if (!(m.write_end > 0.0 && m.hold_end >= m.write_end && m.read_end > m.hold_end))
    throw Error("record does not cover write, hold and read phases");
  if (ledger.back().t < m.read_end * (1.0 - 1e-12))
    throw Error("record ends before the read phase closes");

  EfficiencyMeasurement e;
  e.input_energy = ledger.back().flux_in;
  if (!(e.input_energy > 0.0)) throw Error("input energy is zero");

  auto out = [&](double t) { return ledger_at(ledger, t, [](const LedgerRow& r) { return r.flux_out; }); };
  const double after_write = out(m.write_end);
  const double after_hold = out(m.hold_end);
  const double after_read = out(m.read_end);
  const double stored = ledger_at(ledger, m.read_end, [](const LedgerRow& r) { return r.stored; });

  e.transmission = after_write / e.input_energy;
  e.hold_leak = (after_hold - after_write) / e.input_energy;
  e.efficiency = (after_read - after_hold) / e.input_energy;
  e.residual_stored = stored / e.input_energy;
  e.loss = 1.0 - e.efficiency - e.transmission - e.residual_stored;
  return e;
}

namespace {

// Integral over [0, L] of dz / (gamma + i (a + kdot z)).
cplx resolvent_integral(double gamma, double a, double kdot, double L) {
  if (kdot == 0.0) {
    if (gamma == 0.0 && a == 0.0) return {INFINITY, 0.0};
    return L / cplx(gamma, a);
  }
  if (gamma == 0.0) {
    // Lorentzian -> pi delta + principal value.
    const double lo = a;
    const double hi = a + kdot * L;
    const bool crosses = (lo < 0.0 && hi > 0.0) || (lo > 0.0 && hi < 0.0);
    const double re = crosses ? kPi / std::abs(kdot) : 0.0;
    const double im = -std::log(std::abs(hi / lo)) / kdot;
    return {re, im};
  }
  using boost::math::quadrature::gauss_kronrod;
  auto re = [&](double z) {
    const double u = a + kdot * z;
    return gamma / (gamma * gamma + u * u);
  };
  auto im = [&](double z) {
    const double u = a + kdot * z;
    return -u / (gamma * gamma + u * u);
  };
  // Split at the resonance so the peak sits on a panel edge.
  std::vector<double> cuts{0.0};
  const double z_res = -a / kdot;
  if (z_res > 0.0 && z_res < L) cuts.push_back(z_res);
  cuts.push_back(L);
  cplx total{};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += cplx(gauss_kronrod<double, 31>::integrate(re, cuts[i], cuts[i + 1], 15, 1e-11),
                  gauss_kronrod<double, 31>::integrate(im, cuts[i], cuts[i + 1], 15, 1e-11));
  }
  return total;
}

}  // namespace

std::vector<SpectrumPoint> transmission_spectrum(const MediumSpec& medium,
                                                 std::span<const double> offsets) {
  medium.validate();
  const double kappa2 = medium.coupling();
  const double kdot = medium.k_dot_write();
  const double L = medium.length;
  const double centre = medium.delta + 0.5 * kdot * L;
  const double half_band = 0.5 * std::abs(kdot) * L;

  std::vector<SpectrumPoint> out;
  out.reserve(offsets.size());
  for (double offset : offsets) {
    SpectrumPoint p;
    p.offset = offset;
    p.inside_band = kdot != 0.0 && std::abs(offset - centre) <= half_band;
    if (kappa2 != 0.0) {
      const cplx integral = resolvent_integral(medium.gamma, medium.delta - offset, kdot, L);
      p.amplitude = std::isinf(integral.real()) ? cplx{} : std::exp(-kappa2 * integral);
    }
    out.push_back(p);
  }
  return out;
}

BandwidthReport memory_bandwidth(const MediumSpec& medium, const PulseSpec& pulse) {
  BandwidthReport r;
  r.kdotL = std::abs(medium.k_dot_write()) * medium.length;
  r.signal_bandwidth = 1.0 / pulse.tau;
  r.ratio = r.kdotL * pulse.tau;
  r.no_gradient = r.kdotL == 0.0;
  return r;
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "d_in") return SweepAxis::d_in;
  if (name == "gamma_tau") return SweepAxis::gamma_tau;
  if (name == "kdotL_tau") return SweepAxis::kdotL_tau;
  if (name == "tau") return SweepAxis::tau;
  throw Error("unknown sweep axis '" + std::string(name) +
              "' (expected d_in, gamma_tau, kdotL_tau or tau)");
}

std::string_view to_string(SweepAxis axis) noexcept {
  switch (axis) {
    case SweepAxis::d_in:
      return "d_in";
    case SweepAxis::gamma_tau:
      return "gamma_tau";
    case SweepAxis::kdotL_tau:
      return "kdotL_tau";
    case SweepAxis::tau:
      return "tau";
  }
  return "?";
}

Config with_axis(const Config& base, SweepAxis axis, double value) {
  if (!std::isfinite(value)) throw Error("sweep value must be finite");
  Config c = base;
  auto& m = c.medium;
  auto& p = c.pulse;
  switch (axis) {
    case SweepAxis::d_in:
      if (value < 0.0) throw Error("d_in must be >= 0");
      m.d_in = value;
      m.d_eff.reset();
      break;
    case SweepAxis::gamma_tau:
      if (value < 0.0) throw Error("gamma_tau must be >= 0");
      m.gamma = value / p.tau;
      break;
    case SweepAxis::kdotL_tau: {
      if (!(value > 0.0)) throw Error("kdotL_tau must be > 0");
      const double old = m.n_dot_write;
      m.n_dot_write = n_dot_for_bandwidth(value, m.lambda0, m.length, p.tau);
      if (m.n_dot_read && old != 0.0) m.n_dot_read = *m.n_dot_read * (m.n_dot_write / old);
      break;
    }
    case SweepAxis::tau: {
      if (!(value > 0.0)) throw Error("tau must be > 0");
      // Rescale time so every dimensionless group except the carrier ones is kept.
      const double s = value / p.tau;
      p.tau = value;
      p.t0 *= s;
      p.sample_dt *= s;
      c.schedule.t_write *= s;
      c.schedule.t_hold *= s;
      c.schedule.t_read *= s;
      m.gamma /= s;
      m.delta /= s;
      m.n_dot_write /= s;
      if (m.n_dot_read) m.n_dot_read = *m.n_dot_read / s;
      c.carrier_offset_extra /= s;
      if (!c.center_in_band) p.carrier_offset /= s;
      break;
    }
  }
  c.refresh();
  return c;
}

namespace {

EfficiencyPoint evaluate(const Config& c, double axis_value, const SweepOptions& options) {
  EfficiencyPoint pt;
  pt.axis_value = axis_value;
  const DimensionlessParams p = nondimensionalize(c.medium, c.pulse);
  pt.d_in = c.medium.d_in;
  pt.gamma_tau = p.gamma_tau;
  pt.kdotL_tau = p.kdotL_tau;
  pt.d_eff = p.d_eff;
  if (c.medium.d_eff) {
    const double absorbed = 1.0 - std::exp(-p.d_eff);
    pt.eta_analytic = std::exp(-2.0 * p.gamma_tau) * absorbed * absorbed;
  } else {
    pt.eta_analytic = analytic_efficiency(pt.d_in, pt.gamma_tau, pt.kdotL_tau);
  }
  if (options.numeric) {
    const SimRecord rec = run_protocol(c.medium, c.pulse, c.schedule, c.grid, options.run);
    pt.eta_numeric = measure_efficiency(rec).efficiency;
  }
  return pt;
}

}  // namespace

std::vector<EfficiencyPoint> sweep(const Config& base, SweepAxis axis,
                                   std::span<const double> values, const SweepOptions& options) {
  // Resolve every point first so bad values fail before any run starts.
  std::vector<Config> configs;
  configs.reserve(values.size());
  for (double v : values) {
    configs.push_back(with_axis(base, axis, v));
    configs.back().validate();
  }

  std::vector<EfficiencyPoint> out(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        out[i] = evaluate(configs[i], values[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(1, values.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

TauOptimum optimize_tau(double d_in, double kdotL_tau) {
  if (!(d_in > 0.0)) throw Error("efficiency identically zero");
  if (!(kdotL_tau > 0.0)) throw Error("kdotL_tau must be > 0");
  auto eta = [&](double x) { return analytic_efficiency(d_in, x, kdotL_tau); };

  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0;
  double hi = 5.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = eta(x1);
  double f2 = eta(x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = eta(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = eta(x1);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, eta(x)};
}

}  // namespace tgem
