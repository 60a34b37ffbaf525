#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tgem/medium.hpp"
#include "tgem/solver.hpp"

namespace tgem {

struct Config;

/// exp(-2 gamma tau) (1 - exp(-d_in gamma tau / (kdot L tau)))^2.
double analytic_efficiency(double d_in, double gamma_tau, double kdotL_tau);

struct EfficiencyMeasurement {
  double input_energy = 0.0;
  /// Output energy in the read window over input energy.
  double efficiency = 0.0;
  /// Output energy in the write window over input energy.
  double transmission = 0.0;
  /// Output energy leaking during hold over input energy.
  double hold_leak = 0.0;
  /// Excitation still stored when the read window closes, over input energy.
  double residual_stored = 0.0;
  /// 1 - efficiency - transmission - residual_stored.
  double loss = 0.0;
};

EfficiencyMeasurement measure_efficiency(const SimRecord& record);

struct SpectrumPoint {
  double offset = 0.0;
  cplx amplitude{1.0, 0.0};
  bool inside_band = false;
};

/// Steady-state amplitude transmission of a monochromatic input at carrier
/// offset `offset` through the write-phase gradient, by adaptive z-quadrature of
/// exp(-coupling * integral dz / (gamma + i(delta + kdot z - offset))).
/// A zero gradient gives the static Lorentzian line.
std::vector<SpectrumPoint> transmission_spectrum(const MediumSpec& medium,
                                                 std::span<const double> offsets);

struct BandwidthReport {
  /// kdot L (rad/s), signal bandwidth 1/tau (rad/s), and their ratio kdot L tau.
  double kdotL = 0.0;
  double signal_bandwidth = 0.0;
  double ratio = 0.0;
  bool no_gradient = false;
};

BandwidthReport memory_bandwidth(const MediumSpec& medium, const PulseSpec& pulse);

enum class SweepAxis { d_in, gamma_tau, kdotL_tau, tau };

/// Throws Error for unknown names.
SweepAxis parse_axis(std::string_view name);
std::string_view to_string(SweepAxis axis) noexcept;

struct EfficiencyPoint {
  double axis_value = 0.0;
  double d_in = 0.0;
  double gamma_tau = 0.0;
  double kdotL_tau = 0.0;
  double d_eff = 0.0;
  double eta_analytic = 0.0;
  std::optional<double> eta_numeric;

  /// Bandwidth-clipping gap: numeric minus analytic.
  std::optional<double> gap() const {
    if (!eta_numeric) return std::nullopt;
    return *eta_numeric - eta_analytic;
  }
};

struct SweepOptions {
  bool numeric = false;
  std::size_t jobs = 1;
  RunOptions run;
};

/// Base configuration with one dimensionless axis set to `value`.
Config with_axis(const Config& base, SweepAxis axis, double value);

/// Results are in input order regardless of `jobs`.
std::vector<EfficiencyPoint> sweep(const Config& base, SweepAxis axis,
                                   std::span<const double> values,
                                   const SweepOptions& options = {});

struct TauOptimum {
  double gamma_tau_star = 0.0;
  double eta_star = 0.0;
};

/// Golden-section maximization of the analytic efficiency over gamma*tau in (0, 5].
TauOptimum optimize_tau(double d_in, double kdotL_tau);

}  // namespace tgem
