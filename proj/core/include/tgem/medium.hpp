#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tgem/constants.hpp"

namespace tgem {

/// Host crystal plus dopant ensemble. SI units; rates in rad/s.
///
/// The microscopic pair (atom number, coupling) enters the dynamics only through
/// the product n N g^2 / c, which is carried here as the resonant optical depth
/// `d_in` of the unbroadened line. When `d_eff` is set instead, the coupling is
/// pinned to the effective depth of the broadened line, which stays meaningful
/// for gamma = 0.
struct MediumSpec {
  double n_i = 2.26;
  double length = 0.01;
  double gamma = 0.0;
  double d_in = 0.0;
  std::optional<double> d_eff;
  double lambda0 = 795e-9;
  double delta = 0.0;
  double n_dot_write = 0.0;
  /// Defaults to -n_dot_write when unset.
  std::optional<double> n_dot_read;

  double omega0() const noexcept { return kTwoPi * kSpeedOfLight / lambda0; }
  double k_i() const noexcept { return n_i * omega0() / kSpeedOfLight; }
  double read_ramp() const noexcept { return n_dot_read.value_or(-n_dot_write); }
  double k_dot_write() const noexcept { return n_dot_write * omega0() / kSpeedOfLight; }
  double k_dot_read() const noexcept { return read_ramp() * omega0() / kSpeedOfLight; }
  /// True when the read ramp is not the exact mirror of the write ramp.
  bool asymmetric_read() const noexcept { return read_ramp() != -n_dot_write; }

  /// n N g^2 / c in 1/(m s): d_in * gamma / (2 pi L), or d_eff * |kdot| / (2 pi).
  double coupling() const;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

enum class PulseShape { gaussian, square, sampled };

/// Input envelope at z = 0. The carrier offset rotates the envelope as exp(-i offset t).
struct PulseSpec {
  PulseShape shape = PulseShape::gaussian;
  double tau = 1e-9;
  double t0 = 3e-9;
  double amplitude = 1.0;
  double carrier_offset = 0.0;
  /// Sampled shape only: samples centred on t0, spaced by sample_dt, linearly interpolated.
  std::vector<cplx> samples;
  double sample_dt = 0.0;

  cplx envelope(double t) const;
  /// Integral of |envelope|^2 over all time.
  double energy() const;
  /// Integral of |envelope|^2 over [a, b].
  double energy_between(double a, double b) const;
  /// Time outside of which the envelope is negligible (exactly zero for square/sampled).
  double support_half_width() const;

  void validate() const;
};

/// Write (ramp on), hold (ramp off), read (ramp reversed).
struct ScheduleSpec {
  double t_write = 6e-9;
  double t_hold = 2e-9;
  double t_read = 8e-9;
  /// Freeze polarization decay during hold (excitation parked in a long-lived state).
  bool gamma_hold_off = true;

  double write_end() const noexcept { return t_write; }
  double hold_end() const noexcept { return t_write + t_hold; }
  double total() const noexcept { return t_write + t_hold + t_read; }

  void validate() const;
};

struct GridSpec {
  std::size_t nz = 200;
  std::size_t nt = 20000;
  /// 0 disables interior snapshots.
  std::size_t snapshot_stride = 0;
  /// Stride between ledger rows written to CSV (the in-memory ledger is always per step).
  std::size_t ledger_stride = 1;

  double dz(double length) const { return length / static_cast<double>(nz - 1); }
  double dt(double total_time) const { return total_time / static_cast<double>(nt); }

  void validate() const;
};

struct DimensionlessParams {
  double gamma_tau = 0.0;
  /// Memory bandwidth over signal bandwidth.
  double kdotL_tau = 0.0;
  double d_eff = 0.0;
  double delta_tau = 0.0;
};

/// Throws Error("no gradient: memory bandwidth undefined") when the write ramp is zero.
DimensionlessParams nondimensionalize(const MediumSpec& medium, const PulseSpec& pulse);

/// Effective optical depth of the broadened line, d_in * gamma / (kdot L).
double effective_depth(const MediumSpec& medium);

/// Write-ramp rate giving the requested kdot L tau (sign +).
double n_dot_for_bandwidth(double kdotL_tau, double lambda0, double length, double tau);

/// Resolution guards for a grid; returns one message per violated guard.
std::vector<std::string> grid_guard_violations(const GridSpec& grid, const MediumSpec& medium,
                                               const PulseSpec& pulse,
                                               const ScheduleSpec& schedule);

}  // namespace tgem
