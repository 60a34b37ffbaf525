#pragma once

#include <array>
#include <string_view>

#include "tgem/medium.hpp"

namespace tgem {

enum class Phase { write = 0, hold = 1, read = 2 };

std::string_view to_string(Phase phase) noexcept;

struct PhaseMarkers {
  double write_end = 0.0;
  double hold_end = 0.0;
  double read_end = 0.0;
};

/// Piecewise-constant spatial detuning gradient and polarization decay over the
/// write/hold/read protocol. The detuning seen by the atoms at z is
/// delta + gradient(t) * z.
///
/// Both the refractive-index-ramp parameterization and the static
/// spatial-gradient (GEM) parameterization produce a Protocol; the solver only
/// ever sees this type.
class Protocol {
 public:
  /// Gradient kdot(t) = ndot(t) omega0 / c from the index ramp.
  static Protocol index_ramp(const MediumSpec& medium, const ScheduleSpec& schedule);

  /// Gradient eta applied directly to the atomic resonances, reversed at read.
  static Protocol spatial_gradient(double eta_write, double eta_read, double delta, double gamma,
                                   const ScheduleSpec& schedule);

  Phase phase_at(double t) const;
  double gradient_at(double t) const;
  double decay_at(double t) const;
  double detuning(double z, double t) const;

  /// Integrals over [a, b]. Outside [0, read_end] the first and last phases are
  /// continued, which the retarded-frame solver needs near the protocol ends.
  double gradient_integral(double a, double b) const noexcept;
  double decay_integral(double a, double b) const noexcept;

  double static_detuning() const noexcept { return delta_; }
  double gradient(Phase p) const noexcept { return gradient_[static_cast<int>(p)]; }
  double decay(Phase p) const noexcept { return decay_[static_cast<int>(p)]; }
  const PhaseMarkers& markers() const noexcept { return markers_; }
  double max_abs_gradient() const noexcept;

 private:
  Protocol(std::array<double, 3> gradient, std::array<double, 3> decay, double delta,
           PhaseMarkers markers);

  double piecewise_integral(const std::array<double, 3>& rate, double a, double b) const noexcept;
  void require_inside(double t) const;

  std::array<double, 3> gradient_{};
  std::array<double, 3> decay_{};
  double delta_ = 0.0;
  PhaseMarkers markers_{};
};

/// n(t) = n_i + integral of ndot; continuous across phase boundaries.
class IndexRamp {
 public:
  IndexRamp(const MediumSpec& medium, const ScheduleSpec& schedule);

  double n_at(double t) const noexcept;
  double n_dot_at(double t) const noexcept;
  double k0_at(double t) const noexcept { return n_at(t) * omega0_ / kSpeedOfLight; }
  double k_dot_at(double t) const noexcept { return n_dot_at(t) * omega0_ / kSpeedOfLight; }
  /// max |n(t) - n_i| over [0, read_end].
  double max_excursion() const noexcept;
  /// Time average of n(t) over the protocol.
  double mean_index() const noexcept;
  double n_initial() const noexcept { return n_i_; }

 private:
  double n_i_;
  double omega0_;
  std::array<double, 3> rate_{};
  PhaseMarkers markers_{};
};

/// Delta + kdot(t) z. Throws ProtocolError outside [0, total] or z outside [0, L].
double effective_detuning(double z, double t, const MediumSpec& medium,
                          const ScheduleSpec& schedule);

}  // namespace tgem
