#pragma once

// Internal: the one integrator shared by the simplified and corrected solvers.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tgem/protocol.hpp"
#include "tgem/solver.hpp"

namespace tgem::detail {

/// Propagation terms restored by the corrected solver. Default-constructed
/// means the simplified equation.
struct FieldCorrections {
  /// n_bar / c. Each cell runs on lab time t' + z * delay_per_length.
  double delay_per_length = 0.0;
  /// i n(t) kdot(t) z / c phase term.
  bool index_phase = false;
  /// k_i / k0(t) factor on the polarization source.
  bool coefficient = false;
  std::optional<IndexRamp> ramp;

  bool active() const noexcept { return delay_per_length != 0.0 || index_phase || coefficient; }
};

/// (1 - exp(-a)) / a, accurate near a = 0.
cplx phi1(cplx a) noexcept;

class Integrator {
 public:
  Integrator(const Protocol& protocol, double coupling, double length, std::size_t nz,
             InputSignal input, FieldCorrections corrections = {});

  FieldState initial(double t) const;

  /// Advances `state` by dt in place. Returns the energy lost to decay over the
  /// step (trapezoid in time, same units as EnergyComponents::stored).
  double advance(FieldState& state, double dt) const;
  /// Same, to an absolute end time (keeps the time grid free of accumulated rounding).
  double advance_to(FieldState& state, double t1) const;

  /// Field sweep from z = 0 for the given coherence at time t.
  void sweep(std::span<const cplx> coherence, double t, std::span<cplx> field) const;

  std::size_t size() const noexcept { return z_.size(); }
  const std::vector<double>& z() const noexcept { return z_; }
  double dz() const noexcept { return dz_; }
  double coupling() const noexcept { return coupling_; }
  double length() const noexcept { return length_; }
  double delay(std::size_t j) const noexcept { return z_[j] * corrections_.delay_per_length; }
  const FieldCorrections& corrections() const noexcept { return corrections_; }
  const InputSignal& input() const noexcept { return input_; }

 private:
  void exponents(double t0, double t1, std::vector<cplx>& out) const;

  Protocol protocol_;
  double coupling_;
  double length_;
  double dz_;
  std::vector<double> z_;
  InputSignal input_;
  FieldCorrections corrections_;

  mutable std::vector<cplx> half_exp_;
  mutable std::vector<cplx> full_exp_;
  mutable std::vector<cplx> predicted_;
  mutable std::vector<cplx> mid_field_;
};

/// Validation shared by every public runner: spec checks, the validity gate,
/// resolution guards and input clipping. Non-fatal findings go to `warnings`.
void gate_run(const MediumSpec& medium, const PulseSpec& pulse, const ScheduleSpec& schedule,
              const GridSpec& grid, const RunOptions& options, std::vector<std::string>& warnings);

/// Runs the integrator over [0, total] and assembles the SimRecord (ledger,
/// series, snapshots, monitors). Lab-time output is resampled when the
/// retarded frame is active.
SimRecord integrate(const Integrator& integrator, const GridSpec& grid, double total,
                    const PhaseMarkers& markers);

}  // namespace tgem::detail
