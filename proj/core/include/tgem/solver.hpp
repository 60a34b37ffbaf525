#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "tgem/medium.hpp"
#include "tgem/protocol.hpp"

namespace tgem {

/// Boundary envelope at z = 0 as a function of time.
using InputSignal = std::function<cplx(double)>;

/// Field and polarization on the z-grid at one instant.
///
/// `field` is the slowly varying envelope in Rabi-frequency units (g times the
/// field amplitude, rad/s); `coherence` is the collective ground-excited
/// coherence, dimensionless. In these units the coherence equation carries unit
/// coupling and the propagation equation carries n N g^2 / c.
struct FieldState {
  double t = 0.0;
  std::vector<cplx> field;
  std::vector<cplx> coherence;
};

struct EnergyComponents {
  /// |field|^2 at z = 0 and z = L (energy flux densities).
  double flux_in = 0.0;
  double flux_out = 0.0;
  /// coupling * integral |coherence|^2 dz.
  double stored = 0.0;
};

/// Cumulative energy bookkeeping after each step.
struct LedgerRow {
  double t = 0.0;
  double flux_in = 0.0;
  double flux_out = 0.0;
  double stored = 0.0;
  double decayed = 0.0;
};

struct SimRecord {
  std::vector<double> times;
  std::vector<cplx> input_series;
  std::vector<cplx> output_series;
  std::vector<FieldState> snapshots;
  std::size_t snapshot_stride = 0;
  std::vector<LedgerRow> energy_ledger;
  PhaseMarkers phase_markers;

  double coupling = 0.0;
  double length = 0.0;
  double dt = 0.0;
  /// Largest |coherence| seen during the run.
  double max_coherence = 0.0;
  /// Snapshots are stored in the retarded frame t' = t - n z / c.
  bool retarded_frame = false;
  std::vector<std::string> warnings;
};

/// Weak-signal monitor threshold on |coherence|.
inline constexpr double kWeakSignalLimit = 0.1;
/// Largest fraction of pulse energy allowed to fall outside the write window.
inline constexpr double kMaxClippedFraction = 1e-4;

struct RunOptions {
  /// Run even if a validity condition or a resolution guard fails.
  bool force = false;
  /// Skip the input-clipping check.
  bool allow_clipping = false;
};

/// Single integrator step of the simplified Maxwell-Bloch system.
///
/// Coherence: exponential integrator with the field held at its midpoint value
/// (predicted with a half step). Field: trapezoid sweep from z = 0 with the
/// boundary value taken from `input`.
FieldState step(const FieldState& state, double dt, const Protocol& protocol, double coupling,
                double length, const InputSignal& input);

FieldState step(const FieldState& state, double dt, const MediumSpec& medium,
                const ScheduleSpec& schedule, const PulseSpec& pulse);

/// Zero coherence, field equal to the boundary value everywhere.
FieldState initial_state(std::size_t nz, double t, const InputSignal& input);

/// Write -> hold -> read with the refractive-index ramp. Deterministic.
SimRecord run_protocol(const MediumSpec& medium, const PulseSpec& pulse,
                       const ScheduleSpec& schedule, const GridSpec& grid,
                       const RunOptions& options = {});

/// Same protocol parameterized as a static spatial gradient eta on the atomic
/// resonances, sign-flipped for read. Shares the integrator with run_protocol.
SimRecord run_gem(double eta, const MediumSpec& medium, const PulseSpec& pulse,
                  const ScheduleSpec& schedule, const GridSpec& grid,
                  const RunOptions& options = {});

/// Integrator entry point for an arbitrary protocol and boundary signal. No
/// validity gating; used by the public runners and by tests.
SimRecord run_dynamics(const Protocol& protocol, double coupling, double length,
                       const InputSignal& input, const GridSpec& grid);

EnergyComponents compute_energy(const FieldState& state, double coupling, double length);
EnergyComponents compute_energy(const FieldState& state, const MediumSpec& medium);

/// Boundary signal for a pulse.
InputSignal pulse_signal(const PulseSpec& pulse);

}  // namespace tgem
