#pragma once

#include <string>
#include <vector>

#include "tgem/medium.hpp"
#include "tgem/solver.hpp"

namespace tgem {

/// Which of the terms dropped by the simplified propagation equation are
/// restored. All on by default.
struct CorrectionTerms {
  /// (n/c) d/dt of the field, via the retarded frame t' = t - n_bar z / c.
  bool retarded_time = true;
  /// i (n kdot z / c) field, integrated as an exact phase factor per cell.
  bool index_phase = true;
  /// Time-dependent source coefficient k_i / k0(t).
  bool source_coefficient = true;
};

/// One step of the less-simplified propagation equation
///   (d_z + (n/c)(d_t + i kdot z)) E = i mu0 w0^2 / (2 k0(t)) P.
/// With `terms.retarded_time` the state is interpreted in the retarded frame.
FieldState step_corrected(const FieldState& state, double dt, const MediumSpec& medium,
                          const ScheduleSpec& schedule, const PulseSpec& pulse,
                          const CorrectionTerms& terms = {});

/// Full write/hold/read run of the corrected equation. Output and ledger are in
/// lab time; snapshots stay in the retarded frame (record.retarded_frame).
SimRecord run_protocol_corrected(const MediumSpec& medium, const PulseSpec& pulse,
                                 const ScheduleSpec& schedule, const GridSpec& grid,
                                 const CorrectionTerms& terms = {},
                                 const RunOptions& options = {});

/// Magnitude audit of one dropped term against the term it was dropped next to.
struct TermRecord {
  std::string name;
  std::string dropped;
  std::string kept;
  double max_dropped = 0.0;
  double max_kept = 0.0;
  double ratio = 0.0;
  /// Symbolic smallness parameter, e.g. "1/(k0 L)".
  std::string parameter;
  /// Analytic estimate of `ratio` from characteristic scales.
  double predicted = 0.0;
  /// True when the ratio is computed from finite differences of the record.
  bool measured = true;
};

struct TermAudit {
  std::vector<TermRecord> terms;

  const TermRecord& at(const std::string& name) const;
  double max_ratio() const;
};

/// Finite-difference audit of every term dropped on the way from the full
/// slowly-varying wave equation to the simplified propagation equation.
/// Requires at least three consecutive snapshots.
TermAudit audit_terms(const SimRecord& record, const MediumSpec& medium,
                      const ScheduleSpec& schedule, const PulseSpec& pulse);

}  // namespace tgem
