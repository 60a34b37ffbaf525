#include "tgem/corrected_solver.hpp"

#include "tgem/detail/integrator.hpp"

namespace tgem {

namespace {

detail::FieldCorrections corrections_for(const MediumSpec& medium, const ScheduleSpec& schedule,
                                         const CorrectionTerms& terms) {
  detail::FieldCorrections fc;
  IndexRamp ramp(medium, schedule);
  if (terms.retarded_time) fc.delay_per_length = ramp.mean_index() / kSpeedOfLight;
  fc.index_phase = terms.index_phase;
  fc.coefficient = terms.source_coefficient;
  fc.ramp = ramp;
  return fc;
}

}  // namespace

FieldState step_corrected(const FieldState& state, double dt, const MediumSpec& medium,
                          const ScheduleSpec& schedule, const PulseSpec& pulse,
                          const CorrectionTerms& terms) {
  const detail::Integrator integrator(Protocol::index_ramp(medium, schedule), medium.coupling(),
                                      medium.length, state.coherence.size(), pulse_signal(pulse),
                                      corrections_for(medium, schedule, terms));
  FieldState next = state;
  integrator.advance(next, dt);
  return next;
}

SimRecord run_protocol_corrected(const MediumSpec& medium, const PulseSpec& pulse,
                                 const ScheduleSpec& schedule, const GridSpec& grid,
                                 const CorrectionTerms& terms, const RunOptions& options) {
  std::vector<std::string> warnings;
  detail::gate_run(medium, pulse, schedule, grid, options, warnings);
  const auto protocol = Protocol::index_ramp(medium, schedule);
  const detail::Integrator integrator(protocol, medium.coupling(), medium.length, grid.nz,
                                      pulse_signal(pulse),
                                      corrections_for(medium, schedule, terms));
  SimRecord rec = detail::integrate(integrator, grid, schedule.total(), protocol.markers());
  warnings.insert(warnings.end(), rec.warnings.begin(), rec.warnings.end());
  rec.warnings = std::move(warnings);
  return rec;
}

}  // namespace tgem
