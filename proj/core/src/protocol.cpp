#include "tgem/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "tgem/error.hpp"

namespace tgem {

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::write:
      return "write";
    case Phase::hold:
      return "hold";
    case Phase::read:
      return "read";
  }
  return "?";
}

namespace {

PhaseMarkers markers_of(const ScheduleSpec& s) {
  return {s.write_end(), s.hold_end(), s.total()};
}

}  // namespace

Protocol::Protocol(std::array<double, 3> gradient, std::array<double, 3> decay, double delta,
                   PhaseMarkers markers)
    : gradient_(gradient), decay_(decay), delta_(delta), markers_(markers) {}

Protocol Protocol::index_ramp(const MediumSpec& medium, const ScheduleSpec& schedule) {
  const double hold_decay = schedule.gamma_hold_off ? 0.0 : medium.gamma;
  return Protocol({medium.k_dot_write(), 0.0, medium.k_dot_read()},
                  {medium.gamma, hold_decay, medium.gamma}, medium.delta, markers_of(schedule));
}

Protocol Protocol::spatial_gradient(double eta_write, double eta_read, double delta, double gamma,
                                    const ScheduleSpec& schedule) {
  const double hold_decay = schedule.gamma_hold_off ? 0.0 : gamma;
  return Protocol({eta_write, 0.0, eta_read}, {gamma, hold_decay, gamma}, delta,
                  markers_of(schedule));
}

void Protocol::require_inside(double t) const {
  if (!(t >= 0.0 && t <= markers_.read_end)) throw ProtocolError("time beyond protocol");
}

Phase Protocol::phase_at(double t) const {
  require_inside(t);
  if (t < markers_.write_end) return Phase::write;
  if (t < markers_.hold_end) return Phase::hold;
  return Phase::read;
}

double Protocol::gradient_at(double t) const { return gradient(phase_at(t)); }
double Protocol::decay_at(double t) const { return decay(phase_at(t)); }

double Protocol::detuning(double z, double t) const { return delta_ + gradient_at(t) * z; }

double Protocol::piecewise_integral(const std::array<double, 3>& rate, double a,
                                    double b) const noexcept {
  const double w = markers_.write_end;
  const double h = markers_.hold_end;
  // Fast path: both ends inside one phase.
  if (b <= w) return rate[0] * (b - a);
  if (a >= h) return rate[2] * (b - a);
  if (a >= w && b <= h) return rate[1] * (b - a);

  double total = 0.0;
  if (a < w) total += rate[0] * (w - a);
  const double lo = std::max(a, w);
  const double hi = std::min(b, h);
  if (hi > lo) total += rate[1] * (hi - lo);
  if (b > h) total += rate[2] * (b - std::max(a, h));
  return total;
}

double Protocol::gradient_integral(double a, double b) const noexcept {
  return piecewise_integral(gradient_, a, b);
}

double Protocol::decay_integral(double a, double b) const noexcept {
  return piecewise_integral(decay_, a, b);
}

double Protocol::max_abs_gradient() const noexcept {
  return std::max({std::abs(gradient_[0]), std::abs(gradient_[1]), std::abs(gradient_[2])});
}

IndexRamp::IndexRamp(const MediumSpec& medium, const ScheduleSpec& schedule)
    : n_i_(medium.n_i),
      omega0_(medium.omega0()),
      rate_{medium.n_dot_write, 0.0, medium.read_ramp()},
      markers_(markers_of(schedule)) {}

double IndexRamp::n_dot_at(double t) const noexcept {
  if (t < markers_.write_end) return rate_[0];
  if (t < markers_.hold_end) return rate_[1];
  return rate_[2];
}

double IndexRamp::n_at(double t) const noexcept {
  const double w = markers_.write_end;
  const double h = markers_.hold_end;
  const double tc = std::clamp(t, 0.0, markers_.read_end);
  if (tc <= w) return n_i_ + rate_[0] * tc;
  const double after_write = n_i_ + rate_[0] * w;
  if (tc <= h) return after_write;
  return after_write + rate_[2] * (tc - h);
}

double IndexRamp::max_excursion() const noexcept {
  // n(t) is piecewise linear, so the extremes sit on phase boundaries.
  const double ends[] = {markers_.write_end, markers_.hold_end, markers_.read_end};
  double m = 0.0;
  for (double t : ends) m = std::max(m, std::abs(n_at(t) - n_i_));
  return m;
}

double IndexRamp::mean_index() const noexcept {
  const double w = markers_.write_end;
  const double h = markers_.hold_end;
  const double r = markers_.read_end;
  if (r <= 0.0) return n_i_;
  // Trapezoid is exact per linear piece.
  const double area = 0.5 * (n_at(0.0) + n_at(w)) * w + n_at(w) * (h - w) +
                      0.5 * (n_at(h) + n_at(r)) * (r - h);
  return area / r;
}

double effective_detuning(double z, double t, const MediumSpec& medium,
                          const ScheduleSpec& schedule) {
  if (!(z >= 0.0 && z <= medium.length)) throw ProtocolError("position outside the medium");
  return Protocol::index_ramp(medium, schedule).detuning(z, t);
}

}  // namespace tgem
