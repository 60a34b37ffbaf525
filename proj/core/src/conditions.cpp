#include "tgem/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tgem/error.hpp"
#include "tgem/protocol.hpp"

namespace tgem {

std::string_view to_string(Grade grade) noexcept {
  switch (grade) {
    case Grade::pass:
      return "pass";
    case Grade::warn:
      return "warn";
    case Grade::fail:
      return "fail";
  }
  return "?";
}

Grade grade_ratio(double ratio) noexcept {
  if (!(ratio < kWarnRatio)) return Grade::fail;  // NaN fails too
  return ratio < kPassRatio ? Grade::pass : Grade::warn;
}

const ConditionCheck& ConditionReport::at(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw Error("no condition named " + std::string(name));
}

std::string ConditionReport::to_text() const {
  std::ostringstream os;
  os.precision(4);
  for (const auto& c : checks) {
    os << "  " << c.name << " (" << c.inequality << "): ratio " << c.ratio << " -> "
       << to_string(c.grade) << '\n';
  }
  if (no_gradient) os << "  no gradient: write ramp is zero, memory bandwidth undefined\n";
  os << "  overall: " << to_string(overall) << '\n';
  return os.str();
}

ConditionReport check_conditions(const MediumSpec& medium, const PulseSpec& pulse,
                                 const ScheduleSpec& schedule) {
  const double c = kSpeedOfLight;
  const double L = medium.length;
  const double omega0 = medium.omega0();
  const IndexRamp ramp(medium, schedule);
  const double kdot = std::max(std::abs(medium.k_dot_write()), std::abs(medium.k_dot_read()));

  ConditionReport report;
  auto add = [&](std::string name, std::string inequality, double ratio) {
    report.checks.push_back({std::move(name), std::move(inequality), ratio, grade_ratio(ratio)});
  };
  add("carrier", "omega0 tau >> 1", 1.0 / (omega0 * pulse.tau));
  add("pulse_extent", "L << c tau", L / (c * pulse.tau));
  add("gradient", "kdot L << 2c/(n L)", kdot * L * medium.n_i * L / (2.0 * c));
  add("index_change", "dn << n_i", ramp.max_excursion() / medium.n_i);
  add("wavevector", "k0 L >> 1", 1.0 / (medium.k_i() * L));

  report.no_gradient = medium.n_dot_write == 0.0;
  report.overall = Grade::pass;
  for (const auto& ch : report.checks) report.overall = std::max(report.overall, ch.grade);
  return report;
}

}  // namespace tgem
