#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tgem/medium.hpp"

namespace tgem {

enum class Grade { pass = 0, warn = 1, fail = 2 };

std::string_view to_string(Grade grade) noexcept;

/// Smallness ratios below kPassRatio pass, below kWarnRatio warn, otherwise fail.
inline constexpr double kPassRatio = 0.05;
inline constexpr double kWarnRatio = 0.2;

Grade grade_ratio(double ratio) noexcept;

struct ConditionCheck {
  std::string name;
  std::string inequality;
  /// Always expressed as the small side over the large side.
  double ratio = 0.0;
  Grade grade = Grade::pass;
};

struct ConditionReport {
  std::vector<ConditionCheck> checks;
  Grade overall = Grade::pass;
  /// Write ramp is zero: the memory has no bandwidth.
  bool no_gradient = false;

  const ConditionCheck& at(std::string_view name) const;
  std::string to_text() const;
};

/// Grades the five inequalities under which the simplified propagation equation
/// holds: omega0 tau >> 1, c tau / L >> 1, kdot L << 2c/(nL), dn << n_i, k0 L >> 1.
/// Never throws for valid specs; failing conditions are graded, not raised.
ConditionReport check_conditions(const MediumSpec& medium, const PulseSpec& pulse,
                                 const ScheduleSpec& schedule);

}  // namespace tgem
