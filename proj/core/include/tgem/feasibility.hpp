#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tgem {

/// Electro-optic host crystal. r_coeffs maps a drive-axis label ("2", "3") to
/// the linear electro-optic coefficient r_11k in m/V, sign preserved.
struct CrystalSpec {
  std::string name;
  double n_o = 0.0;
  std::map<std::string, double> r_coeffs;
  double thickness = 0.0;
  double delta_n_max = 0.0;

  void validate() const;
};

/// Literature figures stored next to the bundled crystal data.
struct CrystalReference {
  double delta_n = 0.0;
  std::pair<double, double> field_band{0.0, 0.0};
  std::pair<double, double> voltage_band{0.0, 0.0};
};

/// Clamped low-temperature lithium niobate, ordinary axis.
CrystalSpec bundled_crystal(std::string_view name = "lithium_niobate");
CrystalReference bundled_reference(std::string_view name = "lithium_niobate");

/// Index swing for a ramp lasting `ramp_window` pulse durations:
/// dn = kdotL_tau * ramp_window * lambda0 / (2 pi L). Independent of tau.
double delta_n_required(double lambda0, double length, double kdotL_tau, double ramp_window);

/// Pockels response to first order: dn = n_o^3 r E / 2.
double delta_n_from_field(double field, double r, double n_o) noexcept;

struct DriveField {
  /// |E| in V/m.
  double magnitude = 0.0;
  /// Signed field along the drive direction that produces a positive dn.
  double signed_field = 0.0;
  /// Effective coefficient along the drive direction (m/V).
  double effective_r = 0.0;
  std::string note;
};

/// Single-axis inversion E = 2 dn / (n_o^3 |r|).
DriveField drive_field_for_delta_n(double delta_n, const CrystalSpec& crystal,
                                   std::string_view axis);

/// Drive along a direction given as (axis label, direction cosine) pairs; the
/// effective coefficient is the vector sum of the per-axis coefficients.
DriveField drive_field_for_delta_n(double delta_n, const CrystalSpec& crystal,
                                   const std::vector<std::pair<std::string, double>>& direction);

/// Fields needed along each principal axis, smallest to largest.
std::pair<double, double> drive_field_band(double delta_n, const CrystalSpec& crystal);

double voltage(double field, const CrystalSpec& crystal);

enum class Feasibility { feasible, marginal, infeasible };

std::string_view to_string(Feasibility f) noexcept;

/// Above this fraction of the breakdown limit a design is graded marginal.
inline constexpr double kMarginalFraction = 0.25;

struct DesignRequirements {
  double lambda0 = 795e-9;
  double length = 0.01;
  double kdotL_tau = 2.0;
  /// Effective ramp duration in units of the pulse duration.
  double ramp_window = 2.0;
  std::string axis = "2";
  /// Overrides the computed index swing when set.
  std::optional<double> delta_n_target;
};

struct DesignEntry {
  std::string name;
  std::optional<double> value;
  std::string unit;
  bool ok = true;
  std::string message;
};

struct FeasibilityReport {
  double delta_n = 0.0;
  std::optional<double> field;
  std::optional<double> volts;
  std::pair<double, double> field_band{0.0, 0.0};
  std::vector<DesignEntry> entries;
  Feasibility grade = Feasibility::infeasible;
  std::string advisory;

  std::string to_text() const;
};

/// Chains index swing -> drive field -> voltage and checks the breakdown limit.
/// Component failures become infeasible entries instead of exceptions.
FeasibilityReport design_report(const DesignRequirements& req, const CrystalSpec& crystal);

}  // namespace tgem
