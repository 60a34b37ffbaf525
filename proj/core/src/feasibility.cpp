#include "tgem/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tgem/constants.hpp"
#include "tgem/error.hpp"

namespace tgem {

void CrystalSpec::validate() const {
  auto require = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(key, what);
  };
  require(std::isfinite(n_o) && n_o > 1.0, "crystal.n_o", "must be > 1");
  require(std::isfinite(thickness) && thickness > 0.0, "crystal.thickness", "must be > 0");
  require(std::isfinite(delta_n_max) && delta_n_max > 0.0, "crystal.delta_n_max", "must be > 0");
  require(!r_coeffs.empty(), "crystal.r_coeffs", "needs at least one axis");
  for (const auto& [axis, r] : r_coeffs)
    if (!std::isfinite(r)) throw ConfigError("crystal.r_coeffs." + axis, "must be finite");
}

double delta_n_required(double lambda0, double length, double kdotL_tau, double ramp_window) {
  if (!(lambda0 > 0.0) || !(length > 0.0)) throw Error("lambda0 and length must be > 0");
  if (!(kdotL_tau >= 0.0) || !(ramp_window >= 0.0))
    throw Error("kdotL_tau and ramp_window must be >= 0");
  return kdotL_tau * ramp_window * lambda0 / (kTwoPi * length);
}

double delta_n_from_field(double field, double r, double n_o) noexcept {
  return n_o * n_o * n_o * r * field / 2.0;
}

namespace {

DriveField invert(double delta_n, const CrystalSpec& crystal, double r, std::string note) {
  if (r == 0.0) throw Error("axis inactive");
  if (std::abs(delta_n) > crystal.delta_n_max) throw Error("exceeds breakdown limit");
  const double n3 = crystal.n_o * crystal.n_o * crystal.n_o;
  DriveField f;
  f.signed_field = 2.0 * delta_n / (n3 * r);
  f.magnitude = std::abs(f.signed_field);
  f.effective_r = r;
  f.note = std::move(note);
  return f;
}

}  // namespace

DriveField drive_field_for_delta_n(double delta_n, const CrystalSpec& crystal,
                                   std::string_view axis) {
  const auto it = crystal.r_coeffs.find(std::string(axis));
  if (it == crystal.r_coeffs.end()) throw Error("axis inactive: no coefficient for axis " + std::string(axis));
  std::string note = "field along axis " + it->first;
  note += it->second < 0.0 ? "; r < 0, so the field points against the axis for dn > 0"
                           : "; field along +axis for dn > 0";
  return invert(delta_n, crystal, it->second, std::move(note));
}

DriveField drive_field_for_delta_n(double delta_n, const CrystalSpec& crystal,
                                   const std::vector<std::pair<std::string, double>>& direction) {
  double norm2 = 0.0;
  for (const auto& [axis, cosine] : direction) norm2 += cosine * cosine;
  if (!(norm2 > 0.0)) throw Error("drive direction has zero length");
  const double norm = std::sqrt(norm2);
  double r = 0.0;
  std::string note = "field along (";
  for (std::size_t i = 0; i < direction.size(); ++i) {
    const auto& [axis, cosine] = direction[i];
    const auto it = crystal.r_coeffs.find(axis);
    if (it == crystal.r_coeffs.end()) throw Error("axis inactive: no coefficient for axis " + axis);
    r += it->second * cosine / norm;
    note += (i ? ", " : "") + axis + ":" + std::to_string(cosine / norm);
  }
  note += ")";
  return invert(delta_n, crystal, r, std::move(note));
}

std::pair<double, double> drive_field_band(double delta_n, const CrystalSpec& crystal) {
  double lo = INFINITY;
  double hi = 0.0;
  for (const auto& [axis, r] : crystal.r_coeffs) {
    if (r == 0.0) continue;
    const double e = drive_field_for_delta_n(delta_n, crystal, axis).magnitude;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  if (hi == 0.0 && lo == INFINITY) throw Error("axis inactive: no nonzero coefficient");
  return {lo, hi};
}

double voltage(double field, const CrystalSpec& crystal) {
  if (!(crystal.thickness > 0.0)) throw Error("electrode gap must be > 0");
  return field * crystal.thickness;
}

std::string_view to_string(Feasibility f) noexcept {
  switch (f) {
    case Feasibility::feasible:
      return "feasible";
    case Feasibility::marginal:
      return "marginal";
    case Feasibility::infeasible:
      return "infeasible";
  }
  return "?";
}

FeasibilityReport design_report(const DesignRequirements& req, const CrystalSpec& crystal) {
  FeasibilityReport rep;
  rep.advisory =
      "Drive along axis 2: a field component along the dopant dipole axis Stark-shifts the "
      "optical transition. Level shifts are not computed.";
  bool failed = false;
  auto fail = [&](std::string name, std::string unit, std::string message) {
    rep.entries.push_back({std::move(name), std::nullopt, std::move(unit), false, std::move(message)});
    failed = true;
  };

  try {
    crystal.validate();
  } catch (const Error& e) {
    fail("crystal", "", e.what());
  }

  try {
    rep.delta_n = req.delta_n_target
                      ? *req.delta_n_target
                      : delta_n_required(req.lambda0, req.length, req.kdotL_tau, req.ramp_window);
    rep.entries.push_back({"delta_n", rep.delta_n, "", true,
                           req.delta_n_target ? "target" : "kdotL_tau * window * lambda0 / (2 pi L)"});
  } catch (const Error& e) {
    fail("delta_n", "", e.what());
  }

  if (!failed) {
    const bool over = rep.delta_n > crystal.delta_n_max;
    rep.entries.push_back({"breakdown_margin", rep.delta_n / crystal.delta_n_max, "", !over,
                           over ? "exceeds breakdown limit" : "fraction of delta_n_max"});
    if (over) failed = true;
  }

  if (!failed) {
    try {
      const DriveField f = drive_field_for_delta_n(rep.delta_n, crystal, req.axis);
      rep.field = f.magnitude;
      rep.entries.push_back({"drive_field", f.magnitude, "V/m", true, f.note});
      rep.volts = voltage(f.magnitude, crystal);
      rep.entries.push_back({"voltage", rep.volts, "V", true, "across the electrode gap"});
      rep.field_band = drive_field_band(rep.delta_n, crystal);
    } catch (const Error& e) {
      fail("drive_field", "V/m", e.what());
    }
  }

  if (failed) {
    rep.grade = Feasibility::infeasible;
  } else if (rep.delta_n > kMarginalFraction * crystal.delta_n_max) {
    rep.grade = Feasibility::marginal;
  } else {
    rep.grade = Feasibility::feasible;
  }
  return rep;
}

std::string FeasibilityReport::to_text() const {
  std::ostringstream os;
  os.precision(4);
  for (const auto& e : entries) {
    os << "  " << e.name << ": ";
    if (e.value) os << *e.value << (e.unit.empty() ? "" : " " + e.unit);
    else os << "-";
    os << (e.ok ? "" : "  [FAILED]");
    if (!e.message.empty()) os << "  (" << e.message << ")";
    os << '\n';
  }
  if (field_band.second > 0.0)
    os << "  field band over axes: " << field_band.first << " .. " << field_band.second << " V/m\n";
  os << "  grade: " << to_string(grade) << '\n';
  os << "  advisory: " << advisory << '\n';
  return os.str();
}

}  // namespace tgem
