#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tgem/analysis.hpp"
#include "tgem/conditions.hpp"
#include "tgem/corrected_solver.hpp"
#include "tgem/solver.hpp"

namespace tgem {

struct Config;

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Time series: t, Re/Im input, Re/Im output, flux_in, flux_out, stored, decayed.
std::string record_csv(const SimRecord& record, std::size_t stride = 1);

/// axis value, eta_analytic, eta_numeric, gap, d_eff.
std::string sweep_csv(const std::vector<EfficiencyPoint>& points, SweepAxis axis);

/// term, measured ratio, predicted parameter, predicted value, grade.
std::string audit_csv(const TermAudit& audit);

/// Summary document for a run: efficiency, transmission, d_eff, condition grades,
/// grid, config hash. Contains nothing time- or host-dependent.
std::string summary_json(const Config& config, const SimRecord& record,
                         const ConditionReport& conditions, const TermAudit* audit = nullptr);

std::string conditions_json(const ConditionReport& report);

/// Writes all files or none: each is staged next to its target and renamed once
/// every file has been written.
void write_files_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files);

}  // namespace tgem
