#include "tgem/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>
#include <unistd.h>

#include "tgem/config.hpp"
#include "tgem/error.hpp"

namespace tgem {

using nlohmann::ordered_json;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string record_csv(const SimRecord& record, std::size_t stride) {
  if (stride == 0) stride = 1;
  std::string out = "t,in_re,in_im,out_re,out_im,flux_in,flux_out,stored,decayed\n";
  const std::size_t n = record.times.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i % stride != 0 && i + 1 != n) continue;
    const auto& row = record.energy_ledger[i];
    const cplx in = record.input_series[i];
    const cplx o = record.output_series[i];
    for (double v : {record.times[i], in.real(), in.imag(), o.real(), o.imag(), row.flux_in,
                     row.flux_out, row.stored}) {
      out += format_double(v);
      out += ',';
    }
    out += format_double(row.decayed);
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const std::vector<EfficiencyPoint>& points, SweepAxis axis) {
  std::string out(to_string(axis));
  out += ",eta_analytic,eta_numeric,gap,d_eff\n";
  for (const auto& p : points) {
    out += format_double(p.axis_value) + ',' + format_double(p.eta_analytic) + ',';
    if (p.eta_numeric) out += format_double(*p.eta_numeric);
    out += ',';
    if (auto g = p.gap()) out += format_double(*g);
    out += ',' + format_double(p.d_eff) + '\n';
  }
  return out;
}

std::string audit_csv(const TermAudit& audit) {
  std::string out = "term,measured_ratio,parameter,predicted,grade\n";
  for (const auto& t : audit.terms) {
    out += t.name + ',' + format_double(t.ratio) + ',' + t.parameter + ',' +
           format_double(t.predicted) + ',' + std::string(to_string(grade_ratio(t.ratio))) + '\n';
  }
  return out;
}

namespace {

ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

ordered_json conditions_object(const ConditionReport& report) {
  ordered_json checks = ordered_json::object();
  for (const auto& c : report.checks) {
    checks[c.name] = {{"inequality", c.inequality},
                      {"ratio", number(c.ratio)},
                      {"grade", std::string(to_string(c.grade))}};
  }
  return {{"checks", checks},
          {"overall", std::string(to_string(report.overall))},
          {"no_gradient", report.no_gradient}};
}

ordered_json audit_array(const TermAudit& audit) {
  ordered_json terms = ordered_json::array();
  for (const auto& t : audit.terms) {
    terms.push_back({{"term", t.name},
                     {"dropped", t.dropped},
                     {"kept", t.kept},
                     {"max_dropped", number(t.max_dropped)},
                     {"max_kept", number(t.max_kept)},
                     {"ratio", number(t.ratio)},
                     {"parameter", t.parameter},
                     {"predicted", number(t.predicted)},
                     {"measured", t.measured},
                     {"grade", std::string(to_string(grade_ratio(t.ratio)))}});
  }
  return terms;
}

}  // namespace

std::string conditions_json(const ConditionReport& report) {
  return conditions_object(report).dump(2) + '\n';
}

std::string summary_json(const Config& config, const SimRecord& record,
                         const ConditionReport& conditions, const TermAudit* audit) {
  ordered_json j;
  j["version"] = TGEM_VERSION;
  j["config_hash"] = config_hash(config);

  const EfficiencyMeasurement e = measure_efficiency(record);
  j["efficiency"] = number(e.efficiency);
  j["transmission"] = number(e.transmission);
  j["hold_leak"] = number(e.hold_leak);
  j["residual_stored"] = number(e.residual_stored);
  j["loss"] = number(e.loss);

  const auto bw = memory_bandwidth(config.medium, config.pulse);
  j["kdotL_tau"] = number(bw.ratio);
  if (bw.no_gradient) {
    j["d_eff"] = nullptr;
    j["eta_analytic"] = nullptr;
    j["bandwidth_clipping_gap"] = nullptr;
  } else {
    const auto p = nondimensionalize(config.medium, config.pulse);
    const double absorbed = 1.0 - std::exp(-p.d_eff);
    const double analytic = std::exp(-2.0 * p.gamma_tau) * absorbed * absorbed;
    j["gamma_tau"] = number(p.gamma_tau);
    j["d_eff"] = number(p.d_eff);
    j["eta_analytic"] = number(analytic);
    j["bandwidth_clipping_gap"] = number(e.efficiency - analytic);
  }
  j["max_coherence"] = number(record.max_coherence);
  j["conditions"] = conditions_object(conditions);
  j["grid"] = {{"nz", config.grid.nz},
               {"nt", config.grid.nt},
               {"dz", number(config.grid.dz(config.medium.length))},
               {"dt", number(record.dt)},
               {"snapshot_stride", config.grid.snapshot_stride}};
  j["retarded_frame"] = record.retarded_frame;
  j["warnings"] = record.warnings;
  if (audit) j["appendix_audit"] = audit_array(*audit);
  return j.dump(2) + '\n';
}

void write_files_atomically(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  namespace fs = std::filesystem;
  std::vector<fs::path> staged;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& p : staged) fs::remove(p, ec);
  };
  try {
    for (const auto& [target, content] : files) {
      if (target.has_parent_path()) fs::create_directories(target.parent_path());
      fs::path tmp = target;
      tmp += ".tmp." + std::to_string(::getpid());
      staged.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      out.close();
      if (!out) throw Error("cannot write " + tmp.string());
    }
  } catch (const fs::filesystem_error& e) {
    cleanup();
    throw Error(e.what());
  } catch (...) {
    cleanup();
    throw;
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    fs::rename(staged[i], files[i].first, ec);
    if (ec) {
      cleanup();
      throw Error("cannot rename " + staged[i].string() + ": " + ec.message());
    }
  }
}

}  // namespace tgem
