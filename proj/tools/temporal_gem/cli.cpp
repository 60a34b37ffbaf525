#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tgem/analysis.hpp"
#include "tgem/conditions.hpp"
#include "tgem/config.hpp"
#include "tgem/corrected_solver.hpp"
#include "tgem/error.hpp"
#include "tgem/feasibility.hpp"
#include "tgem/io.hpp"
#include "tgem/solver.hpp"

namespace tgem::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

namespace {

using FileList = std::vector<std::pair<fs::path, std::string>>;

Config load(const CommonOptions& opts) {
  if (opts.config.empty()) throw ConfigError("", "--config is required");
  Config c = load_config(opts.config);
  if (opts.snapshots) c.grid.snapshot_stride = *opts.snapshots;
  return c;
}

RunOptions run_options(const CommonOptions& opts) {
  RunOptions r;
  r.force = opts.force;
  return r;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Manifest goes last so it can list every other file written with it.
void finish(FileList files, const fs::path& dir, const std::string& command, const Config& config,
            Clock::time_point start, std::ostream& log) {
  ordered_json m;
  m["tool"] = "temporal_gem";
  m["version"] = TGEM_VERSION;
  m["command"] = command;
  m["config_hash"] = config_hash(config);
  m["config"] = to_toml(config);
  ordered_json outputs = ordered_json::array();
  for (const auto& f : files) outputs.push_back(f.first.string());
  outputs.push_back((dir / "manifest.json").string());
  m["outputs"] = outputs;
  m["wall_clock_seconds"] = seconds_since(start);
  files.emplace_back(dir / "manifest.json", m.dump(2) + '\n');
  write_files_atomically(files);
  log << "[" << command << "] wrote " << files.size() << " files to " << dir.string() << '\n';
}

void log_warnings(const std::vector<std::string>& warnings, const std::string& command,
                  std::ostream& log) {
  for (const auto& w : warnings) log << "[" << command << "] warning: " << w << '\n';
}

std::string snapshots_csv(const SimRecord& rec) {
  std::string out = "t,z,field_re,field_im,coherence_re,coherence_im\n";
  for (const auto& s : rec.snapshots) {
    const std::size_t nz = s.field.size();
    for (std::size_t j = 0; j < nz; ++j) {
      const double z = rec.length * static_cast<double>(j) / static_cast<double>(nz - 1);
      for (double v : {s.t, z, s.field[j].real(), s.field[j].imag(), s.coherence[j].real()}) {
        out += format_double(v);
        out += ',';
      }
      out += format_double(s.coherence[j].imag());
      out += '\n';
    }
  }
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  std::string s = text;
  s.erase(0, s.find_first_not_of(" \t"));
  s.erase(s.find_last_not_of(" \t") + 1);
  if (s.empty()) throw Error("empty " + what);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error("malformed " + what + " '" + text + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw Error("malformed " + what + " '" + text + "'");
  return v;
}

template <class F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const ConditionError& e) {
    err << "error: " << e.what() << '\n' << e.report();
    return kExitConditionFailed;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const NumericError& e) {
    err << "numerical error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace

fs::path resolve_out_dir(const std::optional<fs::path>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(kOutEnvVar); env && *env) return env;
  return kDefaultOutDir;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  if (csv.find_first_not_of(" \t") == std::string::npos) return out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, "value"));
  if (!csv.empty() && csv.back() == ',') throw Error("malformed value list '" + csv + "'");
  return out;
}

std::vector<double> parse_range(const std::string& spec) {
  const auto a = spec.find(':');
  const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
  if (a == std::string::npos || b == std::string::npos || spec.find(':', b + 1) != std::string::npos)
    throw Error("malformed range '" + spec + "' (expected LO:HI:N)");
  const double lo = parse_number(spec.substr(0, a), "range bound");
  const double hi = parse_number(spec.substr(a + 1, b - a - 1), "range bound");
  const double n_real = parse_number(spec.substr(b + 1), "range count");
  if (n_real < 1.0 || n_real != std::floor(n_real) || n_real > 1e7)
    throw Error("malformed range '" + spec + "': N must be a positive integer");
  const auto n = static_cast<std::size_t>(n_real);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  if (n > 1) out.back() = hi;
  return out;
}

int simulate(const CommonOptions& opts, std::ostream& log) {
  const auto start = Clock::now();
  const Config c = load(opts);
  const ConditionReport cond = check_conditions(c.medium, c.pulse, c.schedule);
  const SimRecord rec = run_protocol(c.medium, c.pulse, c.schedule, c.grid, run_options(opts));
  log_warnings(rec.warnings, "simulate", log);

  const EfficiencyMeasurement e = measure_efficiency(rec);
  log << "[simulate] efficiency " << format_double(e.efficiency) << ", transmission "
      << format_double(e.transmission) << ", conditions " << to_string(cond.overall) << '\n';

  const fs::path dir = resolve_out_dir(opts.out) / "simulate";
  FileList files{
      {dir / "timeseries.csv", record_csv(rec, c.grid.ledger_stride)},
      {dir / "summary.json", summary_json(c, rec, cond)},
      {dir / "conditions.txt", cond.to_text()},
      {dir / "config.toml", to_toml(c)},
  };
  if (!rec.snapshots.empty()) files.emplace_back(dir / "snapshots.csv", snapshots_csv(rec));
  finish(std::move(files), dir, "simulate", c, start, log);
  return kExitOk;
}

int sweep(const CommonOptions& opts, const SweepArgs& args, std::ostream& log) {
  const auto start = Clock::now();
  const SweepAxis axis = parse_axis(args.axis);
  if (args.values.has_value() == args.range.has_value())
    throw Error("give exactly one of --values or --range");
  const std::vector<double> values = args.values ? parse_values(*args.values) : parse_range(*args.range);
  const Config c = load(opts);

  SweepOptions so;
  so.numeric = args.numeric;
  so.jobs = opts.jobs;
  so.run = run_options(opts);
  const auto points = tgem::sweep(c, axis, values, so);

  ordered_json j;
  j["axis"] = std::string(to_string(axis));
  j["points"] = points.size();
  j["numeric"] = args.numeric;
  auto argmax = [&](auto get) -> ordered_json {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto v = get(points[i]);
      if (v && (!best || *v > *get(points[*best]))) best = i;
    }
    if (!best) return nullptr;
    return {{"axis_value", points[*best].axis_value}, {"eta", *get(points[*best])}};
  };
  j["argmax_analytic"] = argmax([](const EfficiencyPoint& p) { return std::optional<double>(p.eta_analytic); });
  j["argmax_numeric"] = argmax([](const EfficiencyPoint& p) { return p.eta_numeric; });
  if (c.medium.d_in > 0.0 && c.medium.n_dot_write != 0.0) {
    const auto dims = nondimensionalize(c.medium, c.pulse);
    const TauOptimum opt = optimize_tau(c.medium.d_in, dims.kdotL_tau);
    j["optimize_tau"] = {{"d_in", c.medium.d_in},
                         {"kdotL_tau", dims.kdotL_tau},
                         {"gamma_tau_star", opt.gamma_tau_star},
                         {"eta_star", opt.eta_star}};
  }

  log << "[sweep] " << points.size() << " points along " << to_string(axis)
      << (args.numeric ? " (numeric)" : " (analytic)") << '\n';
  const fs::path dir = resolve_out_dir(opts.out) / "sweep";
  finish({{dir / "sweep.csv", sweep_csv(points, axis)}, {dir / "sweep.json", j.dump(2) + '\n'}},
         dir, "sweep", c, start, log);
  return kExitOk;
}

int audit(const CommonOptions& opts, std::ostream& log) {
  const auto start = Clock::now();
  Config c = load(opts);
  if (c.grid.snapshot_stride == 0) c.grid.snapshot_stride = std::max<std::size_t>(1, c.grid.nt / 400);
  const ConditionReport cond = check_conditions(c.medium, c.pulse, c.schedule);
  const RunOptions ro = run_options(opts);

  GridSpec plain = c.grid;
  plain.snapshot_stride = 0;
  const SimRecord simple = run_protocol(c.medium, c.pulse, c.schedule, plain, ro);
  const SimRecord corrected = run_protocol_corrected(c.medium, c.pulse, c.schedule, c.grid, {}, ro);
  log_warnings(corrected.warnings, "audit", log);
  const TermAudit terms = audit_terms(corrected, c.medium, c.schedule, c.pulse);

  const double eta_simple = measure_efficiency(simple).efficiency;
  const double eta_corrected = measure_efficiency(corrected).efficiency;
  ordered_json j = ordered_json::parse(summary_json(c, simple, cond, &terms));
  j["corrected"] = {{"efficiency", eta_corrected}, {"efficiency_gap", eta_corrected - eta_simple}};
  j["max_audit_ratio"] = terms.max_ratio();

  for (const auto& t : terms.terms) {
    log << "[audit] " << t.name << ": ratio " << format_double(t.ratio) << ", predicted "
        << t.parameter << " = " << format_double(t.predicted) << " -> "
        << to_string(grade_ratio(t.ratio)) << '\n';
  }
  log << "[audit] corrected - simplified efficiency " << format_double(eta_corrected - eta_simple) << '\n';

  const fs::path dir = resolve_out_dir(opts.out) / "audit";
  finish({{dir / "audit.csv", audit_csv(terms)}, {dir / "summary.json", j.dump(2) + '\n'}}, dir,
         "audit", c, start, log);
  return kExitOk;
}

int design(const CommonOptions& opts, std::ostream& log) {
  const auto start = Clock::now();
  const Config c = load(opts);
  const CrystalSpec crystal = c.crystal.value_or(bundled_crystal());
  const FeasibilityReport rep = design_report(c.design, crystal);
  const CrystalReference ref = bundled_reference();

  ordered_json j;
  j["grade"] = std::string(to_string(rep.grade));
  j["crystal"] = crystal.name;
  j["axis"] = c.design.axis;
  j["ramp_window"] = c.design.ramp_window;
  j["delta_n"] = rep.delta_n;
  j["drive_field"] = rep.field ? ordered_json(*rep.field) : ordered_json(nullptr);
  j["voltage"] = rep.volts ? ordered_json(*rep.volts) : ordered_json(nullptr);
  j["field_band"] = {rep.field_band.first, rep.field_band.second};
  ordered_json entries = ordered_json::array();
  for (const auto& e : rep.entries) {
    entries.push_back({{"name", e.name},
                       {"value", e.value ? ordered_json(*e.value) : ordered_json(nullptr)},
                       {"unit", e.unit},
                       {"ok", e.ok},
                       {"message", e.message}});
  }
  j["entries"] = entries;

  // Literature figures next to what the first-order inversion gives for them.
  ordered_json side;
  side["quoted_delta_n"] = ref.delta_n;
  side["quoted_field_band"] = {ref.field_band.first, ref.field_band.second};
  side["quoted_voltage_band"] = {ref.voltage_band.first, ref.voltage_band.second};
  std::string text = rep.to_text();
  try {
    const auto band = drive_field_band(ref.delta_n, crystal);
    side["computed_field_band"] = {band.first, band.second};
    side["computed_voltage_band"] = {voltage(band.first, crystal), voltage(band.second, crystal)};
    std::ostringstream os;
    os.precision(4);
    os << "  quoted: dn " << ref.delta_n << " under " << ref.field_band.first << " .. "
       << ref.field_band.second << " V/m; first-order inversion gives " << band.first << " .. "
       << band.second << " V/m\n";
    text += os.str();
  } catch (const Error& e) {
    side["computed_field_band"] = nullptr;
    side["error"] = e.what();
  }
  j["reference_comparison"] = side;
  j["advisory"] = rep.advisory;

  log << text;
  const fs::path dir = resolve_out_dir(opts.out) / "design";
  finish({{dir / "design.txt", text}, {dir / "design.json", j.dump(2) + '\n'}}, dir, "design", c,
         start, log);
  return kExitOk;
}

int compare_gem(const CommonOptions& opts, std::ostream& log) {
  const auto start = Clock::now();
  const Config c = load(opts);
  const RunOptions ro = run_options(opts);
  const SimRecord ramp = run_protocol(c.medium, c.pulse, c.schedule, c.grid, ro);
  const SimRecord gem = run_gem(c.medium.k_dot_write(), c.medium, c.pulse, c.schedule, c.grid, ro);

  double max_abs = 0.0;
  double scale = 0.0;
  bool bitwise = ramp.times == gem.times && ramp.snapshots.size() == gem.snapshots.size();
  auto compare = [&](cplx a, cplx b) {
    max_abs = std::max(max_abs, std::abs(a - b));
    scale = std::max(scale, std::abs(a));
    if (a != b) bitwise = false;
  };
  for (std::size_t i = 0; i < ramp.output_series.size(); ++i) {
    compare(ramp.output_series[i], gem.output_series[i]);
    compare(ramp.input_series[i], gem.input_series[i]);
    const auto& x = ramp.energy_ledger[i];
    const auto& y = gem.energy_ledger[i];
    if (x.flux_out != y.flux_out || x.stored != y.stored || x.decayed != y.decayed) bitwise = false;
  }
  for (std::size_t k = 0; k < std::min(ramp.snapshots.size(), gem.snapshots.size()); ++k) {
    for (std::size_t j = 0; j < ramp.snapshots[k].field.size(); ++j) {
      compare(ramp.snapshots[k].field[j], gem.snapshots[k].field[j]);
      compare(ramp.snapshots[k].coherence[j], gem.snapshots[k].coherence[j]);
    }
  }
  const double rel = scale > 0.0 ? max_abs / scale : max_abs;
  const bool ok = rel <= 1e-15;

  ordered_json j;
  j["bit_identical"] = bitwise;
  j["max_abs_difference"] = max_abs;
  j["max_relative_difference"] = rel;
  j["efficiency_index_ramp"] = measure_efficiency(ramp).efficiency;
  j["efficiency_gem"] = measure_efficiency(gem).efficiency;
  j["eta"] = c.medium.k_dot_write();
  j["passed"] = ok;

  log << "[compare-gem] max |difference| " << format_double(max_abs)
      << (bitwise ? " (bit-identical)" : "") << '\n';
  const fs::path dir = resolve_out_dir(opts.out) / "compare-gem";
  finish({{dir / "compare.json", j.dump(2) + '\n'}}, dir, "compare-gem", c, start, log);
  if (!ok) {
    log << "[compare-gem] parameterizations disagree\n";
    return kExitError;
  }
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporal refractive-index-ramp quantum memory: simulation and design", "temporal_gem"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(TGEM_VERSION));

  CommonOptions opts;
  SweepArgs sweep_args;
  std::string out_dir;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "TOML configuration file")->required();
    sub->add_option("--out", out_dir, "Output directory (default $TEMPORAL_GEM_OUT or ./tgem_out)");
    sub->add_flag("--force", opts.force, "Run even if a validity condition or resolution guard fails");
    sub->add_option("--jobs", opts.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--snapshots", opts.snapshots, "Interior snapshot stride in steps (0 disables)");
  };

  auto* sim = app.add_subcommand("simulate", "Run write/hold/read and record fields and energies");
  add_common(sim);
  auto* sw = app.add_subcommand("sweep", "Efficiency along one dimensionless axis");
  add_common(sw);
  sw->add_option("--axis", sweep_args.axis, "d_in, gamma_tau, kdotL_tau or tau")->required();
  sw->add_option("--values", sweep_args.values, "Comma-separated values");
  sw->add_option("--range", sweep_args.range, "LO:HI:N");
  auto* analytic_flag = sw->add_flag("--analytic", "Closed-form efficiencies only (default)");
  auto* numeric_flag = sw->add_flag("--numeric", sweep_args.numeric, "Back every point with a solver run");
  analytic_flag->excludes(numeric_flag);
  auto* aud = app.add_subcommand("audit", "Finite-difference audit of the dropped propagation terms");
  add_common(aud);
  auto* des = app.add_subcommand("design", "Index swing, drive field and voltage for a crystal");
  add_common(des);
  auto* cmp = app.add_subcommand("compare-gem", "Index ramp vs static-gradient parameterization");
  add_common(cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  opts.config = config_path;
  if (!out_dir.empty()) opts.out = out_dir;

  return guarded(err, [&] {
    if (sim->parsed()) return simulate(opts, out);
    if (sw->parsed()) return sweep(opts, sweep_args, out);
    if (aud->parsed()) return audit(opts, out);
    if (des->parsed()) return design(opts, out);
    return compare_gem(opts, out);
  });
}

}  // namespace tgem::cli
