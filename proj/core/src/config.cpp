#include "tgem/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/evp.h>
#include <toml.hpp>

#include "bundled_data.hpp"
#include "tgem/error.hpp"
#include "tgem/io.hpp"

namespace tgem {

namespace {

// One TOML table plus the set of keys read from it; anything left over is a typo.
class Section {
 public:
  Section(const toml::table* table, std::string name) : table_(table), name_(std::move(name)) {}

  bool present() const { return table_ != nullptr; }
  bool has(const std::string& key) const { return table_ && table_->contains(key); }
  std::string path(const std::string& key) const { return name_.empty() ? key : name_ + "." + key; }

  std::optional<double> number(const std::string& key) {
    const toml::node* n = node(key);
    if (!n) return std::nullopt;
    if (auto v = n->value<double>()) return *v;
    throw ConfigError(path(key), "expected a number");
  }

  std::optional<std::int64_t> integer(const std::string& key) {
    const toml::node* n = node(key);
    if (!n) return std::nullopt;
    if (auto v = n->value_exact<std::int64_t>()) return *v;
    throw ConfigError(path(key), "expected an integer");
  }

  std::optional<std::size_t> count(const std::string& key) {
    auto v = integer(key);
    if (!v) return std::nullopt;
    if (*v < 0) throw ConfigError(path(key), "must be >= 0");
    return static_cast<std::size_t>(*v);
  }

  std::optional<bool> boolean(const std::string& key) {
    const toml::node* n = node(key);
    if (!n) return std::nullopt;
    if (auto v = n->value_exact<bool>()) return *v;
    throw ConfigError(path(key), "expected true or false");
  }

  std::optional<std::string> string(const std::string& key) {
    const toml::node* n = node(key);
    if (!n) return std::nullopt;
    if (auto v = n->value_exact<std::string>()) return *v;
    throw ConfigError(path(key), "expected a string");
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    const toml::node* n = node(key);
    if (!n) return std::nullopt;
    const toml::array* arr = n->as_array();
    if (!arr) throw ConfigError(path(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& el : *arr) {
      auto v = el.value<double>();
      if (!v) throw ConfigError(path(key), "expected an array of numbers");
      out.push_back(*v);
    }
    return out;
  }

  Section sub(const std::string& key) {
    const toml::node* n = node(key);
    if (n && !n->is_table()) throw ConfigError(path(key), "expected a table");
    return Section(n ? n->as_table() : nullptr, path(key));
  }

  const toml::table* table() const { return table_; }

  /// Value given in SI (`si`) or in units of tau (`scaled`), never both.
  std::optional<double> either(const std::string& si, const std::string& scaled, double unit) {
    auto a = number(si);
    auto b = number(scaled);
    if (a && b) throw ConfigError(path(scaled), "conflicts with " + path(si));
    if (b) return *b * unit;
    return a;
  }

  void finish() const {
    if (!table_) return;
    for (const auto& [k, v] : *table_) {
      const std::string key(k.str());
      if (!used_.count(key)) throw ConfigError(path(key), "unknown key");
    }
  }

 private:
  const toml::node* node(const std::string& key) {
    used_.insert(key);
    return table_ ? table_->get(key) : nullptr;
  }

  const toml::table* table_;
  std::string name_;
  std::set<std::string> used_;
};

toml::table parse_text(std::string_view text, std::string_view origin) {
  try {
    return toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << origin << ':' << e.source().begin.line << ':' << e.source().begin.column << ": "
       << e.description();
    throw ConfigError("", os.str());
  }
}

CrystalSpec read_crystal(Section s, const CrystalSpec& base) {
  CrystalSpec c = base;
  if (auto v = s.string("name")) c.name = *v;
  if (auto v = s.number("n_o")) c.n_o = *v;
  if (auto v = s.number("thickness")) c.thickness = *v;
  if (auto v = s.number("delta_n_max")) c.delta_n_max = *v;
  Section r = s.sub("r_coeffs");
  if (r.present()) {
    for (const auto& [k, v] : *r.table()) {
      const std::string axis(k.str());
      if (auto val = r.number(axis)) c.r_coeffs[axis] = *val;
    }
  }
  r.finish();
  s.finish();
  return c;
}

std::pair<double, double> read_pair(Section& s, const std::string& key) {
  auto v = s.numbers(key);
  if (!v || v->size() != 2) throw ConfigError(s.path(key), "expected two numbers");
  return {(*v)[0], (*v)[1]};
}

const char* bundled_text(std::string_view name) {
  if (name == "lithium_niobate") return bundled::kLithiumNiobate;
  throw Error("no bundled crystal named " + std::string(name));
}

PulseShape parse_shape(const std::string& s, const std::string& key) {
  if (s == "gaussian") return PulseShape::gaussian;
  if (s == "square") return PulseShape::square;
  if (s == "sampled") return PulseShape::sampled;
  throw ConfigError(key, "unknown shape '" + s + "' (expected gaussian, square or sampled)");
}

const char* shape_name(PulseShape s) {
  switch (s) {
    case PulseShape::gaussian:
      return "gaussian";
    case PulseShape::square:
      return "square";
    case PulseShape::sampled:
      return "sampled";
  }
  return "?";
}

}  // namespace

CrystalSpec bundled_crystal(std::string_view name) {
  const toml::table doc = parse_text(bundled_text(name), "bundled crystal data");
  Section root(&doc, "bundled");
  CrystalSpec c = read_crystal(root.sub("crystal"), CrystalSpec{});
  c.validate();
  return c;
}

CrystalReference bundled_reference(std::string_view name) {
  const toml::table doc = parse_text(bundled_text(name), "bundled crystal data");
  Section root(&doc, "bundled");
  Section ref = root.sub("reference");
  CrystalReference r;
  r.delta_n = ref.number("delta_n").value_or(0.0);
  r.field_band = read_pair(ref, "field_band");
  r.voltage_band = read_pair(ref, "voltage_band");
  ref.finish();
  return r;
}

void Config::refresh() {
  if (center_in_band)
    pulse.carrier_offset = medium.delta + 0.5 * medium.k_dot_write() * medium.length + carrier_offset_extra;
  design.lambda0 = medium.lambda0;
  design.length = medium.length;
  const double kdotL_tau = std::abs(medium.k_dot_write()) * medium.length * pulse.tau;
  if (kdotL_tau > 0.0) design.kdotL_tau = kdotL_tau;
}

void Config::validate() const {
  medium.validate();
  pulse.validate();
  schedule.validate();
  grid.validate();
  if (crystal) crystal->validate();
  if (!(design.ramp_window >= 0.0)) throw ConfigError("design.ramp_window", "must be >= 0");
}

Config parse_config(std::string_view toml_text, std::string_view origin) {
  const toml::table doc = parse_text(toml_text, origin);
  Section root(&doc, "");
  Config c;

  Section pulse = root.sub("pulse");
  if (auto v = pulse.string("shape")) c.pulse.shape = parse_shape(*v, "pulse.shape");
  if (auto v = pulse.number("tau")) c.pulse.tau = *v;
  const double tau = c.pulse.tau;
  if (!(std::isfinite(tau) && tau > 0.0)) throw ConfigError("pulse.tau", "must be > 0");
  c.pulse.t0 = pulse.either("t0", "t0_tau", tau).value_or(3.0 * tau);
  if (auto v = pulse.number("amplitude")) c.pulse.amplitude = *v;
  if (auto v = pulse.boolean("center_in_band")) c.center_in_band = *v;
  if (auto v = pulse.either("carrier_offset", "carrier_offset_tau", 1.0 / tau)) {
    if (c.center_in_band) c.carrier_offset_extra = *v;
    else c.pulse.carrier_offset = *v;
  }
  {
    auto re = pulse.numbers("samples_re");
    auto im = pulse.numbers("samples_im");
    if (im && !re) throw ConfigError("pulse.samples_im", "needs pulse.samples_re");
    if (re) {
      if (im && im->size() != re->size())
        throw ConfigError("pulse.samples_im", "must have the same length as pulse.samples_re");
      c.pulse.samples.clear();
      for (std::size_t i = 0; i < re->size(); ++i)
        c.pulse.samples.emplace_back((*re)[i], im ? (*im)[i] : 0.0);
    }
    if (auto v = pulse.either("sample_dt", "sample_dt_tau", tau)) c.pulse.sample_dt = *v;
  }
  pulse.finish();

  Section medium = root.sub("medium");
  auto& m = c.medium;
  if (auto v = medium.number("n_i")) m.n_i = *v;
  if (auto v = medium.number("length")) m.length = *v;
  if (auto v = medium.number("lambda0")) m.lambda0 = *v;
  if (auto v = medium.either("gamma", "gamma_tau", 1.0 / tau)) m.gamma = *v;
  if (auto v = medium.either("delta", "delta_tau", 1.0 / tau)) m.delta = *v;
  if (auto v = medium.number("d_in")) m.d_in = *v;
  if (auto v = medium.number("d_eff")) m.d_eff = *v;
  {
    auto si = medium.number("n_dot_write");
    auto scaled = medium.number("kdotL_tau");
    if (si && scaled) throw ConfigError("medium.kdotL_tau", "conflicts with medium.n_dot_write");
    if (si) m.n_dot_write = *si;
    if (scaled) {
      if (!(m.length > 0.0 && m.lambda0 > 0.0))
        throw ConfigError("medium.kdotL_tau", "needs positive length and lambda0");
      m.n_dot_write = n_dot_for_bandwidth(*scaled, m.lambda0, m.length, tau);
    }
  }
  if (auto v = medium.number("n_dot_read")) m.n_dot_read = *v;
  medium.finish();

  Section schedule = root.sub("schedule");
  auto& s = c.schedule;
  s.t_write = schedule.either("t_write", "t_write_tau", tau).value_or(6.0 * tau);
  s.t_hold = schedule.either("t_hold", "t_hold_tau", tau).value_or(2.0 * tau);
  s.t_read = schedule.either("t_read", "t_read_tau", tau).value_or(8.0 * tau);
  if (auto v = schedule.boolean("gamma_hold_off")) s.gamma_hold_off = *v;
  schedule.finish();

  Section grid = root.sub("grid");
  if (auto v = grid.count("nz")) c.grid.nz = *v;
  if (auto v = grid.count("nt")) c.grid.nt = *v;
  if (auto v = grid.count("snapshot_stride")) c.grid.snapshot_stride = *v;
  if (auto v = grid.count("ledger_stride")) c.grid.ledger_stride = *v;
  grid.finish();

  Section crystal = root.sub("crystal");
  if (crystal.present()) {
    CrystalSpec base;
    if (auto b = crystal.string("bundled")) base = bundled_crystal(*b);
    c.crystal = read_crystal(crystal, base);
  }

  Section design = root.sub("design");
  if (auto v = design.number("ramp_window")) c.design.ramp_window = *v;
  if (auto v = design.string("axis")) c.design.axis = *v;
  if (auto v = design.number("delta_n_target")) c.design.delta_n_target = *v;
  design.finish();

  root.finish();
  c.refresh();
  c.validate();
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string to_toml(const Config& c) {
  std::ostringstream os;
  auto num = [&](const char* key, double v) { os << key << " = " << format_double(v) << '\n'; };
  auto quoted = [](const std::string& s) {
    std::ostringstream q;
    q << std::quoted(s);
    return q.str();
  };

  const auto& m = c.medium;
  os << "[medium]\n";
  num("n_i", m.n_i);
  num("length", m.length);
  num("lambda0", m.lambda0);
  num("gamma", m.gamma);
  num("delta", m.delta);
  num("d_in", m.d_in);
  if (m.d_eff) num("d_eff", *m.d_eff);
  num("n_dot_write", m.n_dot_write);
  if (m.n_dot_read) num("n_dot_read", *m.n_dot_read);

  const auto& p = c.pulse;
  os << "\n[pulse]\n";
  os << "shape = \"" << shape_name(p.shape) << "\"\n";
  num("tau", p.tau);
  num("t0", p.t0);
  num("amplitude", p.amplitude);
  os << "center_in_band = " << (c.center_in_band ? "true" : "false") << '\n';
  num("carrier_offset", c.center_in_band ? c.carrier_offset_extra : p.carrier_offset);
  if (!p.samples.empty()) {
    os << "samples_re = [";
    for (std::size_t i = 0; i < p.samples.size(); ++i)
      os << (i ? ", " : "") << format_double(p.samples[i].real());
    os << "]\nsamples_im = [";
    for (std::size_t i = 0; i < p.samples.size(); ++i)
      os << (i ? ", " : "") << format_double(p.samples[i].imag());
    os << "]\n";
  }
  if (p.sample_dt != 0.0) num("sample_dt", p.sample_dt);

  os << "\n[schedule]\n";
  num("t_write", c.schedule.t_write);
  num("t_hold", c.schedule.t_hold);
  num("t_read", c.schedule.t_read);
  os << "gamma_hold_off = " << (c.schedule.gamma_hold_off ? "true" : "false") << '\n';

  os << "\n[grid]\n";
  os << "nz = " << c.grid.nz << "\nnt = " << c.grid.nt << "\nsnapshot_stride = "
     << c.grid.snapshot_stride << "\nledger_stride = " << c.grid.ledger_stride << '\n';

  if (c.crystal) {
    os << "\n[crystal]\n";
    os << "name = " << quoted(c.crystal->name) << '\n';
    num("n_o", c.crystal->n_o);
    num("thickness", c.crystal->thickness);
    num("delta_n_max", c.crystal->delta_n_max);
    os << "\n[crystal.r_coeffs]\n";
    for (const auto& [axis, r] : c.crystal->r_coeffs)
      os << quoted(axis) << " = " << format_double(r) << '\n';
  }

  os << "\n[design]\n";
  num("ramp_window", c.design.ramp_window);
  os << "axis = " << quoted(c.design.axis) << '\n';
  if (c.design.delta_n_target) num("delta_n_target", *c.design.delta_n_target);
  return os.str();
}

std::string config_hash(const Config& config) {
  const std::string text = to_toml(config);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 failed");
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

Config reference_config() {
  Config c;
  const double gamma = kTwoPi * 1e7;
  const double tau = 1.0 / (10.0 * gamma);
  c.medium.n_i = 2.26;
  c.medium.length = 0.01;
  c.medium.lambda0 = 795e-9;
  c.medium.gamma = gamma;
  c.medium.d_in = 50.0;
  c.medium.delta = 0.0;
  c.medium.n_dot_write = n_dot_for_bandwidth(2.0, c.medium.lambda0, c.medium.length, tau);
  c.pulse.tau = tau;
  c.pulse.t0 = 3.0 * tau;
  c.center_in_band = true;
  c.schedule.t_write = 6.0 * tau;
  c.schedule.t_hold = 2.0 * tau;
  c.schedule.t_read = 8.0 * tau;
  c.grid.nz = 200;
  c.grid.nt = 20000;
  c.crystal = bundled_crystal();
  c.refresh();
  return c;
}

}  // namespace tgem
