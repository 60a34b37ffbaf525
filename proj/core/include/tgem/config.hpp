#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "tgem/feasibility.hpp"
#include "tgem/medium.hpp"

namespace tgem {

/// Resolved run configuration, SI throughout.
///
/// TOML sections: [medium], [pulse], [schedule], [grid], and for the design
/// command [crystal] and [design]. Several quantities accept a dimensionless
/// alternative key (gamma_tau, kdotL_tau, delta_tau, t0_tau, t_write_tau, ...)
/// resolved against pulse.tau at load time. Unknown keys are errors.
struct Config {
  MediumSpec medium;
  PulseSpec pulse;
  ScheduleSpec schedule;
  GridSpec grid;

  /// Place the pulse carrier at the centre of the write-phase memory band,
  /// delta + kdot L / 2, plus `carrier_offset_extra`.
  bool center_in_band = false;
  double carrier_offset_extra = 0.0;

  std::optional<CrystalSpec> crystal;
  DesignRequirements design;

  /// Recomputes derived fields (carrier offset, design inputs) after edits.
  void refresh();

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

Config parse_config(std::string_view toml_text, std::string_view origin = "<config>");
Config load_config(const std::filesystem::path& path);

/// Canonical resolved snapshot; parse_config(to_toml(c)) reproduces c.
std::string to_toml(const Config& config);

/// Hex SHA-256 of the canonical snapshot.
std::string config_hash(const Config& config);

/// Parameter set of the lithium-niobate memory design: 795 nm, L = 1 cm,
/// gamma = 2 pi x 10 MHz, tau = 1/(10 gamma), kdot L tau = 2, d_in = 50.
Config reference_config();

}  // namespace tgem
