#pragma once

#include <cmath>

#include "tgem/config.hpp"

namespace fixture {

inline constexpr double kPi = 3.14159265358979323846;

/// Lithium-niobate design point, built from raw numbers rather than the
/// library's reference_config().
inline tgem::Config design_point() {
  tgem::Config c;
  const double gamma = 2.0 * kPi * 1e7;
  const double tau = 1.0 / (10.0 * gamma);
  c.medium.n_i = 2.26;
  c.medium.length = 0.01;
  c.medium.lambda0 = 795e-9;
  c.medium.gamma = gamma;
  c.medium.d_in = 50.0;
  c.medium.delta = 0.0;
  // kdot L tau = 2 with kdot = ndot * 2 pi / lambda0.
  c.medium.n_dot_write = 2.0 * c.medium.lambda0 / (2.0 * kPi * c.medium.length * tau);
  c.pulse.tau = tau;
  c.pulse.t0 = 3.0 * tau;
  c.center_in_band = true;
  c.schedule.t_write = 6.0 * tau;
  c.schedule.t_hold = 2.0 * tau;
  c.schedule.t_read = 8.0 * tau;
  c.grid.nz = 200;
  c.grid.nt = 20000;
  c.refresh();
  return c;
}

/// Same physics on a coarse grid for property tests.
inline tgem::Config small() {
  tgem::Config c = design_point();
  c.grid.nz = 50;
  c.grid.nt = 2000;
  return c;
}

/// Setting the design point's depth through d_eff with gamma = 0.
inline tgem::Config lossless(double d_eff) {
  tgem::Config c = small();
  c.medium.gamma = 0.0;
  c.medium.d_in = 0.0;
  c.medium.d_eff = d_eff;
  c.refresh();
  return c;
}

}  // namespace fixture
