#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "tgem/config.hpp"
#include "tgem/error.hpp"

using namespace tgem;

namespace {

const char* kMinimal = R"(
[medium]
d_in = 50.0
gamma_tau = 0.1
kdotL_tau = 2.0

[pulse]
tau = 1e-9
center_in_band = true
)";

std::string key_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

}  // namespace

TEST(ParseConfig, ScaledKeysResolveAgainstTau) {
  const Config c = parse_config(kMinimal);
  EXPECT_DOUBLE_EQ(c.medium.gamma * c.pulse.tau, 0.1);
  EXPECT_NEAR(std::abs(c.medium.k_dot_write()) * c.medium.length * c.pulse.tau, 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(c.pulse.t0, 3e-9);
  EXPECT_DOUBLE_EQ(c.schedule.t_write, 6e-9);
  EXPECT_DOUBLE_EQ(c.schedule.t_hold, 2e-9);
  EXPECT_DOUBLE_EQ(c.schedule.t_read, 8e-9);
  EXPECT_NEAR(c.pulse.carrier_offset * c.pulse.tau, 1.0, 1e-12);
}

TEST(ParseConfig, UnknownKeysAreNamed) {
  EXPECT_EQ(key_of(std::string(kMinimal) + "gama = 3\n"), "pulse.gama");
  EXPECT_EQ(key_of("[medium]\nlenght = 0.01\n"), "medium.lenght");
  EXPECT_EQ(key_of("[grids]\nnz = 3\n"), "grids");
  EXPECT_EQ(key_of("top = 1\n"), "top");
}

TEST(ParseConfig, ConflictingKeysAreRejected) {
  EXPECT_EQ(key_of("[medium]\ngamma = 1e8\ngamma_tau = 0.1\n"), "medium.gamma_tau");
  EXPECT_EQ(key_of("[medium]\nn_dot_write = 1e3\nkdotL_tau = 2\n"), "medium.kdotL_tau");
  EXPECT_EQ(key_of("[pulse]\nt0 = 1e-9\nt0_tau = 3\n"), "pulse.t0_tau");
  EXPECT_EQ(key_of("[medium]\nd_in = 1\nd_eff = 2\nkdotL_tau = 2\n"), "medium.d_eff");
}

TEST(ParseConfig, TypeAndRangeErrorsNameTheKey) {
  EXPECT_EQ(key_of("[grid]\nnz = \"many\"\n"), "grid.nz");
  EXPECT_EQ(key_of("[grid]\nnz = -4\n"), "grid.nz");
  EXPECT_EQ(key_of("[medium]\ngamma = -1.0\n"), "medium.gamma");
  EXPECT_EQ(key_of("[pulse]\ntau = 0.0\n"), "pulse.tau");
  EXPECT_EQ(key_of("[pulse]\nshape = \"lorentzian\"\n"), "pulse.shape");
  EXPECT_EQ(key_of("[schedule]\ngamma_hold_off = 1\n"), "schedule.gamma_hold_off");
}

TEST(ParseConfig, SyntaxErrorsCarryPosition) {
  try {
    parse_config("[medium\nn_i = 2\n", "broken.toml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("broken.toml:1:"), std::string::npos) << e.what();
  }
}

TEST(ParseConfig, IntegersAcceptedForFloats) {
  const Config c = parse_config("[medium]\nn_i = 2\nlength = 1\n");
  EXPECT_EQ(c.medium.n_i, 2.0);
  EXPECT_EQ(c.medium.length, 1.0);
}

TEST(ParseConfig, SampledPulse) {
  const Config c = parse_config(
      "[pulse]\nshape = \"sampled\"\nsamples_re = [0.0, 1.0, 0.0]\nsamples_im = [0.0, 0.5, 0.0]\n"
      "sample_dt_tau = 1.0\n");
  ASSERT_EQ(c.pulse.samples.size(), 3u);
  EXPECT_EQ(c.pulse.samples[1], cplx(1.0, 0.5));
  EXPECT_EQ(c.pulse.sample_dt, c.pulse.tau);
  EXPECT_EQ(key_of("[pulse]\nsamples_im = [1.0]\n"), "pulse.samples_im");
  EXPECT_EQ(key_of("[pulse]\nshape = \"sampled\"\nsamples_re = [1.0, 2.0]\n"), "pulse.sample_dt");
}

TEST(ToToml, RoundTripsExactly) {
  Config c = parse_config(kMinimal);
  c.medium.n_dot_read = -0.5 * c.medium.n_dot_write;
  c.carrier_offset_extra = 1.0 / 3.0;
  c.grid.snapshot_stride = 7;
  c.crystal = bundled_crystal();
  c.design.delta_n_target = 1e-4;
  c.refresh();
  const std::string text = to_toml(c);
  const Config back = parse_config(text);
  EXPECT_EQ(to_toml(back), text);
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_EQ(back.pulse.carrier_offset, c.pulse.carrier_offset);
  EXPECT_EQ(*back.medium.n_dot_read, *c.medium.n_dot_read);
}

TEST(ToToml, LosslessConfigRoundTrips) {
  const Config c = fixture::lossless(2.5);
  const Config back = parse_config(to_toml(c));
  ASSERT_TRUE(back.medium.d_eff);
  EXPECT_EQ(*back.medium.d_eff, 2.5);
  EXPECT_EQ(config_hash(back), config_hash(c));
}

TEST(ConfigHash, SensitiveToEveryField) {
  const Config c = reference_config();
  const std::string h = config_hash(c);
  EXPECT_EQ(h.size(), 64u);
  EXPECT_EQ(config_hash(reference_config()), h);
  Config d = c;
  d.grid.nt += 1;
  EXPECT_NE(config_hash(d), h);
  d = c;
  d.medium.d_in = std::nextafter(d.medium.d_in, 100.0);
  EXPECT_NE(config_hash(d), h);
}

TEST(ReferenceConfig, MatchesShippedFile) {
  const Config file = load_config(std::filesystem::path(TGEM_SOURCE_DIR) / "configs/reference.toml");
  const Config ref = reference_config();
  EXPECT_EQ(to_toml(file), to_toml(ref));
  EXPECT_EQ(config_hash(file), config_hash(ref));
}

TEST(ReferenceConfig, MatchesIndependentFixture) {
  const Config ref = reference_config();
  const Config fix = fixture::design_point();
  EXPECT_NEAR(ref.medium.n_dot_write, fix.medium.n_dot_write, 1e-15 * fix.medium.n_dot_write);
  EXPECT_EQ(ref.pulse.tau, fix.pulse.tau);
  EXPECT_EQ(ref.medium.gamma, fix.medium.gamma);
  EXPECT_NEAR(ref.pulse.carrier_offset, fix.pulse.carrier_offset, 1e-6);
}

TEST(LoadConfig, MissingFileIsAConfigError) {
  EXPECT_THROW(load_config("/nonexistent/tgem.toml"), ConfigError);
}

TEST(Crystal, BundledValues) {
  const CrystalSpec c = bundled_crystal();
  EXPECT_EQ(c.n_o, 2.26);
  EXPECT_EQ(c.r_coeffs.at("2"), -3e-12);
  EXPECT_EQ(c.r_coeffs.at("3"), 10e-12);
  EXPECT_EQ(c.thickness, 10e-6);
  EXPECT_EQ(c.delta_n_max, 1e-3);
  EXPECT_THROW(bundled_crystal("quartz"), Error);

  const CrystalReference r = bundled_reference();
  EXPECT_EQ(r.delta_n, 6e-5);
  EXPECT_EQ(r.field_band.first, 0.85e6);
  EXPECT_EQ(r.voltage_band.second, 25.0);
}

TEST(Crystal, SectionOverridesBundledData) {
  const Config c = parse_config(
      "[crystal]\nbundled = \"lithium_niobate\"\nthickness = 2e-5\n[crystal.r_coeffs]\n\"3\" = 8e-12\n");
  ASSERT_TRUE(c.crystal);
  EXPECT_EQ(c.crystal->thickness, 2e-5);
  EXPECT_EQ(c.crystal->r_coeffs.at("3"), 8e-12);
  EXPECT_EQ(c.crystal->r_coeffs.at("2"), -3e-12);
  EXPECT_EQ(key_of("[crystal]\nbundled = \"lithium_niobate\"\ncolour = \"clear\"\n"), "crystal.colour");
  EXPECT_EQ(key_of("[crystal]\nn_o = 0.5\nthickness = 1e-5\ndelta_n_max = 1e-3\n"
                   "[crystal.r_coeffs]\n\"2\" = 1e-12\n"),
            "crystal.n_o");
}

TEST(Design, InputsFollowTheMedium) {
  const Config c = parse_config(std::string(kMinimal) + "[design]\nramp_window = 3\naxis = \"3\"\n");
  EXPECT_EQ(c.design.ramp_window, 3.0);
  EXPECT_EQ(c.design.axis, "3");
  EXPECT_NEAR(c.design.kdotL_tau, 2.0, 1e-12);
  EXPECT_EQ(c.design.length, c.medium.length);
}
