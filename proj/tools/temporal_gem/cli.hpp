#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tgem::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConditionFailed = 2;

/// Default output directory when neither --out nor the environment sets one.
inline constexpr const char* kDefaultOutDir = "tgem_out";
inline constexpr const char* kOutEnvVar = "TEMPORAL_GEM_OUT";

struct CommonOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  bool force = false;
  std::size_t jobs = 1;
  std::optional<std::size_t> snapshots;
};

struct SweepArgs {
  std::string axis;
  std::optional<std::string> values;
  std::optional<std::string> range;
  bool numeric = false;
};

/// --out, else $TEMPORAL_GEM_OUT, else ./tgem_out.
std::filesystem::path resolve_out_dir(const std::optional<std::filesystem::path>& flag);

/// "10,25,50" -> {10, 25, 50}. Throws tgem::Error on malformed input.
std::vector<double> parse_values(const std::string& csv);
/// "LO:HI:N" -> N evenly spaced points including both ends.
std::vector<double> parse_range(const std::string& spec);

int simulate(const CommonOptions& opts, std::ostream& log);
int sweep(const CommonOptions& opts, const SweepArgs& args, std::ostream& log);
int audit(const CommonOptions& opts, std::ostream& log);
int design(const CommonOptions& opts, std::ostream& log);
int compare_gem(const CommonOptions& opts, std::ostream& log);

/// Full command line: parses argv, dispatches, maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tgem::cli
