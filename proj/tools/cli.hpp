#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bellkit::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitInfeasible = 3;

inline constexpr const char* kSeedEnvironmentVariable = "BELLKIT_SEED";

struct AngleSpec {
  double theta_deg = 0;
  double phi_deg = 0;
  friend bool operator==(const AngleSpec&, const AngleSpec&) = default;
};

/// Simulation config. File grammar: one `key = value` per line, `#` starts a
/// comment. Keys: mode, angle_a..angle_d (degrees), azimuth_a..azimuth_d
/// (optional, default 0), trials, seed, threads (optional), log, report,
/// series (optional). Unknown or repeated keys are errors.
struct RunConfig {
  std::string mode;
  std::array<AngleSpec, 4> angles;  // a, b, c, d
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string log_path;
  std::string report_path;
  std::string series_path;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws std::runtime_error naming the offending line.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);
std::string format_config(const RunConfig& config);

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellkit::cli
