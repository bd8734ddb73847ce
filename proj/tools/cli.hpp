#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace annealroot::cli {

/// Process exit statuses. Library error categories keep their numeric codes.
enum ExitCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kUsage = 2,
  kUnknownFunction = 3,
  kMalformedInput = 4,
  kIncompatibleCovering = 5,
  kSingularJacobian = 6,
  kDegenerateInput = 7,
  kIo = 8,
  kInternal = 9,
};

/// Fully resolved settings for one invocation (flags > config file > defaults).
struct CliConfig {
  std::string subcommand;
  std::optional<std::string> function_id;
  std::optional<double> beta;
  std::string schedule = "fixed";  ///< "fixed" or "anneal"
  int nx = 1000;
  int ny = 1000;
  /// Displacement threshold; defaults to 1e-14 for scalar and 1e-12 for system solves.
  std::optional<double> eps;
  int max_iter = 50;
  std::optional<std::string> out_path;
  std::optional<std::string> format;  ///< csv, json, ppm or md; per-subcommand default
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  int box = 20;
  /// entropy: lo, hi, step of an optional beta sweep.
  std::optional<std::array<double, 3>> beta_sweep;
  /// kuramoto: system file, or a random system of this many rotors.
  std::optional<std::string> input_path;
  std::optional<int> random_rotors;
  double kappa = 1.0;
  int restarts = 10;
};

/// Executes a resolved configuration. The payload goes to out_path (written
/// atomically) or to `out`; diagnostics go to `err` as a single line.
int run(const CliConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (flags, optional --config JSON file) and calls run().
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace annealroot::cli
