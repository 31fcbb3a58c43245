#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace biasperm {

inline constexpr const char* kSpecRevision = "1";

enum ExitCode : int { exit_ok = 0, exit_invariant = 1, exit_usage = 2, exit_cap = 3, exit_soundness = 4 };

/// Everything a run depends on. Output is a function of this and the seed.
struct ExperimentConfig {
  std::string subcommand;
  std::string model = "constant:0.7";
  std::string chain = "nn";
  std::string kind = "inv";  // paths: inv or tree
  std::optional<int> n;
  std::optional<std::pair<int, int>> n_range;
  double eps = 0.25;
  std::uint64_t steps = 10000;
  std::uint64_t stride = 0;  // 0 picks steps/1000
  std::uint64_t seed = 1;
  std::string out;           // empty means standard output
  std::string format = "csv";
  bool fast = false;
  bool transposition = true;  // slowmix: widened cut for the transposition chain
  bool compare = false;       // slowmix: tau of the constant-bias walk chain
  bool gap = true;            // exact/scan: compute spectral gaps
  std::size_t cap = 100000;
  // oned / asep parameters
  double r = 0.75;
  int k = 10;
  double p = 0.7;
  int ones = 3;
  int zeros = 3;

  /// The n values to run: the range if given, else n, else `fallback`.
  std::vector<int> sizes(std::optional<int> fallback = std::nullopt) const;
  std::string echo() const;
};

/// Parses "lo:hi" (inclusive).
std::pair<int, int> parse_range(const std::string& text);

int cmd_sample(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_exact(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_scan(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_slowmix(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_paths(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.subcommand, opening config.out when set.
int run_command(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int cli_main(int argc, char** argv);

}  // namespace biasperm
