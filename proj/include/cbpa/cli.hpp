#pragma once

#include "cbpa/report.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cbpa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNotConverged = 2;

struct RunArgs
{
  std::optional<std::string> preset;
  std::optional<std::string> scenario_path;
  std::string algo = "cbpa";
  std::uint64_t seed = 0;
  std::string out = "out";
  int max_rounds = 0;
  int n_tasks = 15; ///< case2 preset only
};

struct SweepArgs
{
  int lo = 10;
  int hi = 20;
  int repeats = 20;
  std::uint64_t seed = 0;
  std::string out = "out";
  int max_rounds = 0;
};

/// Parses "lo..hi"; throws std::invalid_argument.
std::pair<int, int> parse_range(const std::string& text);

/// Seed of repeat `r` of the group with `n` tasks.
std::uint64_t sweep_instance_seed(std::uint64_t seed, int n, int r);

/// Gains and convergence for one sweep group, in repeat order.
SweepRow sweep_group(int n_tasks, int repeats, std::uint64_t seed, int max_rounds = 0);

int cmd_run(const RunArgs& args, std::ostream& log, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& log, std::ostream& err);

/// Full command line: `run ...` or `sweep ...`.
int main(int argc, char** argv);

} // namespace cbpa::cli
