#pragma once

#include "cbpa/engine.hpp"
#include "cbpa/scenario.hpp"

#include <string>
#include <vector>

namespace cbpa {

struct GainParams
{
  Scalar static_gain = 100.0;
  Scalar lambda = 0.0;

  static GainParams from(const AlgoConstants& c) { return GainParams{c.static_gain, c.lambda}; }
};

/// static_gain * (demand - residual) / demand * exp(-lambda * start).
/// An infinite start time earns nothing. Throws std::invalid_argument when
/// demand <= 0, the residual lies outside [0, demand] or start is negative.
Scalar task_gain(Scalar demand, Scalar residual, Scalar start_time, const GainParams& params);

/// Gain of task j in `result`. Single-kind tasks use that kind directly; tasks
/// demanding both kinds average the two coverage fractions with weights
/// alpha:beta (an extension, reported as such).
Scalar result_task_gain(const AllocationResult& result, const Scenario& scenario, TaskId j, const GainParams& params);

struct StartTimeSummary
{
  Scalar value = 0.0;            ///< sum of finite start times / robot count
  Scalar per_task_mean = 0.0;    ///< sum of finite start times / started tasks
  std::vector<TaskId> unassigned;
};

StartTimeSummary average_start_time(const AllocationResult& result, Index n_robots);

struct MetricsReport
{
  std::string label;
  Scalar avg_start_time = 0.0;
  Scalar mean_start_per_task = 0.0; ///< sum over started tasks only
  Vector per_task_gain;
  Scalar total_gain = 0.0;
  Round iterations = 0;
  bool converged = false;
  std::vector<TaskId> unassigned_tasks;
};

MetricsReport report(const std::string& label, const AllocationResult& result, const Scenario& scenario,
                     const GainParams& params);

struct Labelled
{
  std::string label;
  const AllocationResult* result = nullptr;
};

/// One row per allocator, in input order.
std::vector<MetricsReport> compare(const std::vector<Labelled>& results, const Scenario& scenario,
                                   const GainParams& params);

} // namespace cbpa
