#include "cbpa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbpa {

Scalar task_gain(Scalar demand, Scalar residual, Scalar start_time, const GainParams& params)
{
  if (!(demand > 0.0)) throw std::invalid_argument("task_gain: demand must be positive");
  if (residual < -kTolerance || residual > demand + kTolerance)
    throw std::invalid_argument("task_gain: residual outside [0, demand]");
  if (start_time < 0.0) throw std::invalid_argument("task_gain: negative start time");
  if (std::isinf(start_time)) return 0.0;
  const Scalar covered = std::clamp((demand - residual) / demand, 0.0, 1.0);
  return params.static_gain * covered * std::exp(-params.lambda * start_time);
}

Scalar result_task_gain(const AllocationResult& result, const Scenario& scenario, TaskId j, const GainParams& params)
{
  const Task& t = scenario.tasks[static_cast<std::size_t>(j)];
  const AgentBelief& b = result.consensus();
  const Scalar start = result.start_times(j);
  const Scalar m_a = residual_demand(b, scenario, j, PayloadKind::A);
  const Scalar m_b = residual_demand(b, scenario, j, PayloadKind::B);
  if (t.demand_b <= 0.0) return task_gain(t.demand_a, m_a, start, params);
  if (t.demand_a <= 0.0) return task_gain(t.demand_b, m_b, start, params);
  const Scalar alpha = scenario.constants.alpha;
  const Scalar beta = scenario.constants.beta;
  return (alpha * task_gain(t.demand_a, m_a, start, params) + beta * task_gain(t.demand_b, m_b, start, params)) /
         (alpha + beta);
}

StartTimeSummary average_start_time(const AllocationResult& result, Index n_robots)
{
  StartTimeSummary out;
  Scalar sum = 0.0;
  Index started = 0;
  for (Index j = 0; j < result.start_times.size(); ++j) {
    if (std::isinf(result.start_times(j))) {
      out.unassigned.push_back(static_cast<TaskId>(j));
      continue;
    }
    sum += result.start_times(j);
    ++started;
  }
  out.value = n_robots > 0 ? sum / static_cast<Scalar>(n_robots) : 0.0;
  out.per_task_mean = started > 0 ? sum / static_cast<Scalar>(started) : 0.0;
  return out;
}

MetricsReport report(const std::string& label, const AllocationResult& result, const Scenario& scenario,
                     const GainParams& params)
{
  MetricsReport r;
  r.label = label;
  const auto starts = average_start_time(result, scenario.num_robots());
  r.avg_start_time = starts.value;
  r.mean_start_per_task = starts.per_task_mean;
  r.unassigned_tasks = starts.unassigned;
  r.per_task_gain = Vector::Zero(scenario.num_tasks());
  if (!result.beliefs.empty())
    for (Index j = 0; j < scenario.num_tasks(); ++j)
      r.per_task_gain(j) = result_task_gain(result, scenario, static_cast<TaskId>(j), params);
  r.total_gain = r.per_task_gain.sum();
  r.iterations = result.rounds_to_converge;
  r.converged = result.converged;
  return r;
}

std::vector<MetricsReport> compare(const std::vector<Labelled>& results, const Scenario& scenario,
                                   const GainParams& params)
{
  std::vector<MetricsReport> rows;
  rows.reserve(results.size());
  for (const auto& [label, result] : results) rows.push_back(report(label, *result, scenario, params));
  return rows;
}

} // namespace cbpa
