#pragma once

#include "cbpa/belief.hpp"
#include "cbpa/bundle_builder.hpp"
#include "cbpa/consensus.hpp"
#include "cbpa/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cbpa {

struct EngineOptions
{
  CoalitionPolicy policy = CoalitionPolicy::Multi;
  UpdateRule rule = UpdateRule::Ordered;
  /// Defaults to on exactly when the topology diameter exceeds one.
  std::optional<bool> stale_guard;
  /// Freeze tasks whose start time has passed when a new task is injected.
  bool lock_started = true;
  /// 0 means the scenario's bound.
  Round max_rounds = 0;
  bool record_trace = false;
};

struct RoundTrace
{
  Round round = 0;
  std::vector<bool> changed;     ///< per agent
  std::vector<Vector> starts;    ///< per agent, per task start time
  std::vector<Vector> residuals; ///< per agent, per task weighted residual
};

struct InjectionEvent
{
  TaskId task = 0;
  Scalar clock = 0.0; ///< simulated time at which the task appeared
  Round round = 0;    ///< first round in which agents could see it
  bool reconverged = false;
  std::vector<TaskId> locked; ///< tasks frozen at this injection
};

struct LockedRow
{
  TaskId task = 0;
  Vector times;
  Vector alloc_a;
  Vector alloc_b;
};

struct AllocationResult
{
  std::string algorithm;
  CoalitionPolicy policy = CoalitionPolicy::Multi;
  std::vector<AgentBelief> beliefs;
  Vector start_times;             ///< per task, kInfinity when never started
  std::vector<TaskList> paths;    ///< per robot, arrival order
  Round rounds_to_converge = 0;   ///< last round in which any agent changed
  Round rounds_executed = 0;
  bool converged = false;
  std::vector<RoundTrace> trace;
  std::vector<TaskId> unassigned;
  std::vector<InjectionEvent> injections;
  std::vector<LockedRow> locked_rows;

  /// Belief used for reporting: agent 0's (all agree once converged).
  const AgentBelief& consensus() const { return beliefs.front(); }
};

/// Synchronous rounds of bundle construction then neighbour exchange until no
/// agent changes. Tasks announced later are injected one at a time whenever
/// the network is quiet. Throws ScenarioError on an invalid scenario.
AllocationResult run(const Scenario& scenario, const EngineOptions& options = {});

/// Same loop; kept as a separate entry point for scenarios with announced
/// tasks. Identical to run() when nothing is announced late.
AllocationResult run_dynamic(const Scenario& scenario, const EngineOptions& options = {});

/// Fills start_times, paths and unassigned from the consensus belief.
void summarize(AllocationResult& result, const Scenario& scenario);

} // namespace cbpa
