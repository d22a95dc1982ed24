#include "cbpa/engine.hpp"

#include <algorithm>
#include <numeric>

namespace cbpa {

namespace {

RoundTrace snapshot(Round round, const std::vector<bool>& changed, const std::vector<AgentBelief>& beliefs,
                    const Scenario& scenario, CoalitionPolicy policy)
{
  RoundTrace t;
  t.round = round;
  t.changed = changed;
  const Index nt = scenario.num_tasks();
  for (const AgentBelief& b : beliefs) {
    Vector starts(nt);
    Vector residuals(nt);
    for (Index j = 0; j < nt; ++j) {
      starts(j) = start_time(b, scenario, static_cast<TaskId>(j), policy);
      residuals(j) = weighted_residual(b, scenario, static_cast<TaskId>(j));
    }
    t.starts.push_back(std::move(starts));
    t.residuals.push_back(std::move(residuals));
  }
  return t;
}

// Tasks announced after time zero, in announce order (ties by id).
std::vector<TaskId> pending_tasks(const Scenario& scenario)
{
  std::vector<TaskId> pending;
  for (const Task& t : scenario.tasks)
    if (t.announce_time > 0.0) pending.push_back(t.id);
  std::stable_sort(pending.begin(), pending.end(), [&](TaskId a, TaskId b) {
    return scenario.tasks[static_cast<std::size_t>(a)].announce_time <
           scenario.tasks[static_cast<std::size_t>(b)].announce_time;
  });
  return pending;
}

std::vector<TaskId> lock_started(std::vector<AgentBelief>& beliefs, const Scenario& scenario, Scalar clock,
                                 CoalitionPolicy policy, std::vector<LockedRow>& rows)
{
  std::vector<TaskId> locked;
  const AgentBelief& ref = beliefs.front();
  for (Index j = 0; j < scenario.num_tasks(); ++j) {
    if (ref.locked(j) || !ref.visible(j)) continue;
    const Scalar tau = start_time(ref, scenario, static_cast<TaskId>(j), policy);
    if (!(tau <= clock)) continue;
    locked.push_back(static_cast<TaskId>(j));
    rows.push_back(LockedRow{static_cast<TaskId>(j), ref.times.row(j).transpose(), ref.alloc_a.row(j).transpose(),
                             ref.alloc_b.row(j).transpose()});
    for (AgentBelief& b : beliefs) b.locked(j) = true;
  }
  return locked;
}

Index count_met(const AgentBelief& b, const Scenario& scenario)
{
  Index met = 0;
  for (Index j = 0; j < scenario.num_tasks(); ++j)
    if (b.visible(j) && demand_met(b, scenario, static_cast<TaskId>(j))) ++met;
  return met;
}

} // namespace

void summarize(AllocationResult& result, const Scenario& scenario)
{
  const Index nt = scenario.num_tasks();
  result.start_times = Vector::Constant(nt, kInfinity);
  result.paths.assign(static_cast<std::size_t>(scenario.num_robots()), {});
  result.unassigned.clear();
  if (result.beliefs.empty()) return;
  const AgentBelief& ref = result.consensus();
  for (Index j = 0; j < nt; ++j) {
    result.start_times(j) = start_time(ref, scenario, static_cast<TaskId>(j), result.policy);
    if (std::isinf(result.start_times(j))) result.unassigned.push_back(static_cast<TaskId>(j));
  }
  for (const AgentBelief& b : result.beliefs) {
    // each robot is the authority on its own path
    TaskList path;
    for (TaskId j : b.path)
      if (ref.winners(j, b.self_id)) path.push_back(j);
    std::stable_sort(path.begin(), path.end(),
                     [&](TaskId x, TaskId y) { return ref.times(x, b.self_id) < ref.times(y, b.self_id); });
    result.paths[static_cast<std::size_t>(b.self_id)] = std::move(path);
  }
}

AllocationResult run_dynamic(const Scenario& scenario, const EngineOptions& options)
{
  require_valid(scenario);
  const Index nr = scenario.num_robots();
  const Topology& topo = scenario.topology;
  const bool guard = options.stale_guard.value_or(topo.diameter() > 1);
  const BuildOptions build{options.policy, guard};
  const ReceiveOptions recv{options.rule, options.policy, guard};
  const Round limit = options.max_rounds > 0 ? options.max_rounds : scenario.max_rounds();

  AllocationResult result;
  result.algorithm = options.policy == CoalitionPolicy::Multi ? "cbpa" : "cbba";
  result.policy = options.policy;
  for (Index k = 0; k < nr; ++k) result.beliefs.push_back(AgentBelief::fresh(scenario, static_cast<RobotId>(k)));

  std::vector<TaskId> pending = pending_tasks(scenario);
  std::size_t next = 0;
  std::vector<std::vector<int>> neighbours;
  for (Index k = 0; k < nr; ++k) neighbours.push_back(topo.neighbours(static_cast<int>(k)));

  Index met_at_last_clear = -1;
  Round round = 0;
  while (round < limit) {
    ++round;
    std::vector<bool> changed(static_cast<std::size_t>(nr), false);
    for (Index k = 0; k < nr; ++k)
      changed[static_cast<std::size_t>(k)] = build_bundle(result.beliefs[static_cast<std::size_t>(k)], scenario, round, build);

    std::vector<ConsensusMessage> outbox;
    outbox.reserve(static_cast<std::size_t>(nr));
    for (const AgentBelief& b : result.beliefs) outbox.push_back(make_message(b));
    for (Index k = 0; k < nr; ++k) {
      AgentBelief& b = result.beliefs[static_cast<std::size_t>(k)];
      for (int from : neighbours[static_cast<std::size_t>(k)])
        if (receive(b, outbox[static_cast<std::size_t>(from)], scenario, recv)) changed[static_cast<std::size_t>(k)] = true;
    }

    if (options.record_trace) result.trace.push_back(snapshot(round, changed, result.beliefs, scenario, options.policy));
    result.rounds_executed = round;
    if (std::any_of(changed.begin(), changed.end(), [](bool c) { return c; })) {
      result.rounds_to_converge = round;
      continue;
    }

    // Quiet round.
    if (guard) {
      bool released = false;
      for (AgentBelief& b : result.beliefs) released = release_stale_guard(b) || released;
      if (released) continue;
    }
    if (options.policy == CoalitionPolicy::Multi) {
      // robots waiting on each other's unmet tasks; retried only after progress
      const Index met = count_met(result.consensus(), scenario);
      if (met > met_at_last_clear) {
        bool cleared = false;
        for (AgentBelief& b : result.beliefs) cleared = clear_partial_rows(b, scenario, round) || cleared;
        if (cleared) {
          met_at_last_clear = met;
          continue;
        }
      }
    }
    if (!result.injections.empty()) result.injections.back().reconverged = true;
    if (next >= pending.size()) {
      result.converged = true;
      break;
    }

    const TaskId j = pending[next++];
    InjectionEvent event;
    event.task = j;
    event.clock = scenario.tasks[static_cast<std::size_t>(j)].announce_time;
    event.round = round + 1;
    if (options.lock_started)
      event.locked = lock_started(result.beliefs, scenario, event.clock, options.policy, result.locked_rows);
    for (AgentBelief& b : result.beliefs) b.visible(j) = true;
    result.injections.push_back(std::move(event));
  }

  summarize(result, scenario);
  return result;
}

AllocationResult run(const Scenario& scenario, const EngineOptions& options) { return run_dynamic(scenario, options); }

} // namespace cbpa
