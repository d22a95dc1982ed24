#include "cbpa/baselines.hpp"

#include "cbpa/bundle_builder.hpp"

namespace cbpa {

namespace {

// Copies the shared rows into one robot's view and brings its plan up to date.
void pull(AgentBelief& b, const AgentBelief& master, const Scenario& scenario, Round now)
{
  b.times = master.times;
  b.alloc_a = master.alloc_a;
  b.alloc_b = master.alloc_b;
  b.timestamps = master.timestamps;
  refresh(b, scenario, now);
}

// Writes back what only the robot itself may change: its own arrival times.
void push(const AgentBelief& b, AgentBelief& master)
{
  master.times.col(b.self_id) = b.times.col(b.self_id);
  master.timestamps = master.timestamps.cwiseMax(b.timestamps);
}

} // namespace

AllocationResult run_auction(const Scenario& scenario, Round max_rounds)
{
  require_valid(scenario);
  const Index nr = scenario.num_robots();
  const Round limit = max_rounds > 0 ? max_rounds : scenario.max_rounds();

  AllocationResult result;
  result.algorithm = "aoa";
  result.policy = CoalitionPolicy::Multi;
  for (Index k = 0; k < nr; ++k) result.beliefs.push_back(AgentBelief::fresh(scenario, static_cast<RobotId>(k)));
  if (nr == 0) {
    result.converged = true;
    summarize(result, scenario);
    return result;
  }
  AgentBelief master = AgentBelief::fresh(scenario, 0);

  Index met_at_last_clear = -1;
  Round round = 0;
  while (round < limit) {
    ++round;
    for (AgentBelief& b : result.beliefs) {
      pull(b, master, scenario, round);
      push(b, master);
    }

    std::optional<Bid> winner;
    RobotId winner_robot = -1;
    for (const AgentBelief& b : result.beliefs) {
      auto bid = best_bid(b, scenario);
      if (!bid) continue;
      const bool better = !winner || bid->cost < winner->cost - kTolerance ||
                          (approx_equal(bid->cost, winner->cost) && bid->task < winner->task);
      if (better) {
        winner = std::move(bid);
        winner_robot = b.self_id;
      }
    }

    if (winner) {
      AgentBelief& b = result.beliefs[static_cast<std::size_t>(winner_robot)];
      apply_bid(b, scenario, *winner, round);
      const TaskId j = winner->task;
      master.times.row(j) = b.times.row(j);
      master.alloc_a.row(j) = b.alloc_a.row(j);
      master.alloc_b.row(j) = b.alloc_b.row(j);
      master.timestamps(j) = round;
      result.rounds_to_converge = round;
      result.rounds_executed = round;
      continue;
    }

    // Nobody can bid: free robots stuck on each other's unmet tasks, once per gain in met tasks.
    Index met = 0;
    for (Index j = 0; j < scenario.num_tasks(); ++j)
      if (demand_met(master, scenario, static_cast<TaskId>(j))) ++met;
    if (met > met_at_last_clear && clear_partial_rows(master, scenario, round)) {
      met_at_last_clear = met;
      --round;
      continue;
    }
    result.rounds_executed = round;
    result.converged = true;
    break;
  }

  for (AgentBelief& b : result.beliefs) pull(b, master, scenario, round);
  summarize(result, scenario);
  return result;
}

AllocationResult run_cbba_single(const Scenario& scenario, const EngineOptions& options)
{
  EngineOptions single = options;
  single.policy = CoalitionPolicy::Single;
  return run(scenario, single);
}

} // namespace cbpa
