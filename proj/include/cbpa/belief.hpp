#pragma once

#include "cbpa/scenario.hpp"
#include "cbpa/types.hpp"

#include <span>
#include <vector>

namespace cbpa {

/// One entry of a robot's travel plan. A ghost is a task the robot has lost
/// but whose time slot it keeps until the network is quiescent, so that a
/// stale copy of the task re-awarding it cannot delay anything planned after.
struct RouteStop
{
  TaskId task = 0;
  bool ghost = false;

  bool operator==(const RouteStop&) const = default;
};

/// Robot `self_id`'s local view of the allocation. Matrices are tasks x robots.
struct AgentBelief
{
  RobotId self_id = 0;
  BoolMatrix winners;     ///< who executes each task
  Matrix times;           ///< arrival time of robot k at task j, or kNoArrival
  Matrix alloc_a;         ///< payload A committed by robot k to task j
  Matrix alloc_b;         ///< payload B committed by robot k to task j
  StampVector timestamps; ///< round in which each task row was last written
  TaskList bundle;        ///< own tasks in selection order
  TaskList path;          ///< own tasks in arrival order

  BoolVector visible;     ///< task has been announced
  BoolVector locked;      ///< task has started; its row is frozen
  Vector reserved_a;      ///< own payload-A held back per task
  std::vector<RouteStop> route;

  static AgentBelief fresh(const Scenario& scenario, RobotId self);

  const Matrix& alloc(PayloadKind kind) const { return kind == PayloadKind::A ? alloc_a : alloc_b; }
  Matrix& alloc(PayloadKind kind) { return kind == PayloadKind::A ? alloc_a : alloc_b; }

  bool member(TaskId j, RobotId k) const { return winners(j, k); }
  bool in_path(TaskId j) const;

  /// Recomputes `winners` from `times` (an arrival below `big_n` is a bid).
  void sync_winners(Scalar big_n);

  /// Rebuilds `path` from the non-ghost route stops.
  void sync_path();

  bool same_rows(const AgentBelief& other) const;
};

/// Aligns route, path and bundle with the winners matrix: lost tasks are
/// dropped (or turned into ghosts when `keep_ghosts`), regained ones restored.
/// Returns true when anything moved.
bool reconcile_route(AgentBelief& belief, bool keep_ghosts);

/// Payload A robot k still has, as seen by `belief`.
Scalar remaining_a(const AgentBelief& belief, const Scenario& scenario, RobotId k);

/// Payload B is never consumed, so this is the carried amount.
Scalar remaining_b(const AgentBelief& belief, const Scenario& scenario, RobotId k);

Scalar remaining(const AgentBelief& belief, const Scenario& scenario, RobotId k, PayloadKind kind);

/// Unmet demand of task j for one payload kind, floored at zero.
Scalar residual_demand(const AgentBelief& belief, const Scenario& scenario, TaskId j, PayloadKind kind);

/// alpha * m_a + beta * m_b; totally orders mixed-kind shortfalls.
Scalar weighted_residual(const AgentBelief& belief, const Scenario& scenario, TaskId j);

bool demand_met(const AgentBelief& belief, const Scenario& scenario, TaskId j);

/// Latest arrival among the coalition if the demand is met, else kInfinity.
Scalar task_start_time(const AgentBelief& belief, const Scenario& scenario, TaskId j);

/// True when the whole fleet, even pooling everything not yet committed
/// elsewhere, cannot meet task j's demand.
bool hopeless(const AgentBelief& belief, const Scenario& scenario, TaskId j);

/// Payload the owning robot may still commit, net of reservations.
Scalar available_payload(const AgentBelief& belief, const Scenario& scenario, PayloadKind kind);

/// Feasibility of a set of beliefs over the same scenario: under-supplied
/// tasks, over-committed robots and disagreeing agents.
///
/// Payload A is consumable, so its commitments are summed per robot. Payload
/// B is not consumed, so each single commitment is bounded by the carried
/// amount instead.
std::vector<Violation> check_constraints(std::span<const AgentBelief> beliefs, const Scenario& scenario);

} // namespace cbpa
