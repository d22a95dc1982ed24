#pragma once

#include "cbpa/belief.hpp"
#include "cbpa/scenario.hpp"

#include <optional>

namespace cbpa {

/// How many robots may share a task. `Single` is the classic one-winner
/// bundle algorithm: the winner covers what it can and the task starts on its
/// arrival whether or not the demand is met.
enum class CoalitionPolicy { Multi, Single };

struct BuildOptions
{
  CoalitionPolicy policy = CoalitionPolicy::Multi;
  /// Keep lost tasks as ghosts and hold back payload from rows that shrank
  /// until release_stale_guard(). Needed whenever stale copies of a row can
  /// still be circulating, i.e. on any topology with diameter above one.
  bool stale_guard = false;
};

struct Bid
{
  TaskId task = 0;
  Scalar cost = kInfinity;
  Index insert_pos = 0;
  Scalar arrival = kInfinity;
  bool replaces = false;     ///< demand already met: self replaces `evicted`
  RobotId evicted = -1;
  Vector alloc_a;            ///< full row allocation after the bid
  Vector alloc_b;
  bool top_up = false;       ///< already a member: only raises its own share
};

/// Start time of task j under the given coalition policy.
Scalar start_time(const AgentBelief& belief, const Scenario& scenario, TaskId j, CoalitionPolicy policy);

/// Own arrival at the k-th task of `path` (task-to-task travel chained on the
/// previous task's coalition start time and duration). Infinite when an
/// earlier task on the path has no start time.
Scalar arrival_time(const AgentBelief& belief, const Scenario& scenario, const TaskList& path, Index k,
                    CoalitionPolicy policy = CoalitionPolicy::Multi);

/// Sum over `path` of weighted residual demand plus own arrival time.
Scalar path_cost(const AgentBelief& belief, const Scenario& scenario, const TaskList& path,
                 CoalitionPolicy policy = CoalitionPolicy::Multi);

/// Cheapest insertion of task j into the own route, or nullopt when the robot
/// is not eligible (cost would be big_c).
std::optional<Bid> marginal_cost(const AgentBelief& belief, const Scenario& scenario, TaskId j,
                                 const BuildOptions& options = {});

/// The bid build_bundle would act on next, if any.
std::optional<Bid> best_bid(const AgentBelief& belief, const Scenario& scenario, const BuildOptions& options = {});

/// Writes the bid into the belief; stamps the task row with `now`.
void apply_bid(AgentBelief& belief, const Scenario& scenario, const Bid& bid, Round now,
               const BuildOptions& options = {});

/// Brings derived state up to date with the matrices: winners, lost or
/// regained tasks, reservations and own arrival times. Returns true when the
/// belief changed.
bool refresh(AgentBelief& belief, const Scenario& scenario, Round now, const BuildOptions& options = {});

/// One payload bundle construction phase. Returns true when the belief changed.
bool build_bundle(AgentBelief& belief, const Scenario& scenario, Round now, const BuildOptions& options = {});

/// Drops ghosts and payload reservations. Only safe once every agent holds the
/// same rows. Returns true when anything was released.
bool release_stale_guard(AgentBelief& belief);

/// Clears every partially committed unmet row except the one closest to being
/// met (smallest weighted residual, then lowest id), freeing robots that wait
/// on each other's unmet tasks. Rows the fleet can no longer complete are
/// cleared as well. Agents holding identical rows reach identical
/// results, so no exchange is needed; only valid on a quiet network. Returns
/// true when any row was cleared.
bool clear_partial_rows(AgentBelief& belief, const Scenario& scenario, Round now);

} // namespace cbpa
