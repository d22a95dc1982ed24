#include "cbpa/belief.hpp"

#include <algorithm>
#include <sstream>

namespace cbpa {

AgentBelief AgentBelief::fresh(const Scenario& scenario, RobotId self)
{
  const Index nt = scenario.num_tasks();
  const Index nr = scenario.num_robots();
  AgentBelief b;
  b.self_id = self;
  b.winners = BoolMatrix::Constant(nt, nr, false);
  b.times = Matrix::Constant(nt, nr, kNoArrival);
  b.alloc_a = Matrix::Zero(nt, nr);
  b.alloc_b = Matrix::Zero(nt, nr);
  b.timestamps = StampVector::Zero(nt);
  b.visible = BoolVector::Constant(nt, true);
  for (Index j = 0; j < nt; ++j) b.visible(j) = scenario.tasks[static_cast<std::size_t>(j)].announce_time <= 0.0;
  b.locked = BoolVector::Constant(nt, false);
  b.reserved_a = Vector::Zero(nt);
  return b;
}

bool AgentBelief::in_path(TaskId j) const
{
  return std::find(path.begin(), path.end(), j) != path.end();
}

void AgentBelief::sync_winners(Scalar big_n)
{
  winners = (times.array() >= 0.0 && times.array() < big_n).matrix();
}

void AgentBelief::sync_path()
{
  path.clear();
  for (const auto& stop : route)
    if (!stop.ghost) path.push_back(stop.task);
}

bool AgentBelief::same_rows(const AgentBelief& other) const
{
  return times == other.times && alloc_a == other.alloc_a && alloc_b == other.alloc_b;
}

bool reconcile_route(AgentBelief& b, bool keep_ghosts)
{
  const RobotId self = b.self_id;
  std::vector<RouteStop> route;
  route.reserve(b.route.size());
  for (RouteStop stop : b.route) {
    if (b.winners(stop.task, self)) {
      stop.ghost = false;
      route.push_back(stop);
    } else if (keep_ghosts) {
      stop.ghost = true;
      route.push_back(stop);
    }
  }
  for (Index j = 0; j < b.winners.rows(); ++j) {
    if (!b.winners(j, self)) continue;
    const auto found = std::find_if(route.begin(), route.end(), [j](const RouteStop& s) { return s.task == j; });
    if (found == route.end()) route.push_back(RouteStop{static_cast<TaskId>(j), false});
  }

  TaskList bundle;
  for (TaskId j : b.bundle)
    if (b.winners(j, self)) bundle.push_back(j);
  for (const auto& stop : route)
    if (!stop.ghost && std::find(bundle.begin(), bundle.end(), stop.task) == bundle.end()) bundle.push_back(stop.task);

  const bool changed = route != b.route || bundle != b.bundle;
  b.route = std::move(route);
  b.bundle = std::move(bundle);
  b.sync_path();
  return changed;
}

Scalar remaining_a(const AgentBelief& belief, const Scenario& scenario, RobotId k)
{
  const Scalar left = scenario.robots[static_cast<std::size_t>(k)].payload_a - belief.alloc_a.col(k).sum();
  return std::max(0.0, left);
}

Scalar remaining_b(const AgentBelief&, const Scenario& scenario, RobotId k)
{
  return scenario.robots[static_cast<std::size_t>(k)].payload_b;
}

Scalar remaining(const AgentBelief& belief, const Scenario& scenario, RobotId k, PayloadKind kind)
{
  return kind == PayloadKind::A ? remaining_a(belief, scenario, k) : remaining_b(belief, scenario, k);
}

Scalar residual_demand(const AgentBelief& belief, const Scenario& scenario, TaskId j, PayloadKind kind)
{
  const Scalar left = scenario.tasks[static_cast<std::size_t>(j)].demand(kind) - belief.alloc(kind).row(j).sum();
  return left > kTolerance ? left : 0.0;
}

Scalar weighted_residual(const AgentBelief& belief, const Scenario& scenario, TaskId j)
{
  return scenario.constants.alpha * residual_demand(belief, scenario, j, PayloadKind::A) +
         scenario.constants.beta * residual_demand(belief, scenario, j, PayloadKind::B);
}

bool demand_met(const AgentBelief& belief, const Scenario& scenario, TaskId j)
{
  return residual_demand(belief, scenario, j, PayloadKind::A) == 0.0 &&
         residual_demand(belief, scenario, j, PayloadKind::B) == 0.0;
}

Scalar task_start_time(const AgentBelief& belief, const Scenario& scenario, TaskId j)
{
  if (!demand_met(belief, scenario, j)) return kInfinity;
  Scalar latest = kInfinity;
  for (Index k = 0; k < belief.winners.cols(); ++k) {
    if (!belief.winners(j, k)) continue;
    latest = std::isinf(latest) ? belief.times(j, k) : std::max(latest, belief.times(j, k));
  }
  return latest;
}

bool hopeless(const AgentBelief& belief, const Scenario& scenario, TaskId j)
{
  const Task& t = scenario.tasks[static_cast<std::size_t>(j)];
  Scalar pool_a = belief.alloc_a.row(j).sum();
  Scalar pool_b = 0.0;
  for (Index k = 0; k < scenario.num_robots(); ++k) {
    pool_a += remaining_a(belief, scenario, static_cast<RobotId>(k));
    pool_b += remaining_b(belief, scenario, static_cast<RobotId>(k));
  }
  return pool_a + kTolerance < t.demand_a || pool_b + kTolerance < t.demand_b;
}

Scalar available_payload(const AgentBelief& belief, const Scenario& scenario, PayloadKind kind)
{
  const RobotId self = belief.self_id;
  if (kind == PayloadKind::B) return remaining_b(belief, scenario, self);
  const Scalar held = belief.alloc_a.col(self).cwiseMax(belief.reserved_a).sum();
  const Scalar left = scenario.robots[static_cast<std::size_t>(self)].payload_a - held;
  return left > kTolerance ? left : 0.0;
}

std::vector<Violation> check_constraints(std::span<const AgentBelief> beliefs, const Scenario& scenario)
{
  std::vector<Violation> out;
  auto report = [&out](std::string code, std::ostringstream& msg) {
    out.push_back(Violation{std::move(code), msg.str()});
  };

  for (const AgentBelief& b : beliefs) {
    for (Index j = 0; j < scenario.num_tasks(); ++j) {
      if (!b.visible(j)) continue;
      for (auto kind : {PayloadKind::A, PayloadKind::B}) {
        const Scalar supplied = b.alloc(kind).row(j).sum();
        const Scalar demand = scenario.tasks[static_cast<std::size_t>(j)].demand(kind);
        if (supplied + kTolerance < demand) {
          std::ostringstream msg;
          msg << "agent " << b.self_id << ": task " << j << " payload " << (kind == PayloadKind::A ? 'A' : 'B')
              << " supplied " << supplied << " < demand " << demand;
          report("demand.undersupplied", msg);
        }
      }
    }
    for (Index k = 0; k < scenario.num_robots(); ++k) {
      const Robot& robot = scenario.robots[static_cast<std::size_t>(k)];
      const Scalar used_a = b.alloc_a.col(k).sum();
      if (used_a > robot.payload_a + kTolerance) {
        std::ostringstream msg;
        msg << "agent " << b.self_id << ": robot " << k << " commits " << used_a << " payload A of "
            << robot.payload_a;
        report("payload.overcommitted", msg);
      }
      const Scalar peak_b = b.alloc_b.col(k).size() ? b.alloc_b.col(k).maxCoeff() : 0.0;
      if (peak_b > robot.payload_b + kTolerance) {
        std::ostringstream msg;
        msg << "agent " << b.self_id << ": robot " << k << " commits " << peak_b << " payload B of "
            << robot.payload_b;
        report("payload.overcommitted", msg);
      }
    }
  }

  for (std::size_t p = 0; p < beliefs.size(); ++p) {
    for (std::size_t q = p + 1; q < beliefs.size(); ++q) {
      if (beliefs[p].same_rows(beliefs[q])) continue;
      std::ostringstream msg;
      msg << "agents " << beliefs[p].self_id << " and " << beliefs[q].self_id << " disagree";
      for (Index j = 0; j < beliefs[p].times.rows(); ++j) {
        if (beliefs[p].times.row(j) != beliefs[q].times.row(j) ||
            beliefs[p].alloc_a.row(j) != beliefs[q].alloc_a.row(j) ||
            beliefs[p].alloc_b.row(j) != beliefs[q].alloc_b.row(j)) {
          msg << " on task " << j;
          break;
        }
      }
      report("belief.inconsistent", msg);
    }
  }
  return out;
}

} // namespace cbpa
