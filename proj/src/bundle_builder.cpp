#include "cbpa/bundle_builder.hpp"

#include "cbpa/payload_alloc.hpp"

#include <algorithm>

namespace cbpa {

namespace {

// A task that is being tried at some route position with a proposed row.
struct Hypothesis
{
  TaskId task = 0;
  RobotId evicted = -1;
  const Vector* alloc_a = nullptr;
  const Vector* alloc_b = nullptr;
};

const Task& task_of(const Scenario& s, TaskId j) { return s.tasks[static_cast<std::size_t>(j)]; }
const Robot& robot_of(const Scenario& s, RobotId k) { return s.robots[static_cast<std::size_t>(k)]; }

bool row_met(const Scenario& s, TaskId j, const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b)
{
  const Task& t = task_of(s, j);
  return t.demand_a - a.sum() <= kTolerance && t.demand_b - b.sum() <= kTolerance;
}

// Start time of a route stop when the owner arrives at `own_arrival`.
Scalar own_start(const AgentBelief& bel, const Scenario& s, TaskId j, Scalar own_arrival, CoalitionPolicy policy,
                 const Hypothesis* hyp)
{
  const bool proposed = hyp && hyp->task == j;
  if (policy == CoalitionPolicy::Multi) {
    const bool met = proposed ? row_met(s, j, *hyp->alloc_a, *hyp->alloc_b)
                              : row_met(s, j, bel.alloc_a.row(j).transpose(), bel.alloc_b.row(j).transpose());
    if (!met) return kInfinity;
  }
  Scalar latest = own_arrival;
  for (Index k = 0; k < bel.winners.cols(); ++k) {
    if (k == bel.self_id || !bel.winners(j, k)) continue;
    if (proposed && k == hyp->evicted) continue;
    latest = std::max(latest, bel.times(j, k));
  }
  return latest;
}

// Own arrival at every stop of `route`.
std::vector<Scalar> chain(const AgentBelief& bel, const Scenario& s, const std::vector<RouteStop>& route,
                          CoalitionPolicy policy, const Hypothesis* hyp = nullptr)
{
  const Robot& me = robot_of(s, bel.self_id);
  std::vector<Scalar> arrival(route.size(), kInfinity);
  Scalar depart = 0.0;
  Point from = me.position;
  for (std::size_t idx = 0; idx < route.size(); ++idx) {
    const Task& t = task_of(s, route[idx].task);
    if (std::isinf(depart)) break;
    // nobody heads for a task before it is announced
    arrival[idx] = std::max(depart, t.announce_time) + distance(from, t.position) / me.velocity;
    Scalar begins;
    if (route[idx].ghost) {
      begins = std::max(arrival[idx], start_time(bel, s, t.id, policy));
    } else {
      begins = own_start(bel, s, t.id, arrival[idx], policy, hyp);
    }
    depart = begins + t.duration;
    from = t.position;
  }
  return arrival;
}

std::vector<RouteStop> as_route(const TaskList& path)
{
  std::vector<RouteStop> route;
  for (TaskId j : path) route.push_back(RouteStop{j, false});
  return route;
}

Index first_open_position(const AgentBelief& bel)
{
  Index pos = 0;
  for (std::size_t idx = 0; idx < bel.route.size(); ++idx)
    if (bel.locked(bel.route[idx].task)) pos = static_cast<Index>(idx) + 1;
  return pos;
}

// Latest arrival the owner has published for a stop; the computed arrival
// for ghosts and stops never written.
Scalar promised_time(const AgentBelief& bel, const Scenario& s, const RouteStop& stop, Scalar computed)
{
  if (stop.ghost) return computed;
  const Scalar t = bel.times(stop.task, bel.self_id);
  return t >= 0.0 && t < s.constants.big_n ? t : computed;
}

struct Proposal
{
  Vector alloc_a;
  Vector alloc_b;
  bool replaces = false;
  RobotId evicted = -1;
  Scalar old_start = kInfinity;
};

// Row the robot would write for task j, independent of where it is inserted.
std::optional<Proposal> propose(const AgentBelief& bel, const Scenario& s, TaskId j, CoalitionPolicy policy)
{
  const RobotId self = bel.self_id;
  const Task& t = task_of(s, j);
  const Index nr = s.num_robots();
  Proposal p;

  if (policy == CoalitionPolicy::Single) {
    bool useful = false;
    p.alloc_a = Vector::Zero(nr);
    p.alloc_b = Vector::Zero(nr);
    for (auto kind : {PayloadKind::A, PayloadKind::B}) {
      const Scalar give = std::min(t.demand(kind), available_payload(bel, s, kind));
      (kind == PayloadKind::A ? p.alloc_a : p.alloc_b)(self) = give;
      useful = useful || give > kTolerance;
    }
    if (!useful) return std::nullopt;
    for (Index k = 0; k < nr; ++k) {
      if (bel.winners(j, k)) {
        p.replaces = true;
        p.evicted = static_cast<RobotId>(k);
      }
    }
    return p;
  }

  const Scalar m_a = residual_demand(bel, s, j, PayloadKind::A);
  const Scalar m_b = residual_demand(bel, s, j, PayloadKind::B);
  const Scalar own_a = available_payload(bel, s, PayloadKind::A);
  const Scalar own_b = available_payload(bel, s, PayloadKind::B);

  BoolVector coalition = bel.winners.row(j).transpose();
  if (m_a > 0.0 || m_b > 0.0) {
    if (hopeless(bel, s, j)) return std::nullopt;
    if (!((m_a > 0.0 && own_a > kTolerance) || (m_b > 0.0 && own_b > kTolerance))) return std::nullopt;
  } else {
    // Demand met: replace the unique slowest member if that can stay met.
    p.old_start = task_start_time(bel, s, j);
    if (std::isinf(p.old_start)) return std::nullopt;
    Scalar slowest = -kInfinity;
    for (Index k = 0; k < nr; ++k) {
      if (coalition(k) && bel.times(j, k) > slowest + kTolerance) {
        slowest = bel.times(j, k);
        p.evicted = static_cast<RobotId>(k);
      }
    }
    for (Index k = 0; k < nr; ++k)
      if (coalition(k) && k != p.evicted && bel.times(j, k) >= slowest - kTolerance) return std::nullopt;
    coalition(p.evicted) = false;
    p.replaces = true;
  }
  coalition(self) = true;

  // Other members can only be asked for less than they already give.
  Vector cap_a = bel.alloc_a.row(j).transpose();
  Vector cap_b = bel.alloc_b.row(j).transpose();
  cap_a(self) = own_a;
  cap_b(self) = own_b;
  p.alloc_a = allocate_average(coalition, cap_a, t.demand_a);
  p.alloc_b = allocate_average(coalition, cap_b, t.demand_b);
  if (p.replaces && !row_met(s, j, p.alloc_a, p.alloc_b)) return std::nullopt;
  if (p.alloc_a(self) <= kTolerance && p.alloc_b(self) <= kTolerance) return std::nullopt;
  return p;
}

// A member raising its own share: on an unmet row to cover the lacking kinds,
// on a met row to push out the unique slowest other member and start sooner.
std::optional<Bid> top_up(const AgentBelief& bel, const Scenario& s, TaskId j, Index pos)
{
  const RobotId self = bel.self_id;
  const Task& t = task_of(s, j);
  const AlgoConstants& c = s.constants;
  const Scalar m_a = residual_demand(bel, s, j, PayloadKind::A);
  const Scalar m_b = residual_demand(bel, s, j, PayloadKind::B);
  const bool met = m_a == 0.0 && m_b == 0.0;
  if (!met && hopeless(bel, s, j)) return std::nullopt;

  BoolVector coalition = bel.winners.row(j).transpose();
  RobotId evicted = -1;
  Scalar old_start = kInfinity;
  if (met) {
    old_start = task_start_time(bel, s, j);
    Scalar slowest = -kInfinity;
    for (Index k = 0; k < coalition.size(); ++k) {
      if (coalition(k) && bel.times(j, k) > slowest + kTolerance) {
        slowest = bel.times(j, k);
        evicted = static_cast<RobotId>(k);
      }
    }
    if (evicted < 0 || evicted == self) return std::nullopt;
    for (Index k = 0; k < coalition.size(); ++k)
      if (coalition(k) && k != evicted && bel.times(j, k) >= slowest - kTolerance) return std::nullopt;
    coalition(evicted) = false;
  }

  Vector alloc_a = bel.alloc_a.row(j).transpose();
  Vector alloc_b = bel.alloc_b.row(j).transpose();
  if (met || m_a > 0.0) {
    Vector cap = alloc_a;
    cap(self) = available_payload(bel, s, PayloadKind::A) + std::max(alloc_a(self), bel.reserved_a(j));
    alloc_a = allocate_average(coalition, cap, t.demand_a);
  }
  if (met || m_b > 0.0) {
    Vector cap = alloc_b;
    cap(self) = available_payload(bel, s, PayloadKind::B);
    alloc_b = allocate_average(coalition, cap, t.demand_b);
  }
  auto shortfall = [](Scalar demand, Scalar given) {
    const Scalar left = demand - given;
    return left > kTolerance ? left : 0.0;
  };
  const Scalar after = c.alpha * shortfall(t.demand_a, alloc_a.sum()) + c.beta * shortfall(t.demand_b, alloc_b.sum());
  if (met) {
    if (after > 0.0) return std::nullopt;
    Scalar start = -kInfinity;
    for (Index k = 0; k < coalition.size(); ++k)
      if (coalition(k)) start = std::max(start, bel.times(j, k));
    if (!(start < old_start - kTolerance)) return std::nullopt;
  } else if (!(after < weighted_residual(bel, s, j) - kTolerance)) {
    return std::nullopt;
  }

  Bid bid{j, after + bel.times(j, self), pos, bel.times(j, self), met, evicted, std::move(alloc_a), std::move(alloc_b)};
  bid.top_up = true;
  return bid;
}

} // namespace

Scalar start_time(const AgentBelief& belief, const Scenario& scenario, TaskId j, CoalitionPolicy policy)
{
  if (policy == CoalitionPolicy::Multi) return task_start_time(belief, scenario, j);
  Scalar latest = kInfinity;
  for (Index k = 0; k < belief.winners.cols(); ++k)
    if (belief.winners(j, k)) latest = std::isinf(latest) ? belief.times(j, k) : std::max(latest, belief.times(j, k));
  return latest;
}

Scalar arrival_time(const AgentBelief& belief, const Scenario& scenario, const TaskList& path, Index k,
                    CoalitionPolicy policy)
{
  const auto arrivals = chain(belief, scenario, as_route(path), policy);
  return arrivals.at(static_cast<std::size_t>(k));
}

Scalar path_cost(const AgentBelief& belief, const Scenario& scenario, const TaskList& path, CoalitionPolicy policy)
{
  const auto arrivals = chain(belief, scenario, as_route(path), policy);
  Scalar total = 0.0;
  for (std::size_t idx = 0; idx < path.size(); ++idx)
    total += weighted_residual(belief, scenario, path[idx]) + arrivals[idx];
  return total;
}

std::optional<Bid> marginal_cost(const AgentBelief& belief, const Scenario& scenario, TaskId j,
                                 const BuildOptions& options)
{
  if (!belief.visible(j) || belief.locked(j)) return std::nullopt;
  for (std::size_t idx = 0; idx < belief.route.size(); ++idx) {
    const RouteStop& stop = belief.route[idx];
    if (stop.task != j) continue;
    if (stop.ghost || options.policy != CoalitionPolicy::Multi) return std::nullopt;
    return top_up(belief, scenario, j, static_cast<Index>(idx));
  }

  const auto proposal = propose(belief, scenario, j, options.policy);
  if (!proposal) return std::nullopt;

  const Task& t = task_of(scenario, j);
  const AlgoConstants& c = scenario.constants;
  Scalar own_terms = 0.0;
  if (options.policy == CoalitionPolicy::Multi) {
    auto shortfall = [](Scalar demand, Scalar given) {
      const Scalar left = demand - given;
      return left > kTolerance ? left : 0.0;
    };
    own_terms = c.alpha * shortfall(t.demand_a, proposal->alloc_a.sum()) +
                c.beta * shortfall(t.demand_b, proposal->alloc_b.sum());
  }

  const auto base = chain(belief, scenario, belief.route, options.policy);
  const Hypothesis hyp{j, proposal->evicted, &proposal->alloc_a, &proposal->alloc_b};

  std::optional<Bid> best;
  const auto size = static_cast<Index>(belief.route.size());
  for (Index pos = first_open_position(belief); pos <= size; ++pos) {
    std::vector<RouteStop> route = belief.route;
    route.insert(route.begin() + pos, RouteStop{j, false});
    const auto arrivals = chain(belief, scenario, route, options.policy, &hyp);
    const Scalar arrive = arrivals[static_cast<std::size_t>(pos)];
    if (!std::isfinite(arrive) || arrive >= c.big_n) continue;

    // Nothing already promised may be pushed later.
    bool delays = false;
    Scalar shift = 0.0;
    for (Index idx = pos; idx < size; ++idx) {
      const Scalar before = base[static_cast<std::size_t>(idx)];
      const Scalar after = arrivals[static_cast<std::size_t>(idx + 1)];
      const Scalar promised = promised_time(belief, scenario, belief.route[static_cast<std::size_t>(idx)], before);
      if (after > promised + kTolerance || (std::isinf(after) && !std::isinf(promised))) {
        delays = true;
        break;
      }
      if (!belief.route[static_cast<std::size_t>(idx)].ghost && std::isfinite(before)) shift += after - before;
    }
    if (delays) continue;

    if (proposal->replaces) {
      const Scalar displaced = belief.times(j, proposal->evicted);
      if (!(arrive < displaced - kTolerance)) continue;
      if (options.policy == CoalitionPolicy::Multi &&
          !(own_start(belief, scenario, j, arrive, options.policy, &hyp) < proposal->old_start - kTolerance))
        continue;
    }

    const Scalar cost = own_terms + arrive + shift;
    if (cost >= c.big_c) continue;
    if (!best || cost < best->cost) {
      best = Bid{j, cost, pos, arrive, proposal->replaces, proposal->evicted, proposal->alloc_a, proposal->alloc_b};
    }
  }
  return best;
}

std::optional<Bid> best_bid(const AgentBelief& belief, const Scenario& scenario, const BuildOptions& options)
{
  // The residual terms in the cost already put unmet tasks first.
  std::optional<Bid> best;
  for (Index j = 0; j < scenario.num_tasks(); ++j) {
    auto bid = marginal_cost(belief, scenario, static_cast<TaskId>(j), options);
    if (bid && (!best || bid->cost < best->cost)) best = std::move(bid);
  }
  return best;
}

void apply_bid(AgentBelief& belief, const Scenario& scenario, const Bid& bid, Round now, const BuildOptions& options)
{
  const TaskId j = bid.task;
  const RobotId self = belief.self_id;
  if (bid.top_up) {
    if (bid.evicted >= 0) {
      belief.times(j, bid.evicted) = kNoArrival;
      belief.sync_winners(scenario.constants.big_n);
    }
    belief.alloc_a.row(j) = bid.alloc_a.transpose();
    belief.alloc_b.row(j) = bid.alloc_b.transpose();
    belief.timestamps(j) = now;
    belief.reserved_a(j) =
      options.stale_guard ? std::max(belief.reserved_a(j), belief.alloc_a(j, self)) : belief.alloc_a(j, self);
    return;
  }
  if (bid.evicted >= 0) belief.times(j, bid.evicted) = kNoArrival;
  belief.alloc_a.row(j) = bid.alloc_a.transpose();
  belief.alloc_b.row(j) = bid.alloc_b.transpose();
  belief.times(j, self) = bid.arrival;
  belief.timestamps(j) = now;
  belief.route.insert(belief.route.begin() + bid.insert_pos, RouteStop{j, false});
  belief.bundle.push_back(j);
  belief.sync_winners(scenario.constants.big_n);
  belief.sync_path();
  belief.reserved_a(j) =
    options.stale_guard ? std::max(belief.reserved_a(j), belief.alloc_a(j, self)) : belief.alloc_a(j, self);
}

bool refresh(AgentBelief& belief, const Scenario& scenario, Round now, const BuildOptions& options)
{
  const RobotId self = belief.self_id;
  belief.sync_winners(scenario.constants.big_n);
  bool changed = reconcile_route(belief, options.stale_guard);

  if (options.stale_guard)
    belief.reserved_a = belief.reserved_a.cwiseMax(belief.alloc_a.col(self));
  else
    belief.reserved_a = belief.alloc_a.col(self);

  const auto arrivals = chain(belief, scenario, belief.route, options.policy);
  for (std::size_t idx = 0; idx < belief.route.size(); ++idx) {
    const RouteStop& stop = belief.route[idx];
    if (stop.ghost || belief.locked(stop.task)) continue;
    const Scalar arrive = arrivals[idx];
    if (!std::isfinite(arrive) || arrive >= scenario.constants.big_n) continue;
    // An unmet row has no start to improve; its published time stays as
    // slack for later insertions ahead of it.
    const Scalar published = belief.times(stop.task, self);
    if (options.policy == CoalitionPolicy::Multi && published >= 0.0 && arrive <= published + kTolerance &&
        !demand_met(belief, scenario, stop.task))
      continue;
    if (std::abs(arrive - published) > kTolerance) {
      belief.times(stop.task, self) = arrive;
      belief.timestamps(stop.task) = now;
      changed = true;
    }
  }
  return changed;
}

bool build_bundle(AgentBelief& belief, const Scenario& scenario, Round now, const BuildOptions& options)
{
  bool changed = refresh(belief, scenario, now, options);
  for (Index guard = 0; guard <= scenario.num_tasks(); ++guard) {
    const auto bid = best_bid(belief, scenario, options);
    if (!bid) break;
    apply_bid(belief, scenario, *bid, now, options);
    changed = true;
  }
  if (changed) refresh(belief, scenario, now, options);
  return changed;
}

bool release_stale_guard(AgentBelief& belief)
{
  const auto ghosts = std::erase_if(belief.route, [](const RouteStop& s) { return s.ghost; });
  const Vector held = belief.alloc_a.col(belief.self_id);
  const bool freed = ((belief.reserved_a - held).array() > kTolerance).any();
  belief.reserved_a = held;
  belief.sync_path();
  return ghosts > 0 || freed;
}

bool clear_partial_rows(AgentBelief& belief, const Scenario& scenario, Round now)
{
  std::vector<TaskId> partial;
  std::vector<TaskId> doomed;
  for (Index j = 0; j < scenario.num_tasks(); ++j) {
    const auto id = static_cast<TaskId>(j);
    if (!belief.visible(j) || belief.locked(j) || !belief.winners.row(j).any()) continue;
    if (demand_met(belief, scenario, id)) continue;
    (hopeless(belief, scenario, id) ? doomed : partial).push_back(id);
  }
  if (partial.size() >= 2) {
    const auto keep = std::min_element(partial.begin(), partial.end(), [&](TaskId x, TaskId y) {
      const Scalar wx = weighted_residual(belief, scenario, x);
      const Scalar wy = weighted_residual(belief, scenario, y);
      return wx < wy - kTolerance || (approx_equal(wx, wy) && x < y);
    });
    partial.erase(keep);
    doomed.insert(doomed.end(), partial.begin(), partial.end());
  }
  if (doomed.empty()) return false;
  for (TaskId j : doomed) {
    belief.times.row(j).setConstant(kNoArrival);
    belief.alloc_a.row(j).setZero();
    belief.alloc_b.row(j).setZero();
    belief.timestamps(j) = now;
  }
  belief.sync_winners(scenario.constants.big_n);
  reconcile_route(belief, false);
  belief.reserved_a = belief.alloc_a.col(belief.self_id);
  return true;
}

} // namespace cbpa
