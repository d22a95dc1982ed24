#pragma once

#include "cbpa/belief.hpp"
#include "cbpa/engine.hpp"
#include "cbpa/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace cbpa::testkit {

/// 2..8 robots, 3..15 tasks on a 2400 x 1500 field, integer payloads, random
/// connected topology. Deterministic in `seed`.
inline Scenario random_scenario(std::uint64_t seed)
{
  std::mt19937_64 g(seed);
  std::uniform_int_distribution<int> robots(2, 8), tasks(3, 15);
  std::uniform_real_distribution<double> px(0, 2400), py(0, 1500);
  auto draw = [&g](int lo, int hi) { return static_cast<Scalar>(std::uniform_int_distribution<int>(lo, hi)(g)); };

  Scenario s;
  s.seed = seed;
  const int nr = robots(g), nt = tasks(g);
  for (int k = 0; k < nr; ++k) {
    Robot r;
    r.id = k;
    r.position = {px(g), py(g)};
    r.payload_a = draw(0, 30);
    r.payload_b = draw(0, 3);
    s.robots.push_back(r);
  }
  for (int j = 0; j < nt; ++j) {
    Task t;
    t.id = j;
    t.position = {px(g), py(g)};
    t.demand_a = draw(0, 10);
    t.demand_b = draw(1, 3);
    s.tasks.push_back(t);
  }
  s.topology = make_topology(TopologyKind::RandomConnected, nr, seed);
  return s;
}

/// Fleet totals cover the summed A demand and every single B demand.
inline bool fully_coverable(const Scenario& s)
{
  Scalar pa = 0, pb = 0, da = 0;
  for (const Robot& r : s.robots) {
    pa += r.payload_a;
    pb += r.payload_b;
  }
  for (const Task& t : s.tasks) {
    da += t.demand_a;
    if (t.demand_b > pb + kTolerance) return false;
  }
  return da <= pa + kTolerance;
}

/// Unstarted tasks that the payload still free in the fleet could have met.
inline std::vector<TaskId> coverable_but_unmet(const AllocationResult& r, const Scenario& s)
{
  const AgentBelief& b = r.consensus();
  Scalar free_a = 0, fleet_b = 0;
  for (Index k = 0; k < s.num_robots(); ++k) {
    free_a += remaining_a(b, s, static_cast<RobotId>(k));
    fleet_b += s.robots[static_cast<std::size_t>(k)].payload_b;
  }
  std::vector<TaskId> out;
  for (const Task& t : s.tasks)
    if (std::isinf(r.start_times(t.id)) && t.demand_a <= free_a + kTolerance && t.demand_b <= fleet_b + kTolerance)
      out.push_back(t.id);
  return out;
}

inline std::vector<Violation> without(std::vector<Violation> v, const std::string& code)
{
  v.erase(std::remove_if(v.begin(), v.end(), [&](const Violation& x) { return x.code == code; }), v.end());
  return v;
}

/// Once an agent sees a finite start for a task, its (residual, start) pair
/// must never increase lexicographically from round to round.
inline int dmg_violations(const AllocationResult& r)
{
  int bad = 0;
  if (r.trace.empty()) return 0;
  const std::size_t agents = r.trace.front().starts.size();
  const Index nt = r.trace.front().starts.front().size();
  for (std::size_t k = 0; k < agents; ++k)
    for (Index j = 0; j < nt; ++j) {
      bool finite = false;
      Scalar pm = 0, pt = kInfinity;
      for (const RoundTrace& t : r.trace) {
        const Scalar m = t.residuals[k](j), tau = t.starts[k](j);
        if (finite && (m > pm + kTolerance || (std::abs(m - pm) <= kTolerance && tau > pt + kTolerance))) ++bad;
        if (std::isfinite(tau)) finite = true;
        if (finite) {
          pm = m;
          pt = tau;
        }
      }
    }
  return bad;
}

/// Water-filling by construction: every member gets min(remaining, level),
/// with the level found by walking the sorted remainings.
inline std::vector<double> water_fill(const std::vector<bool>& members, const std::vector<double>& remaining,
                                      double demand)
{
  std::vector<double> caps;
  for (std::size_t k = 0; k < remaining.size(); ++k)
    if (members[k]) caps.push_back(remaining[k]);
  std::vector<double> out(remaining.size(), 0.0);
  double total = 0;
  for (double c : caps) total += c;
  if (total <= demand) {
    for (std::size_t k = 0; k < remaining.size(); ++k)
      if (members[k]) out[k] = remaining[k];
    return out;
  }
  std::sort(caps.begin(), caps.end());
  double left = demand, level = 0;
  for (std::size_t i = 0; i < caps.size(); ++i) {
    const double share = left / static_cast<double>(caps.size() - i);
    if (caps[i] >= share) {
      level = share;
      break;
    }
    left -= caps[i];
  }
  for (std::size_t k = 0; k < remaining.size(); ++k)
    if (members[k]) out[k] = std::min(remaining[k], level);
  return out;
}

} // namespace cbpa::testkit
