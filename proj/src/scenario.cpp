#include "cbpa/scenario.hpp"

#include "random_streams.hpp"

#include <algorithm>
#include <sstream>

namespace cbpa {

int Scenario::max_rounds() const
{
  if (constants.max_rounds > 0) return constants.max_rounds;
  return std::max(1, static_cast<int>(10 * num_tasks() * num_robots()));
}

namespace {

void add(std::vector<Violation>& out, std::string code, const std::string& message)
{
  out.push_back(Violation{std::move(code), message});
}

// Upper bound on any arrival time a robot can be assigned: every task visited
// in sequence across the bounding box at the slowest velocity.
Scalar time_horizon(const Scenario& s)
{
  Point lo = Point::Constant(0.0);
  Point hi = Point::Constant(0.0);
  bool first = true;
  auto grow = [&](const Point& p) {
    if (first) {
      lo = hi = p;
      first = false;
    }
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  };
  Scalar vmin = kInfinity;
  for (const auto& r : s.robots) {
    grow(r.position);
    vmin = std::min(vmin, r.velocity);
  }
  Scalar durations = 0.0;
  Scalar latest_announce = 0.0;
  for (const auto& t : s.tasks) {
    grow(t.position);
    durations += std::max(0.0, t.duration);
    latest_announce = std::max(latest_announce, t.announce_time);
  }
  if (!(vmin > 0.0) || std::isinf(vmin)) return 0.0;
  const Scalar span = (hi - lo).norm();
  return latest_announce + durations + static_cast<Scalar>(s.num_tasks() + 1) * span / vmin;
}

} // namespace

std::vector<Violation> validate(const Scenario& s)
{
  std::vector<Violation> out;
  if (s.robots.empty()) add(out, "robot.none", "scenario has no robots");

  for (std::size_t k = 0; k < s.robots.size(); ++k) {
    const Robot& r = s.robots[k];
    const std::string who = "robot " + std::to_string(k);
    if (r.id != static_cast<RobotId>(k))
      add(out, "robot.id.noncontiguous", who + " has id " + std::to_string(r.id));
    if (!(r.velocity > 0.0) || !std::isfinite(r.velocity))
      add(out, "robot.velocity.nonpositive", who + " velocity must be > 0");
    if (!(r.payload_a >= 0.0) || !(r.payload_b >= 0.0))
      add(out, "robot.payload.negative", who + " payloads must be >= 0");
    if (!r.position.allFinite()) add(out, "robot.position.nonfinite", who + " position must be finite");
  }

  for (std::size_t j = 0; j < s.tasks.size(); ++j) {
    const Task& t = s.tasks[j];
    const std::string what = "task " + std::to_string(j);
    if (t.id != static_cast<TaskId>(j))
      add(out, "task.id.noncontiguous", what + " has id " + std::to_string(t.id));
    if (!(t.demand_a >= 0.0) || !(t.demand_b >= 0.0))
      add(out, "task.demand.negative", what + " demands must be >= 0");
    else if (!(t.demand_a + t.demand_b > 0.0))
      add(out, "task.demand.empty", what + " must demand some payload");
    if (!(t.duration >= 0.0) || !std::isfinite(t.duration))
      add(out, "task.duration.negative", what + " duration must be >= 0");
    if (!(t.announce_time >= 0.0) || !std::isfinite(t.announce_time))
      add(out, "task.announce.negative", what + " announce_time must be >= 0");
    if (!t.position.allFinite()) add(out, "task.position.nonfinite", what + " position must be finite");
  }

  const auto& adj = s.topology.adjacency;
  if (adj.rows() != s.num_robots() || adj.cols() != s.num_robots()) {
    add(out, "topology.dimension", "topology must be " + std::to_string(s.num_robots()) + " square");
  } else {
    if (!s.topology.is_symmetric()) add(out, "topology.asymmetric", "adjacency must be symmetric");
    if (adj.diagonal().any()) add(out, "topology.diagonal", "adjacency diagonal must be false");
  }

  const AlgoConstants& c = s.constants;
  if (!(c.alpha > 0.0)) add(out, "constants.alpha.nonpositive", "alpha must be > 0");
  if (!(c.beta > 0.0)) add(out, "constants.beta.nonpositive", "beta must be > 0");
  if (!(c.lambda >= 0.0)) add(out, "constants.lambda.negative", "lambda must be >= 0");
  if (!(c.static_gain > 0.0)) add(out, "constants.static_gain.nonpositive", "static_gain must be > 0");
  if (c.max_rounds < 0) add(out, "constants.max_rounds.negative", "max_rounds must be >= 0 (0 = default)");

  const Scalar horizon = time_horizon(s);
  if (!(c.big_n > horizon)) {
    std::ostringstream msg;
    msg << "big_n must exceed the arrival-time horizon " << horizon;
    add(out, "constants.big_n.too_small", msg.str());
  }
  Scalar max_a = 0.0, max_b = 0.0;
  for (const auto& t : s.tasks) {
    max_a = std::max(max_a, t.demand_a);
    max_b = std::max(max_b, t.demand_b);
  }
  const Scalar worst_bid = c.alpha * max_a + c.beta * max_b + horizon;
  if (!(c.big_c > worst_bid)) {
    std::ostringstream msg;
    msg << "big_c must exceed the largest feasible marginal cost " << worst_bid;
    add(out, "constants.big_c.too_small", msg.str());
  }
  return out;
}

void require_valid(const Scenario& scenario)
{
  auto violations = validate(scenario);
  if (violations.empty()) return;
  std::string what = "invalid scenario:";
  for (const auto& v : violations) what += " " + v.code + " (" + v.message + ");";
  throw ScenarioError(what, std::move(violations));
}

namespace {

struct TableRow
{
  Scalar x, y, a, b;
};

// Initial robot and task data of the first evaluation case.
constexpr TableRow kCase1Robots[] = {
  {150, 130, 0, 3}, {150, 330, 0, 3}, {150, 700, 30, 3}, {150, 970, 30, 0}, {150, 1270, 25, 0},
};
constexpr TableRow kCase1Tasks[] = {
  {850, 350, 8, 1},   {1450, 550, 6, 2},  {2100, 430, 8, 3},  {740, 820, 7, 3},   {1120, 740, 8, 3},
  {1710, 970, 6, 2},  {2360, 680, 9, 2},  {730, 1260, 10, 3}, {1440, 1020, 8, 2}, {1950, 1280, 9, 2},
};

constexpr Scalar kAreaWidth = 2400.0;
constexpr Scalar kAreaHeight = 1500.0;

Robot make_robot(int id, const TableRow& row)
{
  return Robot{id, Point(row.x, row.y), 5.0, row.a, row.b};
}

Task make_task(int id, const TableRow& row)
{
  Task t;
  t.id = id;
  t.position = Point(row.x, row.y);
  t.demand_a = row.a;
  t.demand_b = row.b;
  return t;
}

Point uniform_point(std::mt19937_64& rng)
{
  std::uniform_real_distribution<Scalar> ux(0.0, kAreaWidth);
  std::uniform_real_distribution<Scalar> uy(0.0, kAreaHeight);
  const Scalar x = ux(rng);
  return Point(x, uy(rng));
}

} // namespace

Scenario case1_scenario()
{
  Scenario s;
  for (int k = 0; k < 5; ++k) s.robots.push_back(make_robot(k, kCase1Robots[k]));
  for (int j = 0; j < 10; ++j) s.tasks.push_back(make_task(j, kCase1Tasks[j]));
  s.topology = make_topology(TopologyKind::Complete, 5);
  s.seed = 0;
  return s;
}

Scenario case1_dynamic_scenario(std::uint64_t seed)
{
  Scenario s;
  for (int k = 0; k < 5; ++k) s.robots.push_back(make_robot(k, kCase1Robots[k]));
  for (int j = 0; j < 8; ++j) s.tasks.push_back(make_task(j, kCase1Tasks[j]));

  // The three late tasks stay within what the fleet has left after tasks 1-8
  // (85 - 62 = 23 strike units), so every one of them is coverable.
  auto placement = substream(seed, Stream::Placement);
  auto injection = substream(seed, Stream::Injection);
  std::uniform_int_distribution<int> strike(1, 7);
  std::uniform_int_distribution<int> recon(1, 3);
  std::uniform_real_distribution<Scalar> when(60.0, 300.0);
  std::vector<Scalar> announce(3);
  for (auto& t : announce) t = std::round(when(injection));
  std::sort(announce.begin(), announce.end());
  for (int k = 0; k < 3; ++k) {
    Task t;
    t.id = 8 + k;
    t.position = uniform_point(placement);
    t.demand_a = strike(placement);
    t.demand_b = recon(placement);
    t.announce_time = announce[static_cast<std::size_t>(k)] + k;  // strictly increasing
    s.tasks.push_back(t);
  }
  s.topology = make_topology(TopologyKind::Complete, 5);
  s.seed = seed;
  return s;
}

Scenario case2_scenario(int n_tasks, std::uint64_t seed)
{
  if (n_tasks < 1) throw std::invalid_argument("case2_scenario: n_tasks must be >= 1");
  Scenario s;
  auto placement = substream(seed, Stream::Placement);
  for (int k = 0; k < 5; ++k) s.robots.push_back(Robot{k, uniform_point(placement), 5.0, 100.0, 0.0});
  for (int j = 0; j < n_tasks; ++j) {
    Task t;
    t.id = j;
    t.position = uniform_point(placement);
    t.demand_a = 30.0;
    s.tasks.push_back(t);
  }
  s.topology = make_topology(TopologyKind::Complete, 5);
  s.constants.lambda = 0.01;
  s.constants.static_gain = 100.0;
  s.seed = seed;
  return s;
}

Scenario preset_scenario(std::string_view name, std::uint64_t seed, int n_tasks)
{
  if (name == "case1") return case1_scenario();
  if (name == "case1-dynamic") return case1_dynamic_scenario(seed);
  if (name == "case2") return case2_scenario(n_tasks, seed);
  throw ScenarioError("unknown preset '" + std::string(name) + "' (expected case1, case1-dynamic or case2)");
}

} // namespace cbpa
