#include "cbpa/baselines.hpp"

#include "cbpa/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cbpa;

TEST(Auction, SingleRobotSingleTaskMatchesEngine)
{
  Scenario s;
  s.robots = {Robot{0, Point(0, 0), 5.0, 10.0, 1.0}};
  Task t;
  t.position = Point(60, 80);
  t.demand_a = 4;
  t.demand_b = 1;
  s.tasks = {t};
  s.topology = make_topology(TopologyKind::Complete, 1);
  const AllocationResult a = run_auction(s);
  const AllocationResult c = run(s);
  EXPECT_TRUE(a.converged);
  EXPECT_EQ(a.start_times, c.start_times);
  EXPECT_EQ(a.consensus().alloc_a, c.consensus().alloc_a);
  EXPECT_EQ(a.consensus().alloc_b, c.consensus().alloc_b);
}

TEST(Auction, Case1NeedsMoreIterations)
{
  const Scenario s = case1_scenario();
  const AllocationResult a = run_auction(s);
  const AllocationResult c = run(s);
  ASSERT_TRUE(a.converged && c.converged);
  EXPECT_GT(a.rounds_to_converge, c.rounds_to_converge);
  EXPECT_TRUE(a.unassigned.empty());
  EXPECT_TRUE(check_constraints(std::span(&a.consensus(), 1), s).empty());
}

TEST(Auction, NoTasks)
{
  Scenario s = case1_scenario();
  s.tasks.clear();
  const AllocationResult a = run_auction(s);
  EXPECT_TRUE(a.converged);
  EXPECT_EQ(a.rounds_to_converge, 0);
}

TEST(Cbba, SingleRobotCoversDemand)
{
  const Scenario s = case2_scenario(1, 5);
  const AllocationResult r = run_cbba_single(s);
  ASSERT_TRUE(r.converged);
  EXPECT_DOUBLE_EQ(residual_demand(r.consensus(), s, 0, PayloadKind::A), 0.0);
}

TEST(Cbba, OverloadedFleetCoversAtMostFifteen)
{
  const Scenario s = case2_scenario(20, 9);
  const AllocationResult r = run_cbba_single(s);
  ASSERT_TRUE(r.converged);
  const AgentBelief& b = r.consensus();
  int full = 0;
  for (Index j = 0; j < s.num_tasks(); ++j) {
    EXPECT_LE(b.winners.row(j).count(), 1);
    if (residual_demand(b, s, static_cast<TaskId>(j), PayloadKind::A) == 0.0) ++full;
  }
  EXPECT_LE(full, 15);
  EXPECT_TRUE(check_constraints(r.beliefs, s).size() >= 5u);
}

TEST(Cbba, NoTasks)
{
  Scenario s = case2_scenario(10, 1);
  s.tasks.clear();
  const AllocationResult r = run_cbba_single(s);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.start_times.size(), 0);
  EXPECT_TRUE(r.unassigned.empty());
}

namespace {

bool single_robot_satisfiable(const Scenario& s)
{
  for (const Task& t : s.tasks) {
    bool fits = false;
    for (const Robot& r : s.robots) fits = fits || (t.demand_a <= r.payload_a && t.demand_b <= r.payload_b);
    if (!fits) return false;
  }
  return true;
}

// CBPA total gain minus single-robot CBBA total gain.
Scalar gain_margin(const Scenario& s)
{
  const GainParams p = GainParams::from(s.constants);
  return report("cbpa", run(s), s, p).total_gain - report("cbba", run_cbba_single(s), s, p).total_gain;
}

Scenario abundant_scenario(std::uint64_t seed)
{
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> px(0, 2400), py(0, 1500), pay(450, 600), dem(5, 30);
  Scenario s;
  const int robots = std::uniform_int_distribution<int>(3, 6)(g);
  const int tasks = std::uniform_int_distribution<int>(5, 15)(g);
  for (int k = 0; k < robots; ++k) s.robots.push_back(Robot{k, Point(px(g), py(g)), 5.0, std::floor(pay(g)), 0.0});
  for (int j = 0; j < tasks; ++j) {
    Task t;
    t.id = j;
    t.position = Point(px(g), py(g));
    t.demand_a = std::floor(dem(g));
    t.demand_b = 0;
    s.tasks.push_back(t);
  }
  s.topology = make_topology(TopologyKind::RandomConnected, robots, seed);
  return s;
}

} // namespace

class GainsVsCbba : public ::testing::TestWithParam<int>
{};

TEST_P(GainsVsCbba, Case2NoWorseThanSingleRobot)
{
  const int n = GetParam();
  for (int r = 0; r < 20; ++r) {
    const Scenario s = case2_scenario(n, static_cast<std::uint64_t>(1000 * n + r));
    if (!single_robot_satisfiable(s)) continue;
    EXPECT_GE(gain_margin(s), -kTolerance) << "n=" << n << " repeat " << r;
  }
}

INSTANTIATE_TEST_SUITE_P(Tasks, GainsVsCbba, ::testing::Range(10, 16));

TEST(GainsVsCbba, AbundantPayloadNoWorse)
{
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Scenario s = abundant_scenario(seed);
    ASSERT_TRUE(single_robot_satisfiable(s));
    EXPECT_GE(gain_margin(s), -kTolerance) << "seed " << seed;
  }
}
