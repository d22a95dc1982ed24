#include "cbpa/baselines.hpp"
#include "cbpa/consensus.hpp"
#include "cbpa/engine.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace cbpa;

class RandomScenario : public ::testing::TestWithParam<int>
{};

TEST_P(RandomScenario, EngineInvariants)
{
  const Scenario s = testkit::random_scenario(static_cast<std::uint64_t>(GetParam()) + 5000);
  EngineOptions opt;
  opt.record_trace = true;
  const AllocationResult r = run(s, opt);
  ASSERT_TRUE(r.converged);

  // every agent agrees and nobody gives away more than it carries
  EXPECT_TRUE(testkit::without(check_constraints(r.beliefs, s), "demand.undersupplied").empty());
  EXPECT_TRUE(testkit::coverable_but_unmet(r, s).empty());
  if (testkit::fully_coverable(s)) EXPECT_TRUE(r.unassigned.empty());
  EXPECT_EQ(testkit::dmg_violations(r), 0);

  // started tasks are exactly the met ones, and start at the latest member arrival
  const AgentBelief& b = r.consensus();
  for (Index j = 0; j < s.num_tasks(); ++j) {
    const auto id = static_cast<TaskId>(j);
    if (std::isfinite(r.start_times(j))) {
      EXPECT_TRUE(demand_met(b, s, id));
      EXPECT_DOUBLE_EQ(r.start_times(j), task_start_time(b, s, id));
    }
    for (Index k = 0; k < s.num_robots(); ++k)
      if (!b.winners(j, k)) {
        EXPECT_EQ(b.alloc_a(j, k), 0.0);
        EXPECT_EQ(b.alloc_b(j, k), 0.0);
      }
  }

  // each robot's own path is time-ordered and reachable
  for (Index k = 0; k < s.num_robots(); ++k) {
    const TaskList& path = r.paths[static_cast<std::size_t>(k)];
    Point at = s.robots[static_cast<std::size_t>(k)].position;
    Scalar free_at = 0.0;
    for (TaskId j : path) {
      const Task& t = s.tasks[static_cast<std::size_t>(j)];
      const Scalar earliest = free_at + distance(at, t.position) / s.robots[static_cast<std::size_t>(k)].velocity;
      EXPECT_GE(b.times(j, k), earliest - 1e-6);
      at = t.position;
      free_at = std::isfinite(r.start_times(j)) ? r.start_times(j) + t.duration : kInfinity;
    }
  }
}

TEST_P(RandomScenario, CompleteGraphIsFast)
{
  Scenario s = testkit::random_scenario(static_cast<std::uint64_t>(GetParam()) + 7000);
  s.topology = make_topology(TopologyKind::Complete, static_cast<int>(s.num_robots()));
  const AllocationResult r = run(s);
  ASSERT_TRUE(r.converged);
  EXPECT_LE(r.rounds_to_converge, 3 * s.num_tasks());
}

TEST_P(RandomScenario, BaselinesStayFeasible)
{
  const Scenario s = testkit::random_scenario(static_cast<std::uint64_t>(GetParam()) + 9000);
  const AllocationResult a = run_auction(s);
  ASSERT_TRUE(a.converged);
  EXPECT_TRUE(testkit::without(check_constraints(std::span(&a.consensus(), 1), s), "demand.undersupplied").empty());
  const AllocationResult c = run_cbba_single(s);
  ASSERT_TRUE(c.converged);
  for (Index j = 0; j < s.num_tasks(); ++j) EXPECT_LE(c.consensus().winners.row(j).count(), 1);
}

TEST_P(RandomScenario, MessagesRoundTrip)
{
  const Scenario s = testkit::random_scenario(static_cast<std::uint64_t>(GetParam()) + 11000);
  const AllocationResult r = run(s);
  for (const AgentBelief& b : r.beliefs) {
    const ConsensusMessage m = make_message(b);
    EXPECT_EQ(decode(encode(m)), m);
  }
}

TEST_P(RandomScenario, RunsAreDeterministic)
{
  const Scenario s = testkit::random_scenario(static_cast<std::uint64_t>(GetParam()) + 13000);
  const AllocationResult a = run(s);
  const AllocationResult b = run(s);
  EXPECT_EQ(a.start_times, b.start_times);
  EXPECT_EQ(a.rounds_to_converge, b.rounds_to_converge);
  for (std::size_t k = 0; k < a.beliefs.size(); ++k) EXPECT_TRUE(a.beliefs[k].same_rows(b.beliefs[k]));
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomScenario, ::testing::Range(0, 40));
