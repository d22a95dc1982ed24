#include "cbpa/scenario.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace cbpa;

namespace {

bool has_code(const std::vector<Violation>& v, const std::string& code)
{
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.code == code; });
}

} // namespace

TEST(Scenario, Case1IsValid) { EXPECT_TRUE(validate(case1_scenario()).empty()); }

TEST(Scenario, ZeroVelocityIsReported)
{
  Scenario s = case1_scenario();
  s.robots[2].velocity = 0.0;
  EXPECT_TRUE(has_code(validate(s), "robot.velocity.nonpositive"));
  EXPECT_THROW(require_valid(s), ScenarioError);
}

TEST(Scenario, AsymmetricAdjacencyIsReported)
{
  Scenario s = case1_scenario();
  s.topology = make_topology(TopologyKind::Line, 5);
  s.topology.adjacency(0, 3) = true;
  EXPECT_TRUE(has_code(validate(s), "topology.asymmetric"));
}

TEST(Scenario, Case1Values)
{
  const Scenario s = case1_scenario();
  ASSERT_EQ(s.num_robots(), 5);
  ASSERT_EQ(s.num_tasks(), 10);
  EXPECT_EQ(s.robots[0].position, Point(150, 130));
  EXPECT_EQ(s.robots[0].payload_a, 0.0);
  EXPECT_EQ(s.robots[0].payload_b, 3.0);
  EXPECT_EQ(s.tasks[2].position, Point(2100, 430));
  EXPECT_EQ(s.tasks[2].demand_a, 8.0);
  EXPECT_EQ(s.tasks[2].demand_b, 3.0);
  EXPECT_EQ(s.tasks[9].position, Point(1950, 1280));
  EXPECT_EQ(s.tasks[9].demand_a, 9.0);
  EXPECT_EQ(s.tasks[9].demand_b, 2.0);
}

TEST(Scenario, Case1DynamicHasThreeLateTasks)
{
  const Scenario s = case1_dynamic_scenario();
  ASSERT_EQ(s.num_tasks(), 11);
  EXPECT_EQ(std::count_if(s.tasks.begin(), s.tasks.end(), [](const Task& t) { return t.announce_time == 0.0; }), 8);
  EXPECT_TRUE(validate(s).empty());
  EXPECT_EQ(case1_dynamic_scenario(7), case1_dynamic_scenario(7));
}

TEST(Scenario, Case2Parameters)
{
  const Scenario s = case2_scenario(15, 3);
  EXPECT_EQ(s.num_tasks(), 15);
  for (const Robot& r : s.robots) EXPECT_EQ(r.payload_a, 100.0);
  for (const Task& t : s.tasks) EXPECT_EQ(t.demand_a, 30.0);
  EXPECT_EQ(s.constants.lambda, 0.01);
  EXPECT_EQ(case2_scenario(15, 3), s);
  EXPECT_NE(case2_scenario(15, 4), s);
}

TEST(Scenario, UnknownPresetThrows) { EXPECT_THROW(preset_scenario("case9", 0), ScenarioError); }

TEST(ScenarioIo, RoundTrip)
{
  for (const Scenario& s : {case1_scenario(), case1_dynamic_scenario(11), case2_scenario(12, 5)})
    EXPECT_EQ(load_scenario(save_scenario(s)), s);
}

TEST(ScenarioIo, TruncatedInputFailsToParse)
{
  const std::string text = save_scenario(case1_scenario());
  EXPECT_THROW(load_scenario(text.substr(0, text.size() / 2)), ScenarioError);
}

TEST(ScenarioIo, NegativeDemandIsAValidationError)
{
  Scenario s = case1_scenario();
  s.tasks[4].demand_a = -2.0;
  try {
    load_scenario(save_scenario(s));
    FAIL() << "expected a validation error";
  } catch (const ScenarioError& e) {
    EXPECT_TRUE(has_code(e.violations(), "task.demand.negative"));
  }
}

TEST(ScenarioIo, MissingFile) { EXPECT_THROW(load_scenario_file("/nonexistent/scenario.json"), ScenarioError); }
