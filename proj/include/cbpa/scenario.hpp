#pragma once

#include "cbpa/topology.hpp"
#include "cbpa/types.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cbpa {

struct Robot
{
  RobotId id = 0;
  Point position = Point::Zero();
  Scalar velocity = 5.0;   ///< m/s
  Scalar payload_a = 0.0;  ///< consumable
  Scalar payload_b = 0.0;  ///< non-consumable

  Scalar payload(PayloadKind kind) const { return kind == PayloadKind::A ? payload_a : payload_b; }
  bool operator==(const Robot&) const = default;
};

struct Task
{
  TaskId id = 0;
  Point position = Point::Zero();
  Scalar duration = 10.0;  ///< s
  Scalar demand_a = 0.0;
  Scalar demand_b = 0.0;
  Scalar announce_time = 0.0;  ///< 0 for tasks known up front

  Scalar demand(PayloadKind kind) const { return kind == PayloadKind::A ? demand_a : demand_b; }
  bool operator==(const Task&) const = default;
};

struct AlgoConstants
{
  Scalar alpha = 1e4;  ///< weight on residual payload-A demand
  Scalar beta = 1e4;   ///< weight on residual payload-B demand
  Scalar big_n = 1e6;  ///< arrival times at or above this are not bids
  Scalar big_c = 1e9;  ///< cost of an ineligible bid
  Scalar lambda = 0.0; ///< time discount used by the gain metric
  Scalar static_gain = 100.0;
  int max_rounds = 0;  ///< 0 selects 10 * tasks * robots

  bool operator==(const AlgoConstants&) const = default;
};

struct Scenario
{
  std::vector<Robot> robots;
  std::vector<Task> tasks;
  Topology topology;
  AlgoConstants constants;
  std::uint64_t seed = 0;

  Index num_robots() const { return static_cast<Index>(robots.size()); }
  Index num_tasks() const { return static_cast<Index>(tasks.size()); }
  int max_rounds() const;

  bool operator==(const Scenario&) const = default;
};

/// Euclidean distance in the plane.
inline Scalar distance(const Point& a, const Point& b) { return (a - b).norm(); }

/// Every invariant violation of `scenario`; empty iff well formed.
std::vector<Violation> validate(const Scenario& scenario);

/// Thrown by loading/running when a scenario is malformed or invalid.
class ScenarioError : public std::runtime_error
{
public:
  ScenarioError(const std::string& what, std::vector<Violation> violations = {})
    : std::runtime_error(what), violations_(std::move(violations))
  {}
  const std::vector<Violation>& violations() const { return violations_; }

private:
  std::vector<Violation> violations_;
};

/// Throws ScenarioError listing every violation.
void require_valid(const Scenario& scenario);

Scenario case1_scenario();
Scenario case1_dynamic_scenario(std::uint64_t seed = 2024);
Scenario case2_scenario(int n_tasks, std::uint64_t seed);

/// Scenario for a named preset ("case1", "case1-dynamic", "case2").
Scenario preset_scenario(std::string_view name, std::uint64_t seed, int n_tasks = 15);

Scenario load_scenario(std::string_view text);
std::string save_scenario(const Scenario& scenario);
Scenario load_scenario_file(const std::string& path);

} // namespace cbpa
