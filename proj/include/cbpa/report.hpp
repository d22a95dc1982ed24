#pragma once

#include "cbpa/engine.hpp"
#include "cbpa/metrics.hpp"
#include "cbpa/scenario.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace cbpa {

/// Six significant digits, "inf" for infinity.
std::string format_number(Scalar value);

/// Per task: id, winners, allocations per kind, start time, gain.
void write_result_csv(std::ostream& out, const AllocationResult& result, const Scenario& scenario,
                      const GainParams& params);

/// Per robot and stop: robot, order, task, arrival.
void write_paths_csv(std::ostream& out, const AllocationResult& result, const Scenario& scenario);

/// One row per allocator.
void write_summary_csv(std::ostream& out, const std::vector<MetricsReport>& rows);

struct SweepRow
{
  int n_tasks = 0;
  Scalar mean_gain_cbpa = 0.0;
  Scalar std_gain_cbpa = 0.0;
  Scalar mean_gain_cbba = 0.0;
  Scalar std_gain_cbba = 0.0;
  int unconverged = 0;
};

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Task timeline: one bar per started task from its start time over its
/// duration, labelled with the executing robots.
void write_schedule_svg(std::ostream& out, const AllocationResult& result, const Scenario& scenario);

/// Robot routes over the task field.
void write_paths_svg(std::ostream& out, const AllocationResult& result, const Scenario& scenario);

/// Mean total gain per task count, one line per allocator.
void write_gains_svg(std::ostream& out, const std::vector<SweepRow>& rows);

} // namespace cbpa
