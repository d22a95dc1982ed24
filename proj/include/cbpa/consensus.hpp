#pragma once

#include "cbpa/belief.hpp"
#include "cbpa/bundle_builder.hpp"
#include "cbpa/scenario.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbpa {

/// What one agent broadcasts to its neighbours after bundle construction.
struct ConsensusMessage
{
  RobotId sender = 0;
  Matrix times;
  Matrix alloc_a;
  Matrix alloc_b;
  StampVector timestamps;

  bool operator==(const ConsensusMessage&) const = default;
};

class ProtocolError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Per-task conflict resolution.
enum class UpdateRule {
  /// The four-case table keyed on whether receiver and sender execute the
  /// task, exactly as tabulated; adopted rows take the newer timestamp.
  Table,
  /// One receiver-independent total order on rows: earlier start, then
  /// smaller weighted shortfall, then newer timestamp, then a fixed content
  /// tie-break. Used by the engine since it cannot livelock.
  Ordered,
};

struct ReceiveOptions
{
  UpdateRule rule = UpdateRule::Ordered;
  CoalitionPolicy policy = CoalitionPolicy::Multi;
  bool stale_guard = false;
};

ConsensusMessage make_message(const AgentBelief& belief);

/// Merges `msg` into `belief` task by task. Returns true when any row (or its
/// timestamp) changed. Throws ProtocolError on a dimension mismatch.
bool receive(AgentBelief& belief, const ConsensusMessage& msg, const Scenario& scenario,
             const ReceiveOptions& options = {});

/// Canonical little-endian encoding: sender, task and robot counts, then
/// times, alloc_a and alloc_b row-major, then timestamps.
std::vector<std::uint8_t> encode(const ConsensusMessage& msg);
ConsensusMessage decode(const std::vector<std::uint8_t>& bytes);

} // namespace cbpa
