#pragma once

#include "cbpa/types.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace cbpa {

enum class TopologyKind { Complete, Line, Ring, RandomConnected };

std::optional<TopologyKind> parse_topology_kind(std::string_view name);
std::string_view to_string(TopologyKind kind);

/// Undirected communication graph over the robots.
struct Topology
{
  BoolMatrix adjacency;

  Index size() const { return adjacency.rows(); }
  bool linked(RobotId a, RobotId b) const { return adjacency(a, b); }

  /// Neighbours of `robot` in ascending id order.
  std::vector<RobotId> neighbours(RobotId robot) const;

  bool is_symmetric() const;
  bool is_connected() const;
  bool is_complete() const;

  /// Longest shortest-path hop count; -1 when disconnected.
  int diameter() const;

  bool operator==(const Topology& other) const { return adjacency == other.adjacency; }
};

/// Builds a symmetric, connected topology of the given family. The random
/// family grows a random spanning tree and then adds extra edges, both drawn
/// from `seed`.
Topology make_topology(TopologyKind kind, int n, std::uint64_t seed = 0);

/// Recognises the named families so a scenario file can refer to them.
std::optional<TopologyKind> classify(const Topology& topology);

} // namespace cbpa
