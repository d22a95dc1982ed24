#include "cbpa/topology.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>

namespace cbpa {

std::optional<TopologyKind> parse_topology_kind(std::string_view name)
{
  if (name == "complete") return TopologyKind::Complete;
  if (name == "line") return TopologyKind::Line;
  if (name == "ring") return TopologyKind::Ring;
  if (name == "random-connected") return TopologyKind::RandomConnected;
  return std::nullopt;
}

std::string_view to_string(TopologyKind kind)
{
  switch (kind) {
    case TopologyKind::Complete: return "complete";
    case TopologyKind::Line: return "line";
    case TopologyKind::Ring: return "ring";
    case TopologyKind::RandomConnected: return "random-connected";
  }
  return "unknown";
}

std::vector<RobotId> Topology::neighbours(RobotId robot) const
{
  std::vector<RobotId> out;
  for (Index k = 0; k < size(); ++k)
    if (k != robot && adjacency(robot, k)) out.push_back(static_cast<RobotId>(k));
  return out;
}

bool Topology::is_symmetric() const
{
  return adjacency.rows() == adjacency.cols() && adjacency == adjacency.transpose();
}

namespace {

std::vector<int> hop_distances(const BoolMatrix& adj, Index source)
{
  std::vector<int> dist(static_cast<std::size_t>(adj.rows()), -1);
  std::queue<Index> frontier;
  dist[static_cast<std::size_t>(source)] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const Index at = frontier.front();
    frontier.pop();
    for (Index k = 0; k < adj.cols(); ++k) {
      if (k == at || !adj(at, k) || dist[static_cast<std::size_t>(k)] >= 0) continue;
      dist[static_cast<std::size_t>(k)] = dist[static_cast<std::size_t>(at)] + 1;
      frontier.push(k);
    }
  }
  return dist;
}

} // namespace

bool Topology::is_connected() const { return diameter() >= 0; }

bool Topology::is_complete() const
{
  for (Index a = 0; a < size(); ++a)
    for (Index b = 0; b < size(); ++b)
      if (a != b && !adjacency(a, b)) return false;
  return true;
}

int Topology::diameter() const
{
  int worst = 0;
  for (Index s = 0; s < size(); ++s) {
    for (int d : hop_distances(adjacency, s)) {
      if (d < 0) return -1;
      worst = std::max(worst, d);
    }
  }
  return worst;
}

Topology make_topology(TopologyKind kind, int n, std::uint64_t seed)
{
  if (n < 1) throw std::invalid_argument("make_topology: n must be >= 1");
  BoolMatrix adj = BoolMatrix::Constant(n, n, false);
  auto link = [&adj](Index a, Index b) {
    adj(a, b) = true;
    adj(b, a) = true;
  };

  switch (kind) {
    case TopologyKind::Complete:
      adj.setConstant(true);
      break;
    case TopologyKind::Line:
      for (Index k = 0; k + 1 < n; ++k) link(k, k + 1);
      break;
    case TopologyKind::Ring:
      for (Index k = 0; k + 1 < n; ++k) link(k, k + 1);
      if (n > 2) link(n - 1, 0);
      break;
    case TopologyKind::RandomConnected: {
      std::mt19937_64 rng(seed);
      std::vector<Index> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), Index{0});
      std::shuffle(order.begin(), order.end(), rng);
      // random recursive tree: each new node hooks onto an earlier one
      for (std::size_t k = 1; k < order.size(); ++k) {
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        link(order[k], order[pick(rng)]);
      }
      std::bernoulli_distribution extra(0.2);
      for (Index a = 0; a < n; ++a)
        for (Index b = a + 1; b < n; ++b)
          if (extra(rng)) link(a, b);
      break;
    }
  }
  adj.diagonal().setConstant(false);
  return Topology{adj};
}

std::optional<TopologyKind> classify(const Topology& topology)
{
  const int n = static_cast<int>(topology.size());
  if (n == 0) return std::nullopt;
  for (auto kind : {TopologyKind::Complete, TopologyKind::Line, TopologyKind::Ring})
    if (make_topology(kind, n) == topology) return kind;
  return std::nullopt;
}

} // namespace cbpa
