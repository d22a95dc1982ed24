#include "cbpa/topology.hpp"

#include <gtest/gtest.h>

using namespace cbpa;

TEST(Topology, CompleteHasEveryOffDiagonalEdge)
{
  const Topology t = make_topology(TopologyKind::Complete, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) EXPECT_EQ(t.linked(a, b), a != b);
  EXPECT_EQ(t.diameter(), 1);
  EXPECT_EQ(classify(t), TopologyKind::Complete);
}

TEST(Topology, LineEdgesOnly)
{
  const Topology t = make_topology(TopologyKind::Line, 4);
  int edges = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (t.linked(a, b)) {
        ++edges;
        EXPECT_EQ(b, a + 1);
      }
  EXPECT_EQ(edges, 3);
  EXPECT_EQ(t.diameter(), 3);
  EXPECT_EQ(t.neighbours(1), (std::vector<RobotId>{0, 2}));
}

TEST(Topology, RingDiameter)
{
  EXPECT_EQ(make_topology(TopologyKind::Ring, 6).diameter(), 3);
}

TEST(Topology, RandomConnectedIsConnectedAndSymmetric)
{
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    for (int n : {1, 2, 5, 9}) {
      const Topology t = make_topology(TopologyKind::RandomConnected, n, seed);
      EXPECT_TRUE(t.is_connected());
      EXPECT_TRUE(t.is_symmetric());
      for (int k = 0; k < n; ++k) EXPECT_FALSE(t.linked(k, k));
    }
}

TEST(Topology, DisconnectedDiameter)
{
  Topology t;
  t.adjacency = BoolMatrix::Constant(4, 4, false);
  t.adjacency(0, 1) = t.adjacency(1, 0) = true;
  t.adjacency(2, 3) = t.adjacency(3, 2) = true;
  EXPECT_FALSE(t.is_connected());
  EXPECT_EQ(t.diameter(), -1);
}

TEST(Topology, KindNames)
{
  for (auto kind : {TopologyKind::Complete, TopologyKind::Line, TopologyKind::Ring, TopologyKind::RandomConnected})
    EXPECT_EQ(parse_topology_kind(to_string(kind)), kind);
  EXPECT_FALSE(parse_topology_kind("star").has_value());
}
