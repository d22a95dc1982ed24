#include "cbpa/consensus.hpp"

#include <gtest/gtest.h>

using namespace cbpa;

namespace {

Scenario three_robots()
{
  Scenario s;
  for (int k = 0; k < 3; ++k) s.robots.push_back(Robot{k, Point(100.0 * k, 0), 5.0, 20.0, 0.0});
  Task t;
  t.position = Point(500, 500);
  t.demand_a = 8.0;
  s.tasks = {t};
  s.topology = make_topology(TopologyKind::Complete, 3);
  return s;
}

void claim(AgentBelief& b, RobotId k, Scalar time, Scalar a, std::int64_t stamp)
{
  b.times(0, k) = time;
  b.alloc_a(0, k) = a;
  b.timestamps(0) = stamp;
  b.sync_winners(1e6);
}

} // namespace

TEST(Consensus, FreshMessageIsAllSentinel)
{
  const Scenario s = three_robots();
  const AgentBelief b = AgentBelief::fresh(s, 1);
  const ConsensusMessage m = make_message(b);
  EXPECT_EQ(m.sender, 1);
  EXPECT_TRUE((m.times.array() == kNoArrival).all());
  EXPECT_TRUE(m.alloc_a.isZero());
  EXPECT_TRUE(m.alloc_b.isZero());
  EXPECT_EQ(make_message(b), m);
}

TEST(Consensus, IdenticalBeliefsDoNotChange)
{
  const Scenario s = three_robots();
  AgentBelief a = AgentBelief::fresh(s, 0);
  AgentBelief b = AgentBelief::fresh(s, 1);
  claim(a, 0, 55.0, 8.0, 3);
  claim(b, 0, 55.0, 8.0, 3);
  for (auto rule : {UpdateRule::Table, UpdateRule::Ordered}) {
    AgentBelief copy = a;
    EXPECT_FALSE(receive(copy, make_message(b), s, {rule}));
  }
}

TEST(Consensus, EarlierStartIsAdopted)
{
  const Scenario s = three_robots();
  AgentBelief receiver = AgentBelief::fresh(s, 0);
  AgentBelief sender = AgentBelief::fresh(s, 1);
  claim(receiver, 0, 55.0, 8.0, 2);
  claim(sender, 1, 40.0, 8.0, 2);
  for (auto rule : {UpdateRule::Table, UpdateRule::Ordered}) {
    AgentBelief r = receiver;
    EXPECT_TRUE(receive(r, make_message(sender), s, {rule}));
    EXPECT_EQ(r.times.row(0), sender.times.row(0));
    EXPECT_FALSE(r.winners(0, 0));
    EXPECT_TRUE(r.path.empty());
  }
}

TEST(Consensus, TableRuleNeedsNewerStampWhenSenderDoesNotExecute)
{
  const Scenario s = three_robots();
  AgentBelief receiver = AgentBelief::fresh(s, 0);
  AgentBelief sender = AgentBelief::fresh(s, 1);
  claim(receiver, 0, 55.0, 8.0, 5);
  claim(sender, 2, 40.0, 8.0, 3); // sender relays robot 2's older claim
  AgentBelief table = receiver;
  EXPECT_FALSE(receive(table, make_message(sender), s, {UpdateRule::Table}));
  EXPECT_EQ(table.times(0, 0), 55.0);

  // the ordered rule only looks at the rows themselves
  AgentBelief ordered = receiver;
  EXPECT_TRUE(receive(ordered, make_message(sender), s, {UpdateRule::Ordered}));
  EXPECT_EQ(ordered.times(0, 2), 40.0);
}

TEST(Consensus, MetRowBeatsUnmetRow)
{
  const Scenario s = three_robots();
  AgentBelief receiver = AgentBelief::fresh(s, 0);
  AgentBelief sender = AgentBelief::fresh(s, 1);
  claim(receiver, 0, 30.0, 5.0, 4);
  claim(sender, 1, 90.0, 8.0, 1);
  EXPECT_TRUE(receive(receiver, make_message(sender), s));
  EXPECT_EQ(receiver.alloc_a(0, 1), 8.0);
}

TEST(Consensus, LockedRowsAreNeverOverwritten)
{
  const Scenario s = three_robots();
  AgentBelief receiver = AgentBelief::fresh(s, 0);
  AgentBelief sender = AgentBelief::fresh(s, 1);
  claim(receiver, 0, 55.0, 8.0, 2);
  claim(sender, 1, 40.0, 8.0, 9);
  receiver.locked(0) = true;
  EXPECT_FALSE(receive(receiver, make_message(sender), s));
  EXPECT_EQ(receiver.times(0, 0), 55.0);
}

TEST(Consensus, DimensionMismatchIsAProtocolError)
{
  const Scenario s = three_robots();
  AgentBelief b = AgentBelief::fresh(s, 0);
  ConsensusMessage m = make_message(AgentBelief::fresh(s, 1));
  m.times.conservativeResize(1, 2);
  EXPECT_THROW(receive(b, m, s), ProtocolError);
  ConsensusMessage bad = make_message(AgentBelief::fresh(s, 1));
  bad.sender = 7;
  EXPECT_THROW(receive(b, bad, s), ProtocolError);
}

TEST(Consensus, EncodeDecodeRoundTrip)
{
  const Scenario s = three_robots();
  AgentBelief b = AgentBelief::fresh(s, 2);
  claim(b, 2, 123.456, 7.25, 11);
  b.alloc_b(0, 1) = 0.1;
  const ConsensusMessage m = make_message(b);
  const auto bytes = encode(m);
  EXPECT_EQ(bytes.size(), 8u * (3 + 3 * 3 + 1));
  EXPECT_EQ(decode(bytes), m);
}

TEST(Consensus, TruncatedBytesAreRejected)
{
  const Scenario s = three_robots();
  auto bytes = encode(make_message(AgentBelief::fresh(s, 0)));
  bytes.pop_back();
  EXPECT_THROW(decode(bytes), ProtocolError);
  EXPECT_THROW(decode({1, 2, 3}), ProtocolError);
}
