#include "cbpa/consensus.hpp"

#include <bit>
#include <cstring>

namespace cbpa {

namespace {

struct RowSummary
{
  Scalar start;
  Scalar shortfall;
  std::int64_t stamp;
};

template <typename TimesRow, typename AllocRow>
RowSummary summarize(const TimesRow& times, const AllocRow& alloc_a, const AllocRow& alloc_b, std::int64_t stamp,
                     const Task& task, const AlgoConstants& c, CoalitionPolicy policy)
{
  auto shortfall = [](Scalar demand, Scalar given) {
    const Scalar left = demand - given;
    return left > kTolerance ? left : 0.0;
  };
  const Scalar m_a = shortfall(task.demand_a, alloc_a.sum());
  const Scalar m_b = shortfall(task.demand_b, alloc_b.sum());
  Scalar start = kInfinity;
  if (policy == CoalitionPolicy::Single || (m_a == 0.0 && m_b == 0.0)) {
    for (Index k = 0; k < times.size(); ++k) {
      if (times(k) < 0.0 || times(k) >= c.big_n) continue;
      start = std::isinf(start) ? times(k) : std::max(start, times(k));
    }
  }
  return RowSummary{start, c.alpha * m_a + c.beta * m_b, stamp};
}

// Negative when `lhs` precedes `rhs` lexicographically.
template <typename A, typename B>
int lexicographic(const A& lhs, const B& rhs)
{
  for (Index k = 0; k < lhs.size(); ++k) {
    if (lhs(k) < rhs(k)) return -1;
    if (rhs(k) < lhs(k)) return 1;
  }
  return 0;
}

bool less_than(Scalar a, Scalar b) { return !approx_equal(a, b) && a < b; }

} // namespace

ConsensusMessage make_message(const AgentBelief& belief)
{
  return ConsensusMessage{belief.self_id, belief.times, belief.alloc_a, belief.alloc_b, belief.timestamps};
}

bool receive(AgentBelief& belief, const ConsensusMessage& msg, const Scenario& scenario, const ReceiveOptions& options)
{
  const Index nt = belief.times.rows();
  const Index nr = belief.times.cols();
  auto fits = [nt, nr](const Matrix& m) { return m.rows() == nt && m.cols() == nr; };
  if (!fits(msg.times) || !fits(msg.alloc_a) || !fits(msg.alloc_b) || msg.timestamps.size() != nt)
    throw ProtocolError("consensus message dimensions do not match the receiver");
  if (msg.sender < 0 || msg.sender >= nr) throw ProtocolError("consensus message sender out of range");

  const RobotId self = belief.self_id;
  const AlgoConstants& c = scenario.constants;
  bool changed = false;

  for (Index j = 0; j < nt; ++j) {
    if (!belief.visible(j) || belief.locked(j)) continue;
    const Task& task = scenario.tasks[static_cast<std::size_t>(j)];
    const RowSummary mine = summarize(belief.times.row(j), belief.alloc_a.row(j), belief.alloc_b.row(j),
                                      belief.timestamps(j), task, c, options.policy);
    const RowSummary theirs =
      summarize(msg.times.row(j), msg.alloc_a.row(j), msg.alloc_b.row(j), msg.timestamps(j), task, c, options.policy);

    bool adopt = false;
    if (options.rule == UpdateRule::Table) {
      const bool i_execute = belief.times(j, self) >= 0.0;
      const bool k_executes = msg.times(j, msg.sender) >= 0.0;
      const bool earlier = less_than(theirs.start, mine.start);
      const bool tie = approx_equal(theirs.start, mine.start) && !less_than(mine.shortfall, theirs.shortfall);
      const bool newer = mine.stamp < theirs.stamp;
      if (!i_execute && !k_executes)
        adopt = newer;
      else if (!i_execute && k_executes)
        adopt = earlier || tie;
      else if (i_execute && !k_executes)
        adopt = (earlier && newer) || (tie && newer);
      else
        adopt = earlier || tie;
    } else {
      int order = 0;
      if (less_than(theirs.start, mine.start))
        order = -1;
      else if (less_than(mine.start, theirs.start))
        order = 1;
      else if (less_than(theirs.shortfall, mine.shortfall))
        order = -1;
      else if (less_than(mine.shortfall, theirs.shortfall))
        order = 1;
      else if (theirs.stamp != mine.stamp)
        order = theirs.stamp > mine.stamp ? -1 : 1;
      else {
        // membership at the lowest robot id first, then raw content
        const auto their_members = (msg.times.row(j).array() >= 0.0).cast<int>().eval();
        const auto my_members = (belief.times.row(j).array() >= 0.0).cast<int>().eval();
        order = -lexicographic(their_members, my_members);
        if (order == 0) order = lexicographic(msg.times.row(j), belief.times.row(j));
        if (order == 0) order = lexicographic(msg.alloc_a.row(j), belief.alloc_a.row(j));
        if (order == 0) order = lexicographic(msg.alloc_b.row(j), belief.alloc_b.row(j));
      }
      adopt = order < 0;
    }
    if (!adopt) continue;

    const std::int64_t stamp =
      options.rule == UpdateRule::Table ? std::max(mine.stamp, theirs.stamp) : theirs.stamp;
    const bool differs = belief.times.row(j) != msg.times.row(j) || belief.alloc_a.row(j) != msg.alloc_a.row(j) ||
                         belief.alloc_b.row(j) != msg.alloc_b.row(j) || belief.timestamps(j) != stamp;
    if (!differs) continue;
    belief.times.row(j) = msg.times.row(j);
    belief.alloc_a.row(j) = msg.alloc_a.row(j);
    belief.alloc_b.row(j) = msg.alloc_b.row(j);
    belief.timestamps(j) = stamp;
    changed = true;
  }

  if (changed) {
    belief.sync_winners(c.big_n);
    reconcile_route(belief, options.stale_guard);
  }
  return changed;
}

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v)
{
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint64_t get_u64(const std::vector<std::uint8_t>& in, std::size_t& at)
{
  if (at + 8 > in.size()) throw ProtocolError("truncated consensus message");
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(in[at + static_cast<std::size_t>(b)]) << (8 * b);
  at += 8;
  return v;
}

} // namespace

std::vector<std::uint8_t> encode(const ConsensusMessage& msg)
{
  std::vector<std::uint8_t> out;
  put_u64(out, static_cast<std::uint64_t>(msg.sender));
  put_u64(out, static_cast<std::uint64_t>(msg.times.rows()));
  put_u64(out, static_cast<std::uint64_t>(msg.times.cols()));
  for (const Matrix* m : {&msg.times, &msg.alloc_a, &msg.alloc_b})
    for (Index j = 0; j < m->rows(); ++j)
      for (Index k = 0; k < m->cols(); ++k) put_u64(out, std::bit_cast<std::uint64_t>((*m)(j, k)));
  for (Index j = 0; j < msg.timestamps.size(); ++j) put_u64(out, static_cast<std::uint64_t>(msg.timestamps(j)));
  return out;
}

ConsensusMessage decode(const std::vector<std::uint8_t>& bytes)
{
  std::size_t at = 0;
  ConsensusMessage msg;
  msg.sender = static_cast<RobotId>(get_u64(bytes, at));
  const auto nt = static_cast<Index>(get_u64(bytes, at));
  const auto nr = static_cast<Index>(get_u64(bytes, at));
  if (nt < 0 || nr < 0 || static_cast<std::size_t>(nt * (3 * nr + 1)) * 8 + at != bytes.size())
    throw ProtocolError("consensus message length does not match its header");
  for (Matrix* m : {&msg.times, &msg.alloc_a, &msg.alloc_b}) {
    m->resize(nt, nr);
    for (Index j = 0; j < nt; ++j)
      for (Index k = 0; k < nr; ++k) (*m)(j, k) = std::bit_cast<Scalar>(get_u64(bytes, at));
  }
  msg.timestamps.resize(nt);
  for (Index j = 0; j < nt; ++j) msg.timestamps(j) = static_cast<std::int64_t>(get_u64(bytes, at));
  return msg;
}

} // namespace cbpa
