#include "cbpa/payload_alloc.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace cbpa;

namespace {

Vector alloc(std::initializer_list<bool> w, std::initializer_list<double> r, double demand)
{
  BoolVector winners(static_cast<Index>(w.size()));
  Vector remaining(static_cast<Index>(r.size()));
  Index i = 0;
  for (bool b : w) winners(i++) = b;
  i = 0;
  for (double x : r) remaining(i++) = x;
  return allocate_average(winners, remaining, demand);
}

} // namespace

TEST(AllocateAverage, SymmetricSplit) { EXPECT_EQ(alloc({true, true}, {10, 10}, 8), Vector::Constant(2, 4.0)); }

TEST(AllocateAverage, SaturatedMemberFrozen)
{
  const Vector v = alloc({true, true}, {3, 10}, 8);
  EXPECT_DOUBLE_EQ(v(0), 3.0);
  EXPECT_DOUBLE_EQ(v(1), 5.0);
}

TEST(AllocateAverage, InsufficientCoalitionGivesEverything)
{
  const Vector v = alloc({true, true}, {2, 3}, 8);
  EXPECT_DOUBLE_EQ(v(0), 2.0);
  EXPECT_DOUBLE_EQ(v(1), 3.0);
}

TEST(AllocateAverage, NoWinners) { EXPECT_TRUE(alloc({false, false, false}, {5, 5, 5}, 8).isZero()); }

TEST(AllocateAverage, NonWinnersGetNothing)
{
  const Vector v = alloc({true, false, true}, {10, 10, 10}, 6);
  EXPECT_DOUBLE_EQ(v(0), 3.0);
  EXPECT_DOUBLE_EQ(v(1), 0.0);
  EXPECT_DOUBLE_EQ(v(2), 3.0);
}

TEST(AllocateAverage, RejectsNegativeInputs)
{
  EXPECT_THROW(alloc({true}, {5}, -1), std::invalid_argument);
  EXPECT_THROW(alloc({true, true}, {5, -1}, 3), std::invalid_argument);
}

TEST(AllocateAverage, MatchesWaterFillingOnSmallGrid)
{
  // the acceptance binary runs the full grid; this is a quick slice
  for (int a = 0; a <= 10; a += 3)
    for (int b = 0; b <= 10; b += 2)
      for (int c = 0; c <= 10; c += 5)
        for (int d = 0; d <= 20; d += 3) {
          const std::vector<double> rem{double(a), double(b), double(c)};
          const std::vector<bool> members{true, true, true};
          const auto expect = testkit::water_fill(members, rem, d);
          const Vector got = allocate_average(BoolVector::Constant(3, true), Vector::Map(rem.data(), 3), double(d));
          for (int k = 0; k < 3; ++k) EXPECT_NEAR(got(k), expect[static_cast<std::size_t>(k)], 1e-9);
        }
}

TEST(AllocateAverage, PropertiesOnRandomInputs)
{
  std::mt19937_64 g(17);
  std::uniform_real_distribution<double> u(0, 20);
  for (int trial = 0; trial < 2000; ++trial) {
    const Index n = 1 + static_cast<Index>(g() % 6);
    BoolVector w(n);
    Vector r(n);
    for (Index k = 0; k < n; ++k) {
      w(k) = g() % 3 != 0;
      r(k) = u(g);
    }
    const double demand = u(g) * 2;
    const Vector x = allocate_average(w, r, demand);
    double coalition = 0;
    for (Index k = 0; k < n; ++k) {
      EXPECT_GE(x(k), 0.0);
      EXPECT_LE(x(k), r(k) + 1e-12);
      if (!w(k)) EXPECT_EQ(x(k), 0.0);
      if (w(k)) coalition += r(k);
    }
    EXPECT_NEAR(x.sum(), std::min(demand, coalition), 1e-9);
  }
}
