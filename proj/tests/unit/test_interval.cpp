#include <random>

#include <gtest/gtest.h>

#include "robustlu/interval.hpp"

using robustlu::Bounds;
using robustlu::Interval;

namespace {

Interval random_interval(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  const double a = u(rng);
  const double b = u(rng);
  return Interval(std::min(a, b), std::max(a, b));
}

}  // namespace

TEST(Interval, RejectsInvertedEndpoints) {
  EXPECT_THROW(Interval(2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Interval(std::nan(""), 1.0), std::invalid_argument);
  EXPECT_NO_THROW(Interval(1.0, 1.0));
}

TEST(Interval, Add) {
  EXPECT_EQ(Interval(1, 2) + Interval(3, 4), Interval(4, 6));
  EXPECT_EQ(Interval(0, 0) + Interval(-7, 9), Interval(-7, 9));
  EXPECT_EQ(Interval(-1, 1) + Interval(-2, 5), Interval(-3, 6));
}

TEST(Interval, Sub) {
  EXPECT_EQ(Interval(1, 2) - Interval(0, 1), Interval(0, 2));
  EXPECT_EQ(Interval(1, 1) - Interval(1, 1), Interval(0, 0));
  EXPECT_EQ(Interval(3, 5) - Interval(1, 2), Interval(1, 4));
}

TEST(Interval, Scale) {
  EXPECT_EQ(2.0 * Interval(1, 3), Interval(2, 6));
  EXPECT_EQ(-2.0 * Interval(1, 2), Interval(-4, -2));
  EXPECT_EQ(0.0 * Interval(-5, 7), Interval(0, 0));
}

TEST(Interval, Orders) {
  EXPECT_TRUE(leq_lu(Interval(1, 2), Interval(1, 3)));
  EXPECT_FALSE(lt_lu(Interval(1, 2), Interval(1, 2)));
  EXPECT_TRUE(lt_s_lu(Interval(0, 1), Interval(1, 2)));
  EXPECT_TRUE(lt_lu(Interval(1, 2), Interval(1, 3)));
  EXPECT_FALSE(lt_s_lu(Interval(1, 2), Interval(1, 3)));
}

TEST(Interval, VectorGreater) {
  using V = std::vector<Interval>;
  EXPECT_FALSE(vec_gt_lu(V{{1, 2}, {1, 2}}, V{{1, 2}, {1, 2}}));
  EXPECT_TRUE(vec_gt_lu(V{{1, 2}, {1, 2}}, V{{-1, 1}, {-1, 1}}));
  EXPECT_FALSE(vec_gt_lu(V{{2, 3}, {0, 1}}, V{{1, 2}, {1, 2}}));
  EXPECT_THROW(vec_gt_lu(V{{1, 2}}, V{{1, 2}, {1, 2}}), std::invalid_argument);
}

TEST(Interval, VectorGreaterSlack) {
  const std::vector<Bounds> a{{1.0 + 1e-12, 2.0}};
  const std::vector<Bounds> b{{1.0, 2.0}};
  EXPECT_TRUE(robustlu::vec_gt_lu(a, b));
  EXPECT_FALSE(robustlu::vec_gt_lu(a, b, 1e-9));
}

TEST(Interval, InvertedBoundsCompareComponentwise) {
  const std::vector<Bounds> a{{2.0, 1.0}};
  const std::vector<Bounds> b{{1.0, 0.5}};
  EXPECT_TRUE(robustlu::vec_gt_lu(a, b));
}

// Closure, exact formulas and the implication chain on random data.
TEST(IntervalProperty, RandomizedSuite) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> k(-10.0, 10.0);
  for (int c = 0; c < 10000; ++c) {
    const Interval a = random_interval(rng);
    const Interval b = random_interval(rng);
    const double s = k(rng);

    const Interval sum = a + b;
    const Interval diff = a - b;
    const Interval sc = s * a;
    ASSERT_LE(sum.lo(), sum.hi());
    ASSERT_LE(diff.lo(), diff.hi());
    ASSERT_LE(sc.lo(), sc.hi());
    ASSERT_EQ(sum.lo(), a.lo() + b.lo());
    ASSERT_EQ(sum.hi(), a.hi() + b.hi());
    ASSERT_EQ(diff.lo(), a.lo() - b.hi());
    ASSERT_EQ(diff.hi(), a.hi() - b.lo());
    ASSERT_EQ(sc.lo(), s >= 0 ? s * a.lo() : s * a.hi());
    ASSERT_EQ(sc.hi(), s >= 0 ? s * a.hi() : s * a.lo());
    ASSERT_EQ(a + b, b + a);

    if (lt_s_lu(a, b)) ASSERT_TRUE(lt_lu(a, b));
    if (lt_lu(a, b)) ASSERT_TRUE(leq_lu(a, b));
    ASSERT_TRUE(leq_lu(a, a));
    if (leq_lu(a, b) && leq_lu(b, a)) ASSERT_EQ(a, b);

    const Interval c3 = random_interval(rng);
    if (leq_lu(a, b) && leq_lu(b, c3)) ASSERT_TRUE(leq_lu(a, c3));
  }
}

TEST(IntervalProperty, DegenerateIntervalsEmbedReals) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int c = 0; c < 1000; ++c) {
    const double x = u(rng);
    const double y = u(rng);
    const double s = u(rng);
    EXPECT_EQ(Interval::point(x) + Interval::point(y), Interval::point(x + y));
    EXPECT_EQ(Interval::point(x) - Interval::point(y), Interval::point(x - y));
    EXPECT_EQ(s * Interval::point(x), Interval::point(s * x));
  }
}

TEST(IntervalProperty, ScaleComposesForSameSign) {
  // Powers of two keep the endpoint products exact.
  const Interval a(-3.5, 1.25);
  for (double k1 : {0.5, 2.0, 4.0}) {
    for (double k2 : {0.25, 8.0}) {
      EXPECT_EQ(k1 * (k2 * a), (k1 * k2) * a);
      EXPECT_EQ(-k1 * (-k2 * a), (k1 * k2) * a);
    }
  }
}
