#include <gtest/gtest.h>

#include "robustlu/classify.hpp"
#include "robustlu/kkt.hpp"
#include "robustlu/properties.hpp"

using namespace robustlu;

TEST(AffineInstance, Deterministic) {
  const auto a = random_affine_instance(7);
  const auto b = random_affine_instance(7);
  EXPECT_EQ(a.z, b.z);
  EXPECT_EQ(a.lambda, b.lambda);
  EXPECT_EQ(a.problem.n(), b.problem.n());
  EXPECT_EQ(a.grid.describe(), b.grid.describe());
}

TEST(AffineInstance, ShapeAndPlantedPair) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = random_affine_instance(seed);
    const Problem& p = inst.problem;
    EXPECT_GE(p.n(), 1u);
    EXPECT_LE(p.n(), 3u);
    EXPECT_LE(p.m(), 3u);
    EXPECT_GE(p.p(), 1u);
    EXPECT_LE(p.p(), 2u);
    EXPECT_TRUE(in_S(p, inst.z));
    const auto c = check_kkt_pair(p, inst.z, inst.lambda);
    EXPECT_TRUE(c.verdict) << "seed " << seed << ": " << c.reason;
    EXPECT_FALSE(find_objective_violation(p, inst.grid.points()).has_value());
  }
}

TEST(Harness, SmallRunHasNoViolations) {
  HarnessOptions o;
  o.instances = 15;
  o.seed = 3;
  o.dual_samples = 40;
  const HarnessReport r = run_property_suite(o);
  EXPECT_EQ(r.instances, 15u);
  EXPECT_EQ(r.properties.size(), 11u);
  for (const auto& s : r.properties) {
    EXPECT_EQ(s.violations, 0u) << s.name << ": " << s.first_violation;
    EXPECT_EQ(s.checked + s.vacuous, 15u) << s.name;
  }
  EXPECT_TRUE(r.ok());
  ASSERT_NE(r.find("class_implications"), nullptr);
  EXPECT_EQ(r.find("nonexistent"), nullptr);
  for (const char* name : {"anchor_kkt", "class_implications", "sufficiency_generalized", "eps_duality", "saddle_necessary"}) {
    EXPECT_GT(r.find(name)->checked, 0u) << name;
  }
}

// The checks have teeth: the worst feasible grid point for phi is flagged by
// the classifier the sufficiency properties rely on, with a witness that
// replays.
TEST(Harness, NegativeControl) {
  std::size_t caught = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = random_affine_instance(seed);
    const Problem& p = inst.problem;
    double worst = -1e300;
    double best = 1e300;
    Vector zw;
    for (const auto& x : inst.grid.points()) {
      if (!in_Omega(p, x)) continue;
      const double v = scalarize(p, x);
      best = std::min(best, v);
      if (v > worst) {
        worst = v;
        zw = x;
      }
    }
    if (zw.size() == 0 || worst <= best + p.theta()) continue;
    const auto c = classify_point(p, zw, inst.grid);
    ASSERT_FALSE(c.almost_theta.holds()) << "seed " << seed;
    ASSERT_TRUE(c.almost_theta.witness.has_value());
    EXPECT_GT(worst, scalarize(p, *c.almost_theta.witness) + p.theta());
    ++caught;
  }
  EXPECT_GT(caught, 0u);
}
