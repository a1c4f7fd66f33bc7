#include <random>

#include <gtest/gtest.h>

#include "robustlu/problem_io.hpp"
#include "robustlu/saddle.hpp"

using namespace robustlu;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

Problem fixture(const std::string& name) { return load_problem(std::string(ROBUSTLU_FIXTURES) + "/" + name); }

bool contains(const std::vector<Vector>& v, const Vector& x) {
  for (const auto& p : v) {
    if (p == x) return true;
  }
  return false;
}

std::vector<Vector> points_in_S(const Problem& prob, const Grid& g) {
  std::vector<Vector> out;
  for (const auto& x : g.points()) {
    if (in_S(prob, x)) out.push_back(x);
  }
  return out;
}

}  // namespace

TEST(Lagrangian, ExampleValues) {
  const Problem prob = fixture("saddle_line.toml");
  const auto a = lagrangian(prob, vec({0}), vec({4}), vec({0}), vec({4}));
  EXPECT_EQ(a[0], Interval(1, 2));
  EXPECT_EQ(a[1], Interval(1, 2));
  const auto b = lagrangian(prob, vec({-2}), vec({4}), vec({0}), vec({4}));
  EXPECT_EQ(b[0], Interval(-1, 1));
  EXPECT_EQ(b[1], Interval(-1, 1));
}

TEST(Lagrangian, IdentityWhenAnchorsCoincide) {
  const Problem prob = fixture("saddle_line.toml");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> x(-3.0, 3.0);
  std::uniform_real_distribution<double> l(0.0, 10.0);
  for (int c = 0; c < 200; ++c) {
    const Vector xv = vec({x(rng)});
    const Vector lv = vec({l(rng)});
    const double pen = lv[0] * robust_value(prob, 0, xv) / 4.0;
    const auto L = lagrangian_bounds(prob, xv, lv, xv, lv);
    const auto f = objective_bounds(prob, xv);
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_DOUBLE_EQ(L[i].lo, f[i].lo + pen);
      EXPECT_DOUBLE_EQ(L[i].hi, f[i].hi + pen);
    }
  }
}

TEST(Lagrangian, InvertedEndpoints) {
  const Problem prob = fixture("saddle_line.toml");
  const auto raw = lagrangian_bounds(prob, vec({0}), vec({4}), vec({0}), vec({0}));
  EXPECT_EQ(raw[0].lo, 1.0);
  EXPECT_EQ(raw[0].hi, 0.0);
  EXPECT_THROW(lagrangian(prob, vec({0}), vec({4}), vec({0}), vec({0})), std::domain_error);
  EXPECT_THROW(lagrangian_bounds(prob, vec({0}), vec({-1}), vec({0}), vec({0})), std::invalid_argument);
  EXPECT_THROW(lagrangian_bounds(prob, vec({0}), vec({1, 1}), vec({0}), vec({0})), std::invalid_argument);
}

TEST(Saddle, ExampleFailsSecondCondition) {
  const Problem prob = fixture("saddle_line.toml");
  const auto r = check_saddle(prob, vec({0}), vec({4}), default_lambda_grid(vec({4}), 16),
                              Grid(vec({-3}), vec({3}), {6}).points());
  EXPECT_TRUE(r.cond_i.holds());
  EXPECT_FALSE(r.cond_ii.holds());
  EXPECT_TRUE(contains(r.cond_ii.witnesses, vec({-2})));
  // At x = -1 the second upper endpoint is 2.5 > 2, so only -3 and -2 refute.
  EXPECT_FALSE(contains(r.cond_ii.witnesses, vec({-1})));
  EXPECT_EQ(r.cond_ii.witnesses.size(), 2u);
  EXPECT_EQ(*r.cond_ii.witness, vec({-3}));
  EXPECT_EQ(r.x_lo, vec({-3}));
  EXPECT_EQ(r.x_hi, vec({3}));
  EXPECT_FALSE(r.holds());
}

TEST(Saddle, SelfGridsHold) {
  for (const char* f : {"saddle_line.toml", "halfline.toml", "nonconvex.toml"}) {
    const Problem prob = fixture(f);
    for (double x : {-1.0, 0.0, 0.5, 2.0}) {
      for (double l : {0.0, 1.0, 4.0}) {
        EXPECT_TRUE(check_saddle(prob, vec({x}), vec({l}), {vec({l})}, {vec({x})}).holds()) << f;
      }
    }
  }
}

TEST(Saddle, DefaultLambdaGrid) {
  const auto g = default_lambda_grid(vec({4}), 8);
  EXPECT_EQ(g.size(), 9u + 2u);
  EXPECT_EQ(g.front(), vec({0}));
  EXPECT_EQ(g[8], vec({16}));
  EXPECT_EQ(g.back(), vec({5}));
  EXPECT_THROW(default_lambda_grid(vec({1}), 0), std::invalid_argument);
}

TEST(Saddle, HalflineAnchorIsSaddle) {
  const Problem prob = fixture("halfline.toml");
  const auto r = check_saddle(prob, vec({0}), vec({4}), default_lambda_grid(vec({4}), 32),
                              points_in_S(prob, Grid(vec({-1}), vec({3}), {400})));
  EXPECT_TRUE(r.holds());
  EXPECT_EQ(r.cond_ii.checked, 301u);
}

// Summing condition (i) over the 2m endpoints: any refuting lambda satisfies
// sum_j (lambda_j - lambar_j) g_j(xbar) > sqrt(theta) ||lambda - lambar||_1.
TEST(SaddleProperty, ConditionOneWitnessesReplay) {
  const Problem prob = fixture("saddle_line.toml");
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> x(-3.0, 3.0);
  std::uniform_real_distribution<double> l(0.0, 8.0);
  std::size_t refuting = 0;
  for (int c = 0; c < 200; ++c) {
    const Vector xbar = vec({x(rng)});
    const Vector lambar = vec({l(rng)});
    const double g = robust_value(prob, 0, xbar);
    const auto r = check_saddle(prob, xbar, lambar, default_lambda_grid(lambar, 16), {xbar});
    for (const auto& lam : r.cond_i.witnesses) {
      ++refuting;
      EXPECT_GT((lam[0] - lambar[0]) * g, prob.sqrt_theta() * std::abs(lam[0] - lambar[0]) - 1e-12);
    }
    // Every endpoint gains (dl) g / 2m - (eps / sqrt(theta)) dl, so lambar + e_1
    // refutes once g exceeds 2m max eps^U / sqrt(theta) = 2.
    if (g > 2.0 + 1e-9) EXPECT_FALSE(r.cond_i.holds());
    if (g < prob.sqrt_theta()) EXPECT_TRUE(r.cond_i.holds());
  }
  EXPECT_GT(refuting, 0u);
}

TEST(SaddleImplication, Halfline) {
  const Problem prob = fixture("halfline.toml");
  const auto r = saddle_implies_solution(prob, vec({0}), vec({4}), default_lambda_grid(vec({4}), 16),
                                         Grid(vec({0}), vec({3}), {300}));
  EXPECT_TRUE(r.hypothesis_holds);
  EXPECT_TRUE(r.saddle_holds);
  EXPECT_TRUE(r.conclusion_checked);
  EXPECT_TRUE(r.almost_eps_quasi);
  EXPECT_TRUE(r.ok());
}

TEST(SaddleImplication, ConstantConstraint) {
  const Problem prob(1, {{parse("x1", 1, 0), parse("x1 + 2", 1, 0)}, {parse("x1", 1, 0), parse("x1 + 1", 1, 0)}},
                     {{parse("v1 - 0.5", 1, 1), UncertaintySet::from_box(vec({0}), vec({1}), {5})}},
                     Polyhedron::box(vec({0}), vec({3})), Precision({Interval(0, 0.5), Interval(0, 0.5)}));
  const auto r = saddle_implies_solution(prob, vec({0}), vec({1}), default_lambda_grid(vec({1}), 16),
                                         Grid(vec({0}), vec({3}), {60}));
  EXPECT_TRUE(r.hypothesis_holds);
  EXPECT_TRUE(r.saddle_holds) << r.status;
  EXPECT_TRUE(r.conclusion_checked);
  EXPECT_TRUE(r.ok());
}

TEST(SaddleImplication, ExampleMakesNoClaim) {
  const Problem prob = fixture("saddle_line.toml");
  const auto r = saddle_implies_solution(prob, vec({0}), vec({4}), default_lambda_grid(vec({4}), 16),
                                         Grid(vec({-3}), vec({3}), {60}));
  EXPECT_FALSE(r.conclusion_checked);
  EXPECT_EQ(r.status, "hypothesis violated");
  EXPECT_TRUE(r.ok());
}
