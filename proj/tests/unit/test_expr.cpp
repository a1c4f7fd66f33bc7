#include <random>

#include <gtest/gtest.h>

#include "robustlu/expr.hpp"

using namespace robustlu;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

const Vector kNone(0);

bool same_vertex_set(const Polytope& p, const std::vector<Vector>& expect) {
  if (p.size() != expect.size()) return false;
  for (const auto& e : expect) {
    bool found = false;
    for (const auto& v : p.vertices()) found = found || (v - e).norm() < 1e-12;
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST(ExprParse, AffineStructure) {
  const Expr e = parse("2*x1 - 1", 2, 0);
  EXPECT_EQ(e.kind(), NodeKind::Sum);
  ASSERT_EQ(e.children().size(), 2u);
  EXPECT_EQ(e.children()[0].kind(), NodeKind::Product);
  EXPECT_EQ(e.children()[1].kind(), NodeKind::Constant);
  EXPECT_EQ(e.children()[1].constant_value(), -1.0);
}

TEST(ExprParse, MaxNode) {
  const Expr e = parse("max(x1, 0)", 1, 0);
  EXPECT_EQ(e.kind(), NodeKind::Max);
  EXPECT_EQ(e.children().size(), 2u);
}

TEST(ExprParse, Errors) {
  EXPECT_THROW(parse("x3", 2, 0), ParseError);
  EXPECT_THROW(parse("v1", 1, 0), ParseError);
  EXPECT_THROW(parse("x1 +", 1, 0), ParseError);
  EXPECT_THROW(parse("max(x1)", 1, 0), ParseError);
  EXPECT_THROW(parse("x1^0", 1, 0), ParseError);
  EXPECT_THROW(parse("x1^2^2", 1, 0), ParseError);
  try {
    parse("x1 + x3", 2, 0);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5u);
    EXPECT_NE(std::string(e.what()).find("undeclared variable x3"), std::string::npos);
  }
}

TEST(ExprParse, RoundTrip) {
  for (const char* s : {"2*x1 - 1", "max(x1, 0)", "-x1^2 - v1 + 1", "abs(x1 - 2*x2)*(x2 + 3)", "min(x1, -x2, 4)",
                        "-(x1 + x2)^3", "x1*x2*v1 - 0.5"}) {
    const Expr e = parse(s, 2, 1);
    EXPECT_EQ(parse(e.to_string(), 2, 1), e) << s << " printed as " << e.to_string();
  }
}

TEST(ExprEval, Examples) {
  EXPECT_EQ(parse("-x1 + v1", 2, 1).eval(vec({0, 0}), vec({1})), 1.0);
  EXPECT_EQ(parse("abs(x1)", 1, 0).eval(vec({-3}), kNone), 3.0);
  EXPECT_EQ(parse("max(x1, 2*x1)", 1, 0).eval(vec({1}), kNone), 2.0);
  EXPECT_EQ(parse("min(x1, 2*x1)", 1, 0).eval(vec({1}), kNone), 1.0);
  EXPECT_EQ(parse("-x1^2 - v1 + 1", 1, 1).eval(vec({0.25}), vec({0})), 15.0 / 16.0);
}

TEST(ExprEval, DimensionMismatch) {
  EXPECT_THROW(parse("x1", 2, 0).eval(vec({1}), kNone), std::invalid_argument);
  EXPECT_THROW(parse("x1 + v1", 1, 1).eval(vec({1}), kNone), std::invalid_argument);
}

TEST(ExprSubdiff, Examples) {
  const auto lin = subdiff(parse("2*x1 - 1", 2, 0), vec({0, 0}), kNone);
  EXPECT_TRUE(lin.is_exact);
  EXPECT_TRUE(same_vertex_set(lin.polytope, {vec({2, 0})}));

  const auto up = subdiff(parse("3*x2 + 2", 2, 0), vec({0, 0}), kNone);
  EXPECT_TRUE(same_vertex_set(up.polytope, {vec({0, 3})}));

  const auto ab = subdiff(parse("abs(x1)", 1, 0), vec({0}), kNone);
  EXPECT_FALSE(ab.is_exact);
  EXPECT_TRUE(same_vertex_set(ab.polytope, {vec({-1}), vec({1})}));

  const auto mx = subdiff(parse("max(x1, 0)", 1, 0), vec({0}), kNone);
  EXPECT_FALSE(mx.is_exact);
  EXPECT_TRUE(same_vertex_set(mx.polytope, {vec({0}), vec({1})}));
}

TEST(ExprSubdiff, UniqueActiveBranch) {
  const Expr e = parse("max(x1^2, x1 + 1)", 1, 0);
  const auto r = subdiff(e, vec({3}), kNone);
  EXPECT_TRUE(r.is_exact);
  EXPECT_TRUE(same_vertex_set(r.polytope, {vec({6})}));
  const auto s = subdiff(parse("min(x1^2, x1 + 1)", 1, 0), vec({3}), kNone);
  EXPECT_TRUE(same_vertex_set(s.polytope, {vec({1})}));
}

TEST(ExprSubdiff, SumIsMinkowskiSum) {
  const Vector x = vec({0, 0});
  const auto a = subdiff(parse("abs(x1)", 2, 0), x, kNone).polytope;
  const auto b = subdiff(parse("max(x2, 0)", 2, 0), x, kNone).polytope;
  const auto s = subdiff(parse("abs(x1) + max(x2, 0)", 2, 0), x, kNone).polytope;
  std::vector<Vector> sums;
  for (const auto& u : a.vertices()) {
    for (const auto& w : b.vertices()) sums.push_back(u + w);
  }
  EXPECT_TRUE(same_vertex_set(s, sums));
}

TEST(ExprGradCheck, Examples) {
  EXPECT_LT(grad_check(parse("x1^2", 1, 0), vec({3}), kNone, 1e-5), 1e-6);
  EXPECT_LT(grad_check(parse("2*x1 - 1", 1, 0), vec({0.7}), kNone, 1e-5), 1e-9);
  EXPECT_THROW(grad_check(parse("max(x1, 0)", 1, 0), vec({1e-12}), kNone, 1e-5), KinkActiveError);
}

// Random polynomials of degree <= 4 in n <= 4 variables.
TEST(ExprProperty, PolynomialGradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int c = 0; c < 200; ++c) {
    const std::size_t n = static_cast<std::size_t>(dim(rng));
    std::vector<Expr> terms;
    for (int t = 0; t < 4; ++t) {
      std::vector<Expr> factors{Expr::constant(coef(rng))};
      const int degree = std::uniform_int_distribution<int>(1, 4)(rng);
      for (int d = 0; d < degree; ++d) {
        factors.push_back(Expr::var(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)));
      }
      terms.push_back(Expr::product(std::move(factors)));
    }
    const Expr e = Expr::sum(std::move(terms)).with_dims(n, 0);
    Vector x(static_cast<Eigen::Index>(n));
    for (auto& xi : x) xi = coef(rng);
    const auto r = subdiff(e, x, kNone);
    ASSERT_TRUE(r.is_exact);
    ASSERT_EQ(r.polytope.size(), 1u);
    EXPECT_LT(grad_check(e, x, kNone, 1e-5), 1e-5) << e.to_string();
  }
}
