#include <random>

#include <benchmark/benchmark.h>

#include "robustlu/classify.hpp"
#include "robustlu/expr.hpp"
#include "robustlu/kkt.hpp"
#include "robustlu/setcalc.hpp"

namespace {

using namespace robustlu;

// Weighted polytopes in R^n with vertices_per_term vertices each.
std::vector<WeightedPolytope> random_terms(std::mt19937_64& rng, int n, int terms, int vertices_per_term) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<WeightedPolytope> out;
  for (int t = 0; t < terms; ++t) {
    std::vector<Vector> verts;
    for (int k = 0; k < vertices_per_term; ++k) verts.push_back(Vector::NullaryExpr(n, [&] { return u(rng); }));
    out.push_back({1.0 + u(rng) * 0.25, Polytope(std::move(verts))});
  }
  return out;
}

void BM_DistOrigin(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int n = static_cast<int>(state.range(0));
  const auto terms = random_terms(rng, n, static_cast<int>(state.range(1)), 3);
  std::vector<Vector> gens;
  for (int k = 0; k < n; ++k) gens.push_back(-Vector::Unit(n, k));
  const PolyCone cone(static_cast<std::size_t>(n), gens);
  for (auto _ : state) benchmark::DoNotOptimize(dist_origin(terms, cone).dist);
}
BENCHMARK(BM_DistOrigin)->Args({2, 4})->Args({2, 8})->Args({4, 8});

Problem affine_problem() {
  return Problem(2,
                 {{parse("2*x1 - 1", 2, 0), parse("3*x2 + 2", 2, 0)}, {parse("x1 + 1", 2, 0), parse("x2 + 4", 2, 0)}},
                 {{parse("-x1 + v1", 2, 1), UncertaintySet::from_box(Vector::Zero(1), Vector::Ones(1), {5})},
                  {parse("-2*x2 + v1", 2, 1), UncertaintySet::from_box(Vector::Zero(1), Vector::Ones(1), {5})}},
                 Polyhedron::box(Vector::Zero(2), Vector::Constant(2, 3.0)),
                 Precision({Interval(0, 0.5), Interval(0, 0.5)}));
}

void BM_ClassifyPoint(benchmark::State& state) {
  const Problem prob = affine_problem();
  const int steps = static_cast<int>(state.range(0));
  const Grid grid(Vector::Zero(2), Vector::Constant(2, 3.0), {steps, steps});
  for (auto _ : state) benchmark::DoNotOptimize(classify_point(prob, Vector::Zero(2), grid).feasible_points);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_ClassifyPoint)->Arg(20)->Arg(60)->Arg(120);

void BM_KktPair(benchmark::State& state) {
  const Problem prob = affine_problem();
  Vector z = Vector::Zero(2);
  Vector lambda(2);
  lambda << 3, 1;
  for (auto _ : state) benchmark::DoNotOptimize(check_kkt_pair(prob, z, lambda).verdict);
}
BENCHMARK(BM_KktPair);

void BM_Subdiff(benchmark::State& state) {
  const Expr e = parse("max(x1 - x2, abs(x1) + x2^2, x3) + abs(x2 - x3)", 3, 0);
  const Vector x = Vector::Zero(3);
  const Vector v(0);
  for (auto _ : state) benchmark::DoNotOptimize(subdiff(e, x, v).polytope.size());
}
BENCHMARK(BM_Subdiff);

void BM_ParseEval(benchmark::State& state) {
  const Expr e = parse("-x1^2 - v1 + 1 + max(x1, 0)*v1", 1, 1);
  Vector x(1);
  Vector v(1);
  double acc = 0.0;
  for (auto _ : state) {
    x[0] = acc * 1e-9;
    v[0] = 0.5;
    acc += e.eval(x, v);
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_ParseEval);

}  // namespace

BENCHMARK_MAIN();
