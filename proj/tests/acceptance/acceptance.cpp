// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dist_oracle.hpp"
#include "robustlu/classify.hpp"
#include "robustlu/convexity.hpp"
#include "robustlu/kkt.hpp"
#include "robustlu/penalty.hpp"
#include "robustlu/problem_io.hpp"
#include "robustlu/properties.hpp"
#include "robustlu/saddle.hpp"
#include "robustlu/wolfe.hpp"

using namespace robustlu;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;  // wall-clock budget, infinity when none is pinned
  std::function<Outcome()> body;
};

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

Problem fixture(const std::string& name) { return load_problem(std::string(ROBUSTLU_FIXTURES) + "/" + name); }

std::string num(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

// Equal up to rounding of a handful of floating-point operations.
bool machine_equal(double a, double b) {
  return std::abs(a - b) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(b));
}

bool same(const Interval& a, double lo, double hi) { return machine_equal(a.lo(), lo) && machine_equal(a.hi(), hi); }

Interval random_interval(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  const double a = u(rng);
  const double b = u(rng);
  return Interval(std::min(a, b), std::max(a, b));
}

Outcome interval_core() {
  Outcome o;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> k(-10.0, 10.0);
  std::size_t bad = 0;
  for (int c = 0; c < 10000; ++c) {
    const Interval a = random_interval(rng);
    const Interval b = random_interval(rng);
    const double s = k(rng);
    const Interval sum = a + b;
    const Interval diff = a - b;
    const Interval sc = s * a;
    bool good = sum.lo() <= sum.hi() && diff.lo() <= diff.hi() && sc.lo() <= sc.hi();
    good = good && sum.lo() == a.lo() + b.lo() && sum.hi() == a.hi() + b.hi();
    good = good && diff.lo() == a.lo() - b.hi() && diff.hi() == a.hi() - b.lo();
    good = good && sc.lo() == (s >= 0 ? s * a.lo() : s * a.hi()) && sc.hi() == (s >= 0 ? s * a.hi() : s * a.lo());
    good = good && (!lt_s_lu(a, b) || lt_lu(a, b)) && (!lt_lu(a, b) || leq_lu(a, b));
    if (!good) ++bad;
  }
  o.require(bad == 0, std::to_string(bad) + " of 10000 cases failed");
  o.detail = o.ok ? "10000 cases, 0 failures" : o.detail;
  return o;
}

Outcome quadrant_example() {
  Outcome o;
  const auto c = classify_point(fixture("quadrant.toml"), vec({1, 2}), Grid(vec({0, 0}), vec({2, 2}), {40, 40}));
  o.require(c.almost_eps_pareto.holds(), "almost_eps_pareto refuted");
  o.require(!c.eps_pareto.holds(), "eps_pareto holds");
  o.require(c.eps_pareto.reason == "not in required feasible set", "eps_pareto reason '" + c.eps_pareto.reason + "'");
  if (o.ok) o.detail = "almost_eps_pareto=holds-on-grid, eps_pareto=refuted (" + c.eps_pareto.reason + ")";
  return o;
}

Outcome kkt_fixtures() {
  Outcome o;
  const auto t2 = check_kkt_pair(fixture("halfline.toml"), vec({0}), vec({4}));
  o.require(t2.verdict && t2.inclusion_residual <= 1e-9, "halfline pair: " + t2.reason + ", residual " + num(t2.inclusion_residual));
  const auto t1 = check_kkt_pair(fixture("corner2d.toml"), vec({0, 0}), vec({3, 1}));
  o.require(t1.verdict && t1.inclusion_residual <= 1e-9, "corner2d pair: " + t1.reason + ", residual " + num(t1.inclusion_residual));
  const auto d4 = check_kkt_pair(fixture("dual_anchor.toml"), vec({0.25}), vec({8}));
  o.require(d4.verdict, "dual anchor: " + d4.reason);
  o.require(!d4.signs.empty() && d4.signs[0].g == 15.0 / 16.0 && d4.signs[0].region == SignRegion::Slack,
            "dual anchor g(z) not 15/16 in (0, sqrt(theta)]");
  if (o.ok) {
    o.detail = "residuals " + num(t2.inclusion_residual) + ", " + num(t1.inclusion_residual) +
               "; anchor g=15/16 within_sqrt_theta";
  }
  return o;
}

Outcome penalty_run(const std::string& file, double r, const Vector& lambda_want, const std::optional<Vector>& z_want,
                    const Grid& grid) {
  Outcome o;
  const Problem prob = fixture(file);
  PenaltyOptions opts;
  opts.r0 = r;
  opts.max_outer = 1;
  const auto t0 = std::chrono::steady_clock::now();
  const PenaltyRun run = solve_penalty(prob, opts);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(run.success, file + ": " + run.message);
  if (!run.success) return o;
  const double lerr = (run.lambda - lambda_want).lpNorm<Eigen::Infinity>();
  o.require(lerr <= 1e-6, file + ": |lambda - oracle| = " + num(lerr));
  if (z_want) {
    const double zerr = (run.z - *z_want).lpNorm<Eigen::Infinity>();
    o.require(zerr <= 1e-3, file + ": |z - oracle| = " + num(zerr));
  }
  o.require(check_kkt_pair(prob, run.z, run.lambda).verdict, file + ": check_kkt_pair false");
  o.require(classify_point(prob, run.z, grid).almost_theta_quasi.holds(), file + ": almost_theta_quasi refuted");
  o.require(secs < 30.0, file + ": " + num(secs) + " s");
  if (o.ok) o.detail = file + " |dlambda|=" + num(lerr) + " in " + std::to_string(secs).substr(0, 5) + " s";
  return o;
}

Outcome penalty_solver() {
  Outcome a = penalty_run("halfline.toml", 0.05, vec({4}), vec({0.9}), Grid(vec({0}), vec({3}), {300}));
  Outcome b = penalty_run("corner2d.toml", 0.01, vec({3, 2}), std::nullopt, Grid(vec({0, 0}), vec({3, 3}), {60, 60}));
  Outcome o;
  o.ok = a.ok && b.ok;
  o.detail = a.detail + "; " + b.detail;
  return o;
}

Outcome dual_objective_exact() {
  Outcome o;
  const Problem prob = fixture("dual_anchor.toml");
  const auto a = dual_objective(prob, vec({0.25}), vec({8}));
  o.require(same(a[0], 17.0 / 8, 33.0 / 8) && same(a[1], 17.0 / 8, 25.0 / 8), "L(1/4, 8) mismatch");
  // By hand: g(y) = 1 - y^2 at the worst v = 0, penalty lambda g / (2m).
  const double y = 1.0 / 8;
  const double pen = 16.0 * (1.0 - y * y) / 4.0;
  const auto b = dual_objective(prob, vec({y}), vec({16}));
  o.require(same(b[0], y + pen, y + 2 + pen) && same(b[1], y + pen, y + 1 + pen), "L(1/8, 16) mismatch with oracle");
  o.require(same(b[0], 65.0 / 16, 97.0 / 16) && same(b[1], 65.0 / 16, 81.0 / 16), "L(1/8, 16) mismatch");
  if (o.ok) o.detail = "both values equal within 4 ulp";
  return o;
}

Outcome dual_counterexample() {
  Outcome o;
  const Problem prob = fixture("dual_anchor.toml");
  const DualPoint anchor{vec({0.25}), vec({8})};
  const DualPoint rival{vec({0.125}), vec({16})};
  const auto off = dual_classify(prob, DualConfig::make(prob, anchor.y, anchor.lambda, false), anchor, {rival});
  o.require(!off.holds, "cap off: anchor not refuted");
  o.require(off.witness && off.witness->y == rival.y && off.witness->lambda == rival.lambda, "cap off: wrong witness");
  const auto on = in_Omega_D(prob, DualConfig::make(prob, anchor.y, anchor.lambda, true), rival.y, rival.lambda);
  o.require(!on.member, "cap on: (1/8, 16) admitted to Omega_D");
  if (o.ok) o.detail = "cap off refuted by (1/8,16); cap on rejects it (" + on.reason + ")";
  return o;
}

Outcome lagrangian_exact() {
  Outcome o;
  const Problem prob = fixture("saddle_line.toml");
  const auto a = lagrangian(prob, vec({0}), vec({4}), vec({0}), vec({4}));
  o.require(same(a[0], 1, 2) && same(a[1], 1, 2), "L(0,4,0,4) mismatch");
  const auto b = lagrangian(prob, vec({-2}), vec({4}), vec({0}), vec({4}));
  o.require(same(b[0], -1, 1) && same(b[1], -1, 1), "L(-2,4,0,4) mismatch");
  const auto r = check_saddle(prob, vec({0}), vec({4}), default_lambda_grid(vec({4}), 16),
                              Grid(vec({-3}), vec({3}), {6}).points());
  bool has_minus_two = false;
  for (const auto& w : r.cond_ii.witnesses) has_minus_two = has_minus_two || w == vec({-2});
  o.require(!r.cond_ii.holds(), "cond (ii) not refuted");
  o.require(has_minus_two, "-2 is not a cond (ii) witness");
  if (o.ok) o.detail = "cond (ii) refuted, witnesses include -2 (" + std::to_string(r.cond_ii.witnesses.size()) + " total)";
  return o;
}

Outcome convexity_certifier() {
  Outcome o;
  const Problem prob = fixture("nonconvex.toml");
  std::vector<Vector> samples = Grid(vec({0}), vec({3}), {300}).points();
  const auto gen = certify(prob, Notion::Generalized, vec({0}), samples);
  o.require(!gen.certified && gen.counterexample, "generalized certified");
  if (gen.counterexample) {
    const auto& rows = gen.counterexample->failing_rows;
    o.require(!rows.empty() && rows.front().rfind("constraint", 0) == 0, "counterexample row is not the constraint row");
  }
  const auto eps = certify(prob, Notion::EpsPseudoQuasi, vec({0}), samples);
  o.require(eps.certified, "eps_pseudo_quasi not certified");
  if (o.ok) {
    o.detail = "generalized: counterexample at x=" + num(gen.counterexample->x[0]) + " (" +
               gen.counterexample->failing_rows.front() + "); eps_pseudo_quasi certified on " +
               std::to_string(eps.samples_checked) + " samples";
  }
  return o;
}

Outcome theorem_suites() {
  Outcome o;
  HarnessOptions opts;
  opts.instances = 100;
  const HarnessReport r = run_property_suite(opts);
  std::string counts;
  for (const auto& s : r.properties) {
    o.require(s.violations == 0, s.name + " violated: " + s.first_violation);
    counts += (counts.empty() ? "" : ", ") + s.name + " " + std::to_string(s.checked);
  }
  if (o.ok) o.detail = "0 violations; checked per property: " + counts;
  return o;
}

Outcome dist_cross_validation() {
  Outcome o;
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int c = 0; c < 50; ++c) {
    const auto inst = oracle::random_dist_instance(rng);
    const double got = dist_origin(inst.terms, inst.cone).dist;
    const double want = oracle::grid_oracle(inst.terms, inst.cone).dist;
    worst = std::max(worst, std::abs(got - want));
    o.require(std::abs(got - want) <= 1e-4, "instance " + std::to_string(c) + ": " + num(got) + " vs " + num(want));
  }
  if (o.ok) o.detail = "50 instances, max |diff| = " + num(worst);
  return o;
}

}  // namespace

int main() {
  constexpr double kNone = std::numeric_limits<double>::infinity();
  const std::vector<Criterion> criteria{
      {1, "interval core", 1.0, interval_core},
      {2, "two-objective quadrant example", 2.0, quadrant_example},
      {3, "KKT fixtures", kNone, kkt_fixtures},
      {4, "penalty solver", 60.0, penalty_solver},
      {5, "dual objective exactness", kNone, dual_objective_exact},
      {6, "dual counterexample", kNone, dual_counterexample},
      {7, "Lagrangian exactness", kNone, lagrangian_exact},
      {8, "convexity certifier", kNone, convexity_certifier},
      {9, "theorem property suites", 600.0, theorem_suites},
      {10, "dist_origin cross-validation", kNone, dist_cross_validation},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.limit_s) o.require(false, "took " + num(secs) + " s, limit " + num(c.limit_s) + " s");
    if (!o.ok) ++failed;
    std::printf("%s  %2d  %-30s %8.3f s  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
