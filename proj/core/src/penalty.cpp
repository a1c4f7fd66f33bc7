#include "robustlu/penalty.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "robustlu/classify.hpp"

namespace robustlu {

namespace {

struct Eval {
  double value;
  Vector grad;
};

// Penalized value plus one element of its subdifferential surrogate.
Eval evaluate(const Problem& prob, const Vector& x, const Vector& r, double tol_active) {
  const Vector none(0);
  Eval e{0.0, Vector::Zero(x.size())};
  for (const auto& o : prob.objectives()) {
    for (const Expr* f : {&o.lower, &o.upper}) {
      e.value += f->eval(x, none);
      e.grad += subdiff(*f, x, none, tol_active).polytope.vertex(0);
    }
  }
  for (std::size_t j = 0; j < prob.p(); ++j) {
    const auto& c = prob.constraints()[j];
    double best = -std::numeric_limits<double>::infinity();
    const Vector* arg = nullptr;
    for (const auto& v : c.samples.points()) {
      const double g = c.g.eval(x, v);
      if (g > best) {
        best = g;
        arg = &v;
      }
    }
    if (best > 0.0) {
      const double rj = r[static_cast<Eigen::Index>(j)];
      e.value += best * best / rj;
      e.grad += (2.0 * best / rj) * subdiff(c.g, x, *arg, tol_active).polytope.vertex(0);
    }
  }
  return e;
}

Vector default_lo(const Problem& prob, const PenaltyOptions& o) {
  return o.box_lo ? *o.box_lo : Vector::Constant(static_cast<Eigen::Index>(prob.n()), -10.0);
}

Vector default_hi(const Problem& prob, const PenaltyOptions& o) {
  return o.box_hi ? *o.box_hi : Vector::Constant(static_cast<Eigen::Index>(prob.n()), 10.0);
}

Vector uniform_point(std::mt19937_64& rng, const Vector& lo, const Vector& hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector x(lo.size());
  for (Eigen::Index k = 0; k < lo.size(); ++k) x[k] = lo[k] + (hi[k] - lo[k]) * u(rng);
  return x;
}

constexpr double kDivergence = 1e12;

// Projected subgradient descent with normalized steps c / sqrt(k); returns
// the best iterate seen.
Vector subgradient_run(const Problem& prob, Vector x, const Vector& r, double c, int iters, double tol_active) {
  Vector best = x;
  double best_val = evaluate(prob, x, r, tol_active).value;
  for (int k = 1; k <= iters; ++k) {
    const Eval e = evaluate(prob, x, r, tol_active);
    if (e.value < best_val) {
      best_val = e.value;
      best = x;
    }
    const double gn = e.grad.norm();
    if (gn == 0.0) break;
    x = prob.S().project(x - (c / std::sqrt(static_cast<double>(k))) * (e.grad / gn));
    if (x.norm() > kDivergence) break;
  }
  if (x.norm() <= kDivergence && evaluate(prob, x, r, tol_active).value < best_val) best = x;
  return best;
}

// Projected gradient with Armijo backtracking. On the smooth pieces reached
// by the subgradient phase this converges linearly, which is what the
// multiplier formula 2 g^+ / r needs.
Vector polish(const Problem& prob, Vector x, const Vector& r, int iters, double tol_active) {
  double t = 1.0;
  Eval cur = evaluate(prob, x, r, tol_active);
  for (int k = 0; k < iters; ++k) {
    bool moved = false;
    t = std::min(t * 2.0, 1e6);
    while (t > 1e-18) {
      const Vector y = prob.S().project(x - t * cur.grad);
      const Vector d = y - x;
      const Eval next = evaluate(prob, y, r, tol_active);
      if (next.value <= cur.value + cur.grad.dot(d) + d.squaredNorm() / (2.0 * t)) {
        moved = d.norm() > 0.0 && next.value <= cur.value;
        if (moved) {
          x = y;
          cur = next;
        }
        break;
      }
      t *= 0.5;
    }
    // Gradient mapping below rounding level: stationary for our purposes.
    const Vector step = prob.S().project(x - t * cur.grad) - x;
    if (!moved || step.norm() <= 1e-15 * std::max(1.0, x.norm())) break;
  }
  return x;
}

// Fixed-point residual of the projected gradient map at unit step.
double pg_residual(const Problem& prob, const Vector& x, const Vector& grad) {
  return (x - prob.S().project(x - grad)).norm();
}

// Near the minimizer value differences drop below rounding, which stalls the
// Armijo test. This phase accepts Barzilai-Borwein steps that shrink the
// projected-gradient residual instead.
Vector refine(const Problem& prob, Vector x, const Vector& r, int iters, double tol_active) {
  Eval cur = evaluate(prob, x, r, tol_active);
  double res = pg_residual(prob, x, cur.grad);
  double t = 1e-3;
  for (int k = 0; k < iters && res > 0.0; ++k) {
    bool accepted = false;
    for (int h = 0; h < 60; ++h, t *= 0.5) {
      const Vector y = prob.S().project(x - t * cur.grad);
      const Eval next = evaluate(prob, y, r, tol_active);
      const double res_y = pg_residual(prob, y, next.grad);
      if (res_y < res) {
        const Vector s = y - x;
        const double sy = s.dot(next.grad - cur.grad);
        t = sy > 0.0 ? s.squaredNorm() / sy : t;
        x = y;
        cur = next;
        res = res_y;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return x;
}

}  // namespace

double penalized_value(const Problem& prob, const Vector& x, const Vector& r) {
  if (static_cast<std::size_t>(r.size()) != prob.p()) throw std::invalid_argument("penalty weights have the wrong length");
  double v = scalarize(prob, x);
  for (std::size_t j = 0; j < prob.p(); ++j) {
    const double g = std::max(robust_value(prob, j, x), 0.0);
    v += g * g / r[static_cast<Eigen::Index>(j)];
  }
  return v;
}

bool looks_unbounded_below(const Problem& prob, const Vector& lo, const Vector& hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const Vector mid = 0.5 * (lo + hi);
  const Vector half = 0.5 * (hi - lo);
  double mins[3];
  const double scales[3] = {1.0, 10.0, 100.0};
  for (int s = 0; s < 3; ++s) {
    const Vector l = mid - scales[s] * half;
    const Vector h = mid + scales[s] * half;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 256; ++k) best = std::min(best, scalarize(prob, prob.S().project(uniform_point(rng, l, h))));
    // Box corners catch linear descent directions that random draws miss.
    for (std::size_t c = 0; c < (std::size_t{1} << std::min<std::size_t>(prob.n(), 10)); ++c) {
      Vector x = l;
      for (std::size_t k = 0; k < prob.n(); ++k) {
        if ((c >> k) & 1U) x[static_cast<Eigen::Index>(k)] = h[static_cast<Eigen::Index>(k)];
      }
      best = std::min(best, scalarize(prob, prob.S().project(x)));
    }
    mins[s] = best;
  }
  const double d1 = mins[0] - mins[1];
  const double d2 = mins[1] - mins[2];
  return d2 > 1.0 && d2 > 5.0 * std::max(d1, 1e-9);
}

PenaltyRun solve_penalty(const Problem& prob, const PenaltyOptions& opts, const Tolerances& tols) {
  if (!(opts.r0 > 0.0) || !(opts.shrink > 0.0 && opts.shrink < 1.0) || opts.max_outer < 1 || opts.starts < 1 ||
      opts.inner_iters < 0 || opts.polish_iters < 0) {
    throw std::invalid_argument("penalty options out of range");
  }
  const Vector lo = default_lo(prob, opts);
  const Vector hi = default_hi(prob, opts);
  if (static_cast<std::size_t>(lo.size()) != prob.n() || static_cast<std::size_t>(hi.size()) != prob.n()) {
    throw std::invalid_argument("penalty start box has the wrong dimension");
  }

  PenaltyRun run;
  run.bounded_below_warning = looks_unbounded_below(prob, lo, hi, opts.seed);
  std::mt19937_64 rng(opts.seed);
  const double c = 0.1 * std::max((hi - lo).norm(), 1e-3);
  const auto p = static_cast<Eigen::Index>(prob.p());
  Vector r = Vector::Constant(p, opts.r0);
  std::optional<Vector> warm;

  for (int outer = 0; outer < opts.max_outer; ++outer) {
    Vector best;
    double best_val = std::numeric_limits<double>::infinity();
    for (int s = 0; s < opts.starts; ++s) {
      Vector x0 = (s == 0 && warm) ? *warm : prob.S().project(uniform_point(rng, lo, hi));
      Vector x = subgradient_run(prob, std::move(x0), r, c, opts.inner_iters, tols.tol_active);
      const double v = evaluate(prob, x, r, tols.tol_active).value;
      if (v < best_val) {
        best_val = v;
        best = std::move(x);
      }
    }
    Vector z = refine(prob, polish(prob, best, r, opts.polish_iters, tols.tol_active), r, 500, tols.tol_active);

    PenaltyStep step;
    step.r = r;
    step.z = z;
    step.g_plus = Vector::Zero(p);
    Vector lambda = Vector::Zero(p);
    bool feasible = true;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double g = robust_value(prob, static_cast<std::size_t>(j), z);
      // Values within tol_sign of zero count as satisfied so that lambda_j
      // is exactly 0 on the "g_j <= 0" branch.
      const double gp = g > tols.tol_sign ? g : 0.0;
      step.g_plus[j] = gp;
      lambda[j] = 2.0 * gp / r[j];
      feasible = feasible && gp < prob.sqrt_theta();
    }
    step.value = evaluate(prob, z, r, tols.tol_active).value;
    step.stationarity = in_S(prob, z, tols.tol_feas) ? stationarity(prob, z, lambda, tols).dist.dist
                                                      : std::numeric_limits<double>::infinity();
    run.history.push_back(step);
    run.z = z;
    run.lambda = lambda;
    run.r = r;
    warm = z;
    if (feasible) {
      run.feasibility_reached = true;
      break;
    }
    for (Eigen::Index j = 0; j < p; ++j) {
      if (step.g_plus[j] >= prob.sqrt_theta()) r[j] *= opts.shrink;
    }
  }

  run.kkt = check_kkt_pair(prob, run.z, run.lambda, tols);
  run.success = run.feasibility_reached && run.kkt.verdict;
  if (!run.feasibility_reached) {
    run.message = "penalty weights exhausted before g^+ < sqrt(theta)";
  } else if (!run.kkt.verdict) {
    run.message = "returned pair fails the KKT check: " + run.kkt.reason;
  } else {
    run.message = "almost regular theta-solution candidate with KKT multipliers";
  }
  return run;
}

}  // namespace robustlu
