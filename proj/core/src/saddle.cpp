#include "robustlu/saddle.hpp"

#include <algorithm>
#include <stdexcept>

namespace robustlu {

namespace {

void check_multipliers(const Problem& prob, const Vector& l, const char* name) {
  if (static_cast<std::size_t>(l.size()) != prob.p()) {
    throw std::invalid_argument(std::string(name) + " has the wrong length");
  }
  if ((l.array() < 0.0).any()) throw std::invalid_argument(std::string(name) + " has a negative component");
}

void widen(Vector& lo, Vector& hi, const Vector& p) {
  if (lo.size() == 0) {
    lo = p;
    hi = p;
    return;
  }
  lo = lo.cwiseMin(p);
  hi = hi.cwiseMax(p);
}

}  // namespace

std::vector<Bounds> lagrangian_bounds(const Problem& prob, const Vector& x, const Vector& lambda, const Vector& y,
                                      const Vector& mu) {
  check_multipliers(prob, lambda, "lambda");
  check_multipliers(prob, mu, "mu");
  if (static_cast<std::size_t>(y.size()) != prob.n()) throw std::invalid_argument("y has the wrong dimension");
  double pen = 0.0;
  for (std::size_t j = 0; j < prob.p(); ++j) pen += lambda[static_cast<Eigen::Index>(j)] * robust_value(prob, j, x);
  pen /= 2.0 * static_cast<double>(prob.m());
  const double d = ((x - y).norm() - (lambda - mu).lpNorm<1>()) / prob.sqrt_theta();
  auto out = objective_bounds(prob, x);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Interval& e = prob.precision()[i];
    out[i].lo += pen + e.lo() * d;
    out[i].hi += pen + e.hi() * d;
  }
  return out;
}

IntervalVector lagrangian(const Problem& prob, const Vector& x, const Vector& lambda, const Vector& y,
                          const Vector& mu) {
  IntervalVector out;
  for (const auto& b : lagrangian_bounds(prob, x, lambda, y, mu)) {
    if (!b.valid()) throw std::domain_error("Lagrangian component has lower endpoint above upper endpoint");
    out.emplace_back(b.lo, b.hi);
  }
  return out;
}

SaddleReport check_saddle(const Problem& prob, const Vector& xbar, const Vector& lambar,
                          const std::vector<Vector>& lambda_grid, const std::vector<Vector>& x_grid,
                          const Tolerances& tols) {
  check_multipliers(prob, lambar, "lambda");
  SaddleReport r;
  const auto base = lagrangian_bounds(prob, xbar, lambar, xbar, lambar);
  for (const auto& l : lambda_grid) {
    widen(r.lambda_lo, r.lambda_hi, l);
    ++r.cond_i.checked;
    if (vec_gt_lu(lagrangian_bounds(prob, xbar, l, xbar, lambar), base, tols.tol_strict)) {
      if (r.cond_i.holds()) r.cond_i.witness = l;
      r.cond_i.verdict = Verdict::Refuted;
      r.cond_i.witnesses.push_back(l);
    }
  }
  for (const auto& x : x_grid) {
    widen(r.x_lo, r.x_hi, x);
    ++r.cond_ii.checked;
    if (vec_gt_lu(base, lagrangian_bounds(prob, x, lambar, xbar, lambar), tols.tol_strict)) {
      if (r.cond_ii.holds()) r.cond_ii.witness = x;
      r.cond_ii.verdict = Verdict::Refuted;
      r.cond_ii.witnesses.push_back(x);
    }
  }
  return r;
}

std::vector<Vector> default_lambda_grid(const Vector& lambar, int steps) {
  if (steps < 1) throw std::invalid_argument("lambda grid needs at least one step");
  const auto p = static_cast<std::size_t>(lambar.size());
  Vector hi(lambar.size());
  for (Eigen::Index j = 0; j < lambar.size(); ++j) hi[j] = 4.0 * std::max(lambar[j], 1.0);
  std::vector<Vector> out;
  if (p > 0) {
    const Grid g(Vector::Zero(lambar.size()), hi, std::vector<int>(p, steps));
    out = g.points();
  } else {
    out.emplace_back(0);
  }
  out.push_back(lambar);
  for (Eigen::Index k = 0; k < lambar.size(); ++k) {
    Vector l = lambar;
    l[k] += 1.0;
    out.push_back(l);
  }
  return out;
}

SaddleImplication saddle_implies_solution(const Problem& prob, const Vector& xbar, const Vector& lambar,
                                          const std::vector<Vector>& lambda_grid, const Grid& grid,
                                          const Tolerances& tols) {
  SaddleImplication out;
  const Vector gbar = robust_values(prob, xbar);
  std::vector<Vector> xs;
  out.hypothesis_holds = true;
  for (const auto& x : grid.points()) {
    if (!in_S(prob, x, tols.tol_feas)) continue;
    xs.push_back(x);
    if (!out.hypothesis_holds) continue;
    const Vector gx = robust_values(prob, x);
    if ((gx.array() > gbar.array() + tols.tol_feas).any()) {
      out.hypothesis_holds = false;
      out.hypothesis_witness = x;
    }
  }
  if (!out.hypothesis_holds) {
    out.status = "hypothesis violated";
    return out;
  }

  // The construction lambar + e_k from the theory is always scanned.
  std::vector<Vector> lambdas = lambda_grid;
  for (Eigen::Index k = 0; k < lambar.size(); ++k) {
    Vector l = lambar;
    l[k] += 1.0;
    lambdas.push_back(l);
  }
  out.saddle_holds = check_saddle(prob, xbar, lambar, lambdas, xs, tols).holds();
  if (!out.saddle_holds) {
    out.status = "not a saddle point on the grids; implication vacuous";
    return out;
  }
  out.conclusion_checked = true;
  out.almost_eps_quasi = classify_point(prob, xbar, grid, tols).almost_eps_quasi.holds();
  out.status = out.almost_eps_quasi ? "almost_eps_quasi holds on grid" : "violation: almost_eps_quasi refuted";
  return out;
}

}  // namespace robustlu
