#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robustlu/classify.hpp"

namespace robustlu {

/// Raw endpoints of the epsilon-Lagrangian
///   F_i^L = f_i^L(x) + (1/2m) sum_j lambda_j g_j(x) + (eps_i^L / sqrt(theta)) (||x - y|| - ||lambda - mu||_1)
/// and F_i^U with eps_i^U. The multiplier term can leave F^L > F^U.
/// Throws std::invalid_argument on negative multipliers or bad lengths.
std::vector<Bounds> lagrangian_bounds(const Problem& prob, const Vector& x, const Vector& lambda, const Vector& y,
                                      const Vector& mu);

/// As lagrangian_bounds but as intervals; throws std::domain_error if some
/// component has inverted endpoints.
IntervalVector lagrangian(const Problem& prob, const Vector& x, const Vector& lambda, const Vector& y,
                          const Vector& mu);

struct SaddleCondition {
  Verdict verdict = Verdict::HoldsOnGrid;
  std::optional<Vector> witness;  ///< first refuting lambda for (i), x for (ii)
  std::vector<Vector> witnesses;  ///< every refuting grid point, in scan order
  std::size_t checked = 0;
  bool holds() const { return verdict == Verdict::HoldsOnGrid; }
};

struct SaddleReport {
  SaddleCondition cond_i;   ///< L(xbar, lambda, xbar, lambar) not >_LU L(xbar, lambar, xbar, lambar)
  SaddleCondition cond_ii;  ///< L(xbar, lambar, xbar, lambar) not >_LU L(x, lambar, xbar, lambar)
  Vector lambda_lo;
  Vector lambda_hi;
  Vector x_lo;
  Vector x_hi;
  bool holds() const { return cond_i.holds() && cond_ii.holds(); }
};

/// Scan both saddle conditions over the full grids, recording every witness
/// and the grids' bounding boxes. Strict comparisons use tols.tol_strict.
SaddleReport check_saddle(const Problem& prob, const Vector& xbar, const Vector& lambar,
                          const std::vector<Vector>& lambda_grid, const std::vector<Vector>& x_grid,
                          const Tolerances& tols = {});

/// Per-axis grid on [0, 4 max(lambar_j, 1)] with steps subintervals, plus
/// lambar and lambar + e_k for every k.
std::vector<Vector> default_lambda_grid(const Vector& lambar, int steps);

struct SaddleImplication {
  bool hypothesis_holds = false;  ///< g_j(x) <= g_j(xbar) on grid points in S
  std::optional<Vector> hypothesis_witness;
  bool saddle_holds = false;
  bool conclusion_checked = false;
  bool almost_eps_quasi = false;
  std::string status;
  bool ok() const { return !conclusion_checked || almost_eps_quasi; }
};

/// If the monotone-g hypothesis and both saddle conditions hold on the grids,
/// classify xbar on the grid and expect almost_eps_quasi to hold.
SaddleImplication saddle_implies_solution(const Problem& prob, const Vector& xbar, const Vector& lambar,
                                          const std::vector<Vector>& lambda_grid, const Grid& grid,
                                          const Tolerances& tols = {});

}  // namespace robustlu
