#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robustlu/kkt.hpp"

namespace robustlu {

struct PenaltyOptions {
  double r0 = 1.0;
  double shrink = 0.1;
  int max_outer = 8;
  int starts = 16;
  int inner_iters = 50000;   ///< projected subgradient steps per start
  int polish_iters = 20000;  ///< projected gradient steps on the best start
  std::uint64_t seed = 0;
  /// Box the random starts are drawn from (then projected onto S). Defaults
  /// to [-10, 10]^n.
  std::optional<Vector> box_lo;
  std::optional<Vector> box_hi;
};

struct PenaltyStep {
  Vector r;
  Vector z;
  Vector g_plus;
  double value = 0.0;         ///< penalized objective at z
  double stationarity = 0.0;  ///< KKT inclusion residual of (z, lambda(r))
};

struct PenaltyRun {
  Vector z;
  Vector lambda;  ///< lambda_j = 2 g_j^+(z) / r_j
  Vector r;
  std::vector<PenaltyStep> history;
  bool success = false;
  bool feasibility_reached = false;  ///< g_j^+(z) < sqrt(theta) for all j
  bool bounded_below_warning = false;
  KktCertificate kkt;
  std::string message;
};

/// phi(x) + sum_j (1/r_j) [g_j^+(x)]^2.
double penalized_value(const Problem& prob, const Vector& x, const Vector& r);

/// Sampling heuristic for "phi is bounded below on S": compares the best phi
/// found on the start box scaled by 1, 10 and 100. True means the samples
/// look unbounded.
bool looks_unbounded_below(const Problem& prob, const Vector& lo, const Vector& hi, std::uint64_t seed);

/// Quadratic-penalty construction of an almost regular theta-solution and its
/// multipliers. Outer iterations shrink r_j for the constraints that still
/// have g_j^+ >= sqrt(theta); success additionally requires the returned pair
/// to pass check_kkt_pair.
PenaltyRun solve_penalty(const Problem& prob, const PenaltyOptions& opts = {}, const Tolerances& tols = {});

}  // namespace robustlu
