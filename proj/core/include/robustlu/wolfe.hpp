#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "robustlu/classify.hpp"
#include "robustlu/convexity.hpp"
#include "robustlu/kkt.hpp"

namespace robustlu {

struct DualPoint {
  Vector y;
  Vector lambda;
};

/// Dual problem built around a KKT pair (z_E, lambda_E).
struct DualConfig {
  Vector anchor_z;
  Vector anchor_lambda;
  bool cap_mode = true;  ///< enforce lambda_j <= lambda_jE on J(E)
  std::vector<std::size_t> J_eps;  ///< {j : 0 < g_j(z_E) <= sqrt(theta)}

  /// Validates the anchor with check_kkt_pair; throws std::invalid_argument
  /// with the certificate reason when it fails.
  static DualConfig make(const Problem& prob, const Vector& z, const Vector& lambda, bool cap_mode,
                         const Tolerances& tols = {});
};

/// L_i(y, lambda) = f_i(y) + (1/2m) sum_j lambda_j g_j(y) on both endpoints.
IntervalVector dual_objective(const Problem& prob, const Vector& y, const Vector& lambda);

struct DualMembership {
  bool member = false;
  double inclusion_residual = 0.0;
  double allowance = 0.0;
  bool inclusion_ok = false;
  bool cap_ok = true;
  std::vector<std::size_t> cap_violations;
  bool surrogate_exact = true;
  std::string reason;
};

/// (y, lambda) in Omega_D. Throws std::domain_error if y is not in S.
DualMembership in_Omega_D(const Problem& prob, const DualConfig& cfg, const Vector& y, const Vector& lambda,
                          const Tolerances& tols = {});

/// L_i(y, lambda) - (E_i / sqrt(theta)) ||y - ybar|| >=_LU L_i(ybar, lambar)
/// for all i, strictly for some i.
bool dual_dominates(const Problem& prob, const DualPoint& p, const DualPoint& bar, double tol_strict = 0.0);

struct DualVerdict {
  bool holds = true;  ///< E-quasi Pareto for the dual on the samples
  std::optional<DualPoint> witness;
  std::size_t samples_checked = 0;
  std::size_t samples_feasible = 0;
  std::string reason;
};

/// Scans samples that lie in Omega_D for one dominating the candidate.
/// Samples with y outside S are skipped.
DualVerdict dual_classify(const Problem& prob, const DualConfig& cfg, const DualPoint& candidate,
                          const std::vector<DualPoint>& samples, const Tolerances& tols = {});

/// (y from ys in S) x (lambda on a per-axis grid over [0, lambda_max_j] with
/// lambda_steps subintervals), kept when in Omega_D.
std::vector<DualPoint> dual_samples(const Problem& prob, const DualConfig& cfg, const std::vector<Vector>& ys,
                                    const Vector& lambda_max, int lambda_steps, const Tolerances& tols = {});

struct ConverseReport {
  bool dual_feasible = false;
  bool convexity_ok = false;
  bool hypothesis_holds = false;
  bool domination_found = false;
  std::optional<Vector> hypothesis_witness;  ///< x in Omega with g_j(x) > g_j(y)
  std::optional<Vector> witness;             ///< dominating x
  std::string status;

  /// False only when every hypothesis holds and a dominator was still found.
  bool consistent() const { return !(convexity_ok && hypothesis_holds && domination_found); }
};

/// Converse-duality harness on grid points: generalized convexity at y over
/// grid points in S, the hypothesis g_j(x) <= g_j(y) on grid points in Omega,
/// then a search for x in Omega that E-quasi dominates y.
ConverseReport converse_duality_check(const Problem& prob, const DualConfig& cfg, const DualPoint& dual_point,
                                      const std::vector<Vector>& grid_points, const Tolerances& tols = {});

}  // namespace robustlu
