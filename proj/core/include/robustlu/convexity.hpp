#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robustlu/model.hpp"

namespace robustlu {

enum class Notion { Generalized, ThetaPseudoQuasi, EpsPseudoQuasi };
std::string_view to_string(Notion n);
/// Accepts "generalized", "theta_pseudo_quasi" and "eps_pseudo_quasi".
std::optional<Notion> parse_notion(std::string_view s);

/// a . omega <= b, tagged with the part of the definition it came from.
struct OmegaRow {
  Vector a;
  double b;
  std::string label;
};

/// {omega : rows hold, ||omega|| <= radius}.
struct OmegaSystem {
  std::size_t dim = 0;
  std::vector<OmegaRow> rows;
  double radius = 0.0;
};

struct MinNormPoint {
  bool nonempty = false;
  double norm = std::numeric_limits<double>::infinity();
  Vector omega;
};

/// Smallest-norm point of {omega : a_k . omega <= b_k + slack}, found exactly
/// by enumerating linearly independent active sets (dimension <= 4).
MinNormPoint min_norm_point(const OmegaSystem& sys, double slack);

/// Feasible within tol: min_norm_point(sys, tol).norm <= radius + tol.
bool omega_feasible(const OmegaSystem& sys, double tol);

struct Violation {
  double amount = 0.0;  ///< smallest uniform slack t making the system feasible
  Vector omega;         ///< a point attaining it
  std::vector<std::string> failing_rows;  ///< rows still violated at omega by more than tol
};
Violation min_violation(const OmegaSystem& sys, double tol);

/// Subgradient polytopes at z in selection order: f_1^L, f_1^U, ..., f_m^L,
/// f_m^U, then d_x g_j(z, v) for each constraint j and each active v.
struct SelectionSpace {
  std::vector<Polytope> polytopes;
  std::vector<std::pair<std::size_t, Vector>> constraint_samples;  ///< (j, v) behind each constraint polytope
};
SelectionSpace selection_space(const Problem& prob, const Vector& z, const Tolerances& tols = {});

/// The omega system of a notion for one comparison point x and one choice of
/// subgradients (one vector per polytope of selection_space, same order).
OmegaSystem omega_system(const Problem& prob, Notion notion, const Vector& z, const Vector& x,
                         const std::vector<Vector>& selection, const Tolerances& tols = {});

struct Counterexample {
  Vector x;
  std::vector<Vector> selection;
  double violation = 0.0;
  std::vector<std::string> failing_rows;
};

struct ConvexityVerdict {
  Notion notion = Notion::Generalized;
  bool certified = false;  ///< certified-on-samples
  std::size_t samples_checked = 0;
  std::size_t samples_skipped = 0;  ///< samples outside S
  std::size_t systems_checked = 0;
  /// (x, omega) for the first selection at every certified sample.
  std::vector<std::pair<Vector, Vector>> witnesses;
  std::optional<Counterexample> counterexample;
};

/// Largest number of subgradient selections enumerated per sample.
inline constexpr std::size_t kMaxSelections = 4096;

/// Check the notion at z against every sample in S and every vertex
/// selection; stops at the first infeasible omega system. Throws
/// std::domain_error if z is not in S and std::length_error if the selection
/// count exceeds kMaxSelections.
ConvexityVerdict certify(const Problem& prob, Notion notion, const Vector& z, const std::vector<Vector>& samples,
                         const Tolerances& tols = {});

}  // namespace robustlu
