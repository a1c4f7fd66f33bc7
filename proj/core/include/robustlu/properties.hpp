#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "robustlu/classify.hpp"

namespace robustlu {

/// Random affine instance with a planted KKT pair up to E: box S, n <= 3,
/// m <= 3, p <= 2, one uncertain parameter per constraint.
struct AffineInstance {
  Problem problem;
  Vector z;
  Vector lambda;
  Grid grid;  ///< tensor grid over S
};

AffineInstance random_affine_instance(std::uint64_t seed);

struct HarnessOptions {
  std::size_t instances = 100;
  std::uint64_t seed = 0;
  std::size_t dual_samples = 100;
  int lambda_steps = 4;
  /// Margin for strict LU comparisons; keeps rounding-level ties from being
  /// counted as dominations.
  double tol_strict = 1e-9;
};

struct PropertyStats {
  std::string name;
  std::size_t checked = 0;   ///< instances where the hypotheses held
  std::size_t vacuous = 0;   ///< instances where they did not
  std::size_t violations = 0;
  std::string first_violation;
};

struct HarnessReport {
  std::size_t instances = 0;
  std::vector<PropertyStats> properties;
  bool ok() const;
  const PropertyStats* find(const std::string& name) const;
};

/// Runs every theorem property over the seeded instances:
///   anchor_kkt, class_implications, generalized_implies_eps, sufficiency_generalized,
///   sufficiency_type1, sufficiency_type2, anchor_dual_membership,
///   eps_duality, converse_duality, saddle_necessary, saddle_sufficient.
HarnessReport run_property_suite(const HarnessOptions& opts = {});

}  // namespace robustlu
