#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "robustlu/expr.hpp"
#include "robustlu/interval.hpp"
#include "robustlu/setcalc.hpp"

namespace robustlu {

/// Numeric tolerances shared by every certificate. Defaults follow the
/// documented CLI defaults.
struct Tolerances {
  double tol_feas = 1e-9;      ///< slack on g_j <= 0, g_j <= sqrt(theta) and S membership
  double tol_active = 1e-9;    ///< active samples and kink branches
  double tol_incl = 1e-9;      ///< slack on dist <= sqrt(theta)
  double tol_sign = 1e-9;      ///< g_j(z) <= tol_sign counts as "<= 0"
  double tol_pos = 1e-12;      ///< lambda_j >= tol_pos counts as "> 0"
  double tol_strict = 0.0;     ///< margin demanded by strict LU comparisons
  double delta_strict = 1e-9;  ///< slack for strict rows in the omega systems
};

/// Precision vector E = (E_1, ..., E_m) with 0 <= eps_i^L <= eps_i^U and a
/// positive total.
class Precision {
 public:
  explicit Precision(std::vector<Interval> eps);

  const std::vector<Interval>& eps() const { return eps_; }
  const Interval& operator[](std::size_t i) const { return eps_[i]; }
  std::size_t size() const { return eps_.size(); }

  double theta() const { return theta_; }
  double sqrt_theta() const { return sqrt_theta_; }

 private:
  std::vector<Interval> eps_;
  double theta_;
  double sqrt_theta_;
};

/// theta = sum_i (eps_i^L + eps_i^U).
inline double theta(const Precision& p) { return p.theta(); }

/// Box a finite sample set was generated from.
struct BoxProvenance {
  Vector lo;
  Vector hi;
  std::vector<int> counts;  ///< points per axis
};

/// Finite stand-in for a compact uncertainty set.
class UncertaintySet {
 public:
  explicit UncertaintySet(std::vector<Vector> points, std::optional<BoxProvenance> box = std::nullopt);

  /// Tensor grid with counts[k] equally spaced points on axis k (endpoints
  /// included). A count of 1 requires lo == hi.
  static UncertaintySet from_box(const Vector& lo, const Vector& hi, const std::vector<int>& counts);

  std::size_t dim() const { return static_cast<std::size_t>(points_.front().size()); }
  std::size_t size() const { return points_.size(); }
  const std::vector<Vector>& points() const { return points_; }
  const std::optional<BoxProvenance>& box() const { return box_; }

 private:
  std::vector<Vector> points_;
  std::optional<BoxProvenance> box_;
};

struct Objective {
  Expr lower;
  Expr upper;
};

struct Constraint {
  Expr g;
  UncertaintySet samples;
};

class Problem {
 public:
  Problem(std::size_t n, std::vector<Objective> objectives, std::vector<Constraint> constraints,
          Polyhedron S, Precision precision);

  std::size_t n() const { return n_; }
  std::size_t m() const { return objectives_.size(); }
  std::size_t p() const { return constraints_.size(); }
  const std::vector<Objective>& objectives() const { return objectives_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Polyhedron& S() const { return S_; }
  const Precision& precision() const { return precision_; }
  double theta() const { return precision_.theta(); }
  double sqrt_theta() const { return precision_.sqrt_theta(); }

 private:
  std::size_t n_;
  std::vector<Objective> objectives_;
  std::vector<Constraint> constraints_;
  Polyhedron S_;
  Precision precision_;
};

/// g_j(x) = max over the sample set of g_j(x, v).
double robust_value(const Problem& prob, std::size_t j, const Vector& x);
Vector robust_values(const Problem& prob, const Vector& x);

/// Samples with g_j(x, v) >= g_j(x) - tol_active; never empty.
std::vector<Vector> active_set(const Problem& prob, std::size_t j, const Vector& x,
                               double tol_active = 1e-9);

bool in_S(const Problem& prob, const Vector& x, double tol_feas = 1e-9);
bool in_Omega(const Problem& prob, const Vector& x, double tol_feas = 1e-9);
bool in_Omega_E(const Problem& prob, const Vector& x, double tol_feas = 1e-9);

/// Raw objective endpoints (f_i^L(x), f_i^U(x)); no ordering check.
std::vector<Bounds> objective_bounds(const Problem& prob, const Vector& x);

/// Objective intervals f_i(x). Throws std::domain_error when some
/// f_i^L(x) > f_i^U(x).
IntervalVector objective_values(const Problem& prob, const Vector& x);

/// First point where f_i^L > f_i^U for some i, if any.
std::optional<Vector> find_objective_violation(const Problem& prob, const std::vector<Vector>& points);

}  // namespace robustlu
