#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace robustlu {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Convex hull of a finite, nonempty vertex list in R^n. Duplicate vertices
/// are allowed; the set is the hull, not the list.
class Polytope {
 public:
  explicit Polytope(std::vector<Vector> vertices);

  static Polytope singleton(Vector v) { return Polytope({std::move(v)}); }

  std::size_t dim() const { return static_cast<std::size_t>(vertices_.front().size()); }
  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vector>& vertices() const { return vertices_; }
  const Vector& vertex(std::size_t k) const { return vertices_[k]; }

 private:
  std::vector<Vector> vertices_;
};

/// Finitely generated cone {sum mu_r g_r : mu >= 0}; no generators means {0}.
class PolyCone {
 public:
  explicit PolyCone(std::size_t dim, std::vector<Vector> generators = {});

  static PolyCone zero(std::size_t dim) { return PolyCone(dim); }

  std::size_t dim() const { return dim_; }
  const std::vector<Vector>& generators() const { return generators_; }
  bool is_zero() const { return generators_.empty(); }

  /// Membership test by nonnegative least squares against the generators.
  bool contains(const Vector& y, double tol = 1e-9) const;

 private:
  std::size_t dim_;
  std::vector<Vector> generators_;
};

/// Polyhedron {x : a_k . x <= b_k}. Emptiness is never checked.
struct Halfspace {
  Vector a;
  double b;
};

class Polyhedron {
 public:
  explicit Polyhedron(std::size_t dim, std::vector<Halfspace> rows = {});

  /// Axis-aligned box expressed as 2n halfspaces.
  static Polyhedron box(const Vector& lo, const Vector& hi);

  std::size_t dim() const { return dim_; }
  const std::vector<Halfspace>& rows() const { return rows_; }

  bool contains(const Vector& x, double tol) const;
  /// Largest violation max_k (a_k . x - b_k), or -inf with no rows.
  double max_violation(const Vector& x) const;

  /// Euclidean projection by Dykstra's cyclic halfspace projection.
  Vector project(const Vector& y, double tol = 1e-10, int max_sweeps = 10000) const;

 private:
  std::size_t dim_;
  std::vector<Halfspace> rows_;
};

/// Normal cone of the polyhedron at z: generated by the outward normals of the
/// rows active within tol_active. Throws std::domain_error if z is outside S
/// by more than tol_active.
PolyCone normal_cone(const Polyhedron& S, const Vector& z, double tol_active = 1e-9);

/// Largest dimension supported by polar().
inline constexpr std::size_t kMaxPolarDim = 4;

/// Generators of {y : y . g <= 0 for all generators g}. Lineality directions
/// are returned as +/- pairs. Throws std::domain_error for dim > kMaxPolarDim.
PolyCone polar(const PolyCone& c);

/// co(P_1 u ... u P_k) by vertex concatenation.
Polytope hull_union(const std::vector<Polytope>& ps);

struct WeightedPolytope {
  double weight;
  Polytope polytope;
};

struct DistOptions {
  double tol = 1e-10;     ///< gradient-mapping norm at which iteration stops
  int max_iter = 100000;
};

/// Witness of dist_origin: one convex weight vector per term, cone
/// coefficients, and the residual vector they produce.
struct DistResult {
  double dist = 0.0;
  Vector residual;
  std::vector<Vector> alphas;
  Vector mu;
  int iterations = 0;
  bool converged = false;
  bool polished = false;

  bool within(double radius, double tol = 0.0) const { return dist <= radius + tol; }
};

/// min || sum_t w_t sum_k alpha_tk p_tk + sum_r mu_r g_r || over per-term
/// simplices alpha_t and mu >= 0. Minkowski sums are never materialised.
/// Returns the best point found; converged=false flags an inexact answer.
DistResult dist_origin(const std::vector<WeightedPolytope>& terms, const PolyCone& cone,
                       const DistOptions& opts = {});

/// Euclidean projection onto the probability simplex.
Vector project_simplex(const Vector& y);

}  // namespace robustlu
