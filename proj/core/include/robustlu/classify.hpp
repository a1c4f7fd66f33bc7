#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robustlu/model.hpp"

namespace robustlu {

/// Tensor grid over a box: axis k holds steps[k] + 1 equally spaced points
/// lo_k + (hi_k - lo_k) * i / steps[k]. Doubling steps yields a superset.
class Grid {
 public:
  Grid(Vector lo, Vector hi, std::vector<int> steps);

  /// "lo,hi,steps" applied to every axis, or one triple per axis joined by
  /// commas ("lo1,hi1,s1,lo2,hi2,s2"). Throws std::invalid_argument.
  static Grid parse(std::string_view spec, std::size_t n);

  std::size_t dim() const { return static_cast<std::size_t>(lo_.size()); }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  const std::vector<int>& steps() const { return steps_; }

  std::size_t size() const;
  /// k-th point, first axis varying fastest.
  Vector point(std::size_t k) const;
  std::vector<Vector> points() const;

  /// Same box with every axis step count multiplied by factor.
  Grid refined(int factor) const;

  /// Compact "lo:hi:steps" per axis, joined with ';'.
  std::string describe() const;

 private:
  Vector lo_;
  Vector hi_;
  std::vector<int> steps_;
};

enum class Verdict { HoldsOnGrid, Refuted };
std::string_view to_string(Verdict v);

struct Flag {
  Verdict verdict = Verdict::HoldsOnGrid;
  std::optional<Vector> witness;
  std::string reason;

  bool holds() const { return verdict == Verdict::HoldsOnGrid; }
};

struct Classification {
  Flag eps_pareto;
  Flag eps_quasi_pareto;
  Flag almost_eps_pareto;
  Flag almost_eps_quasi;
  Flag almost_regular;
  Flag almost_theta;
  Flag almost_theta_quasi;
  Flag almost_theta_regular;

  bool z_in_Omega = false;
  bool z_in_Omega_E = false;
  std::size_t grid_points = 0;
  std::size_t feasible_points = 0;  ///< grid points in Omega
  std::string grid;                 ///< Grid::describe()

  /// (name, flag) pairs in report order.
  std::vector<std::pair<std::string_view, const Flag*>> flags() const;
};

/// phi(x) = sum_i (f_i^L(x) + f_i^U(x)).
double scalarize(const Problem& prob, const Vector& x);

/// f_i(x) <=_LU f_i(z) - E_i for all i, strictly for some i.
bool dominates_eps(const Problem& prob, const Vector& x, const Vector& z, double tol_strict = 0.0);

/// f_i(x) <=_LU f_i(z) - (E_i / sqrt(theta)) ||x - z|| for all i, strictly for some i.
bool dominates_eps_quasi(const Problem& prob, const Vector& x, const Vector& z, double tol_strict = 0.0);

/// Grid falsification of every solution concept at z. Domination candidates
/// are the grid points in Omega; ties in phi are never counted as violations.
Classification classify_point(const Problem& prob, const Vector& z, const Grid& grid, const Tolerances& tols = {});

enum class ImplicationStatus { Pass, Vacuous, Violation };
std::string_view to_string(ImplicationStatus s);

struct ClassImplicationReport {
  struct Item {
    std::string_view name;
    ImplicationStatus status;
  };
  std::vector<Item> items;
  Classification classification;

  bool ok() const;
};

/// Evaluate almost_theta => almost_eps_pareto, almost_theta_quasi =>
/// almost_eps_quasi and almost_theta_regular => almost_regular.
ClassImplicationReport class_implications_check(const Problem& prob, const Vector& z, const Grid& grid, const Tolerances& tols = {});
ClassImplicationReport class_implications_check(const Classification& c);

}  // namespace robustlu
