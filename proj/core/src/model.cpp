#include "robustlu/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "robustlu/format.hpp"

namespace robustlu {

Precision::Precision(std::vector<Interval> eps) : eps_(std::move(eps)), theta_(0.0) {
  if (eps_.empty()) throw std::invalid_argument("precision vector is empty");
  for (std::size_t i = 0; i < eps_.size(); ++i) {
    if (eps_[i].lo() < 0.0) {
      throw std::invalid_argument("precision " + std::to_string(i + 1) + " has a negative lower bound");
    }
    theta_ += eps_[i].lo() + eps_[i].hi();
  }
  if (!(theta_ > 0.0) || !std::isfinite(theta_)) {
    throw std::invalid_argument("precision vector must have a positive finite total");
  }
  sqrt_theta_ = std::sqrt(theta_);
}

UncertaintySet::UncertaintySet(std::vector<Vector> points, std::optional<BoxProvenance> box)
    : points_(std::move(points)), box_(std::move(box)) {
  if (points_.empty()) throw std::invalid_argument("uncertainty set is empty");
  for (const auto& p : points_) {
    if (p.size() != points_.front().size()) {
      throw std::invalid_argument("uncertainty samples have inconsistent dimensions");
    }
  }
}

UncertaintySet UncertaintySet::from_box(const Vector& lo, const Vector& hi, const std::vector<int>& counts) {
  const auto q = lo.size();
  if (hi.size() != q || counts.size() != static_cast<std::size_t>(q)) {
    throw std::invalid_argument("uncertainty box: box_lo, box_hi and grid differ in length");
  }
  for (Eigen::Index k = 0; k < q; ++k) {
    const int c = counts[static_cast<std::size_t>(k)];
    if (c < 1) throw std::invalid_argument("uncertainty box: grid counts must be positive");
    if (lo[k] > hi[k]) throw std::invalid_argument("uncertainty box: box_lo exceeds box_hi");
    if (c == 1 && lo[k] != hi[k]) {
      throw std::invalid_argument("uncertainty box: a single grid point needs box_lo == box_hi");
    }
  }
  std::vector<Vector> points;
  std::vector<int> idx(static_cast<std::size_t>(q), 0);
  while (true) {
    Vector v(q);
    for (Eigen::Index k = 0; k < q; ++k) {
      const int c = counts[static_cast<std::size_t>(k)];
      const int i = idx[static_cast<std::size_t>(k)];
      v[k] = c == 1 ? lo[k] : lo[k] + (hi[k] - lo[k]) * static_cast<double>(i) / static_cast<double>(c - 1);
    }
    points.push_back(std::move(v));
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == counts[k]) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return UncertaintySet(std::move(points), BoxProvenance{lo, hi, counts});
}

Problem::Problem(std::size_t n, std::vector<Objective> objectives, std::vector<Constraint> constraints,
                 Polyhedron S, Precision precision)
    : n_(n),
      objectives_(std::move(objectives)),
      constraints_(std::move(constraints)),
      S_(std::move(S)),
      precision_(std::move(precision)) {
  if (n_ == 0) throw std::invalid_argument("problem dimension must be positive");
  if (objectives_.empty()) throw std::invalid_argument("problem needs at least one objective");
  if (precision_.size() != objectives_.size()) {
    throw std::invalid_argument("precision vector has " + std::to_string(precision_.size()) +
                                " entries for " + std::to_string(objectives_.size()) + " objectives");
  }
  if (S_.dim() != n_) throw std::invalid_argument("ground set dimension differs from n");
  for (std::size_t i = 0; i < objectives_.size(); ++i) {
    const auto& o = objectives_[i];
    if (o.lower.n_vars() != n_ || o.upper.n_vars() != n_ || o.lower.n_params() != 0 ||
        o.upper.n_params() != 0) {
      throw std::invalid_argument("objective " + std::to_string(i + 1) +
                                  " must be declared over x1..xn without parameters");
    }
  }
  for (std::size_t j = 0; j < constraints_.size(); ++j) {
    const auto& c = constraints_[j];
    if (c.g.n_vars() != n_ || c.g.n_params() != c.samples.dim()) {
      throw std::invalid_argument("constraint " + std::to_string(j + 1) +
                                  " dimensions disagree with its uncertainty samples");
    }
  }
}

namespace {

void check_x(const Problem& prob, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != prob.n()) {
    throw std::invalid_argument("point has dimension " + std::to_string(x.size()) + ", expected " +
                                std::to_string(prob.n()));
  }
}

const Constraint& constraint_at(const Problem& prob, std::size_t j) {
  if (j >= prob.p()) throw std::out_of_range("constraint index out of range");
  return prob.constraints()[j];
}

}  // namespace

double robust_value(const Problem& prob, std::size_t j, const Vector& x) {
  const auto& c = constraint_at(prob, j);
  check_x(prob, x);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : c.samples.points()) best = std::max(best, c.g.eval(x, v));
  return best;
}

Vector robust_values(const Problem& prob, const Vector& x) {
  Vector g(static_cast<Eigen::Index>(prob.p()));
  for (std::size_t j = 0; j < prob.p(); ++j) g[static_cast<Eigen::Index>(j)] = robust_value(prob, j, x);
  return g;
}

std::vector<Vector> active_set(const Problem& prob, std::size_t j, const Vector& x, double tol_active) {
  const auto& c = constraint_at(prob, j);
  check_x(prob, x);
  std::vector<double> vals;
  vals.reserve(c.samples.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : c.samples.points()) {
    vals.push_back(c.g.eval(x, v));
    best = std::max(best, vals.back());
  }
  std::vector<Vector> out;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (vals[k] >= best - tol_active) out.push_back(c.samples.points()[k]);
  }
  return out;
}

bool in_S(const Problem& prob, const Vector& x, double tol_feas) {
  check_x(prob, x);
  return prob.S().contains(x, tol_feas);
}

bool in_Omega(const Problem& prob, const Vector& x, double tol_feas) {
  if (!in_S(prob, x, tol_feas)) return false;
  for (std::size_t j = 0; j < prob.p(); ++j) {
    if (robust_value(prob, j, x) > tol_feas) return false;
  }
  return true;
}

bool in_Omega_E(const Problem& prob, const Vector& x, double tol_feas) {
  if (!in_S(prob, x, tol_feas)) return false;
  for (std::size_t j = 0; j < prob.p(); ++j) {
    if (robust_value(prob, j, x) > prob.sqrt_theta() + tol_feas) return false;
  }
  return true;
}

std::vector<Bounds> objective_bounds(const Problem& prob, const Vector& x) {
  check_x(prob, x);
  const Vector none(0);
  std::vector<Bounds> out;
  out.reserve(prob.m());
  for (const auto& o : prob.objectives()) out.emplace_back(o.lower.eval(x, none), o.upper.eval(x, none));
  return out;
}

IntervalVector objective_values(const Problem& prob, const Vector& x) {
  const auto b = objective_bounds(prob, x);
  IntervalVector out;
  out.reserve(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!b[i].valid()) {
      throw std::domain_error("objective " + std::to_string(i + 1) + " has lower > upper at x = (" +
                              format_vector(x) + ")");
    }
    out.emplace_back(b[i].lo, b[i].hi);
  }
  return out;
}

std::optional<Vector> find_objective_violation(const Problem& prob, const std::vector<Vector>& points) {
  for (const auto& x : points) {
    for (const auto& b : objective_bounds(prob, x)) {
      if (!b.valid()) return x;
    }
  }
  return std::nullopt;
}

}  // namespace robustlu
