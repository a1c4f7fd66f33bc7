#include "robustlu/classify.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "robustlu/format.hpp"

namespace robustlu {

Grid::Grid(Vector lo, Vector hi, std::vector<int> steps)
    : lo_(std::move(lo)), hi_(std::move(hi)), steps_(std::move(steps)) {
  if (lo_.size() == 0) throw std::invalid_argument("grid needs at least one axis");
  if (hi_.size() != lo_.size() || steps_.size() != static_cast<std::size_t>(lo_.size())) {
    throw std::invalid_argument("grid bounds and steps differ in length");
  }
  for (Eigen::Index k = 0; k < lo_.size(); ++k) {
    if (!(lo_[k] < hi_[k])) throw std::invalid_argument("grid axis needs lo < hi");
    if (steps_[static_cast<std::size_t>(k)] < 1) throw std::invalid_argument("grid steps must be >= 1");
  }
}

Grid Grid::parse(std::string_view spec, std::size_t n) {
  std::vector<double> nums;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', pos), spec.size());
    std::string_view tok = spec.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    double x = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(x)) {
      throw std::invalid_argument("grid: malformed number '" + std::string(tok) + "'");
    }
    nums.push_back(x);
    pos = comma + 1;
  }
  if (nums.size() != 3 && nums.size() != 3 * n) {
    throw std::invalid_argument("grid: expected lo,hi,steps or one triple per axis (" + std::to_string(n) +
                                " axes)");
  }
  Vector lo(static_cast<Eigen::Index>(n));
  Vector hi(static_cast<Eigen::Index>(n));
  std::vector<int> steps(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t b = nums.size() == 3 ? 0 : 3 * k;
    const double s = nums[b + 2];
    if (s < 1 || s != std::floor(s) || s > 1e7) throw std::invalid_argument("grid: steps must be a positive integer");
    lo[static_cast<Eigen::Index>(k)] = nums[b];
    hi[static_cast<Eigen::Index>(k)] = nums[b + 1];
    steps[k] = static_cast<int>(s);
  }
  return Grid(lo, hi, steps);
}

std::size_t Grid::size() const {
  std::size_t total = 1;
  for (int s : steps_) total *= static_cast<std::size_t>(s) + 1;
  return total;
}

Vector Grid::point(std::size_t k) const {
  Vector x(lo_.size());
  for (Eigen::Index a = 0; a < lo_.size(); ++a) {
    const auto s = static_cast<std::size_t>(steps_[static_cast<std::size_t>(a)]);
    const std::size_t i = k % (s + 1);
    k /= s + 1;
    // Endpoints are hit exactly so that refinements nest.
    x[a] = i == s ? hi_[a] : lo_[a] + (hi_[a] - lo_[a]) * static_cast<double>(i) / static_cast<double>(s);
  }
  return x;
}

std::vector<Vector> Grid::points() const {
  std::vector<Vector> out;
  out.reserve(size());
  for (std::size_t k = 0; k < size(); ++k) out.push_back(point(k));
  return out;
}

Grid Grid::refined(int factor) const {
  std::vector<int> s = steps_;
  for (int& v : s) v *= factor;
  return Grid(lo_, hi_, s);
}

std::string Grid::describe() const {
  std::string out;
  for (Eigen::Index a = 0; a < lo_.size(); ++a) {
    if (a > 0) out += ';';
    out += format_number(lo_[a]) + ":" + format_number(hi_[a]) + ":" +
           std::to_string(steps_[static_cast<std::size_t>(a)]);
  }
  return out;
}

std::string_view to_string(Verdict v) { return v == Verdict::HoldsOnGrid ? "holds-on-grid" : "refuted"; }

std::string_view to_string(ImplicationStatus s) {
  switch (s) {
    case ImplicationStatus::Pass:
      return "pass";
    case ImplicationStatus::Vacuous:
      return "vacuous";
    case ImplicationStatus::Violation:
      return "violation";
  }
  return "";
}

std::vector<std::pair<std::string_view, const Flag*>> Classification::flags() const {
  return {{"eps_pareto", &eps_pareto},
          {"eps_quasi_pareto", &eps_quasi_pareto},
          {"almost_eps_pareto", &almost_eps_pareto},
          {"almost_eps_quasi", &almost_eps_quasi},
          {"almost_regular", &almost_regular},
          {"almost_theta", &almost_theta},
          {"almost_theta_quasi", &almost_theta_quasi},
          {"almost_theta_regular", &almost_theta_regular}};
}

double scalarize(const Problem& prob, const Vector& x) {
  double phi = 0.0;
  for (const auto& b : objective_bounds(prob, x)) phi += b.lo + b.hi;
  return phi;
}

namespace {

// a <=_LU b for all components and some endpoint strictly below by more than
// tol_strict. Endpoints are raw so that invalid objectives still compare.
bool lu_dominated(const std::vector<Bounds>& a, const std::vector<Bounds>& b, double tol_strict) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].lo > b[i].lo || a[i].hi > b[i].hi) return false;
    if (a[i].lo < b[i].lo - tol_strict || a[i].hi < b[i].hi - tol_strict) strict = true;
  }
  return strict;
}

// f(z) - k * E as raw endpoints: [f^L - k eps^U, f^U - k eps^L].
std::vector<Bounds> shifted(const Problem& prob, const std::vector<Bounds>& fz, double k) {
  std::vector<Bounds> out;
  out.reserve(fz.size());
  for (std::size_t i = 0; i < fz.size(); ++i) {
    const Interval& e = prob.precision()[i];
    out.emplace_back(fz[i].lo - k * e.hi(), fz[i].hi - k * e.lo());
  }
  return out;
}

bool dominates_with(const Problem& prob, const std::vector<Bounds>& fx, const std::vector<Bounds>& fz,
                    double k, double tol_strict) {
  return lu_dominated(fx, shifted(prob, fz, k), tol_strict);
}

void refute(Flag& f, const Vector& x) {
  if (f.holds()) {
    f.verdict = Verdict::Refuted;
    f.witness = x;
    f.reason = "dominated by a feasible grid point";
  }
}

void refute_vacuous(Flag& f, std::string reason) {
  f.verdict = Verdict::Refuted;
  f.witness.reset();
  f.reason = std::move(reason);
}

void combine(Flag& out, const Flag& a, const Flag& b) {
  if (a.holds() && b.holds()) {
    out = Flag{};
    return;
  }
  const Flag& bad = a.holds() ? b : a;
  out = bad;
}

}  // namespace

bool dominates_eps(const Problem& prob, const Vector& x, const Vector& z, double tol_strict) {
  return dominates_with(prob, objective_bounds(prob, x), objective_bounds(prob, z), 1.0, tol_strict);
}

bool dominates_eps_quasi(const Problem& prob, const Vector& x, const Vector& z, double tol_strict) {
  const double k = (x - z).norm() / prob.sqrt_theta();
  return dominates_with(prob, objective_bounds(prob, x), objective_bounds(prob, z), k, tol_strict);
}

Classification classify_point(const Problem& prob, const Vector& z, const Grid& grid, const Tolerances& tols) {
  if (grid.dim() != prob.n()) throw std::invalid_argument("grid dimension differs from the problem dimension");
  Classification c;
  c.grid = grid.describe();
  c.grid_points = grid.size();
  c.z_in_Omega = in_Omega(prob, z, tols.tol_feas);
  c.z_in_Omega_E = in_Omega_E(prob, z, tols.tol_feas);

  const auto fz = objective_bounds(prob, z);
  const double phi_z = scalarize(prob, z);
  const double theta = prob.theta();
  const double root = prob.sqrt_theta();

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Vector x = grid.point(k);
    if (!in_Omega(prob, x, tols.tol_feas)) continue;
    ++c.feasible_points;
    const auto fx = objective_bounds(prob, x);
    const double dist = (x - z).norm();
    double phi_x = 0.0;
    for (const auto& b : fx) phi_x += b.lo + b.hi;

    if (dominates_with(prob, fx, fz, 1.0, tols.tol_strict)) {
      refute(c.eps_pareto, x);
      refute(c.almost_eps_pareto, x);
    }
    if (dominates_with(prob, fx, fz, dist / root, tols.tol_strict)) {
      refute(c.eps_quasi_pareto, x);
      refute(c.almost_eps_quasi, x);
    }
    if (phi_z > phi_x + theta + tols.tol_strict) refute(c.almost_theta, x);
    if (phi_z > phi_x + root * dist + tols.tol_strict) refute(c.almost_theta_quasi, x);
  }

  if (!c.z_in_Omega) {
    refute_vacuous(c.eps_pareto, "not in required feasible set");
    refute_vacuous(c.eps_quasi_pareto, "not in required feasible set");
  }
  if (!c.z_in_Omega_E) {
    for (Flag* f : {&c.almost_eps_pareto, &c.almost_eps_quasi, &c.almost_theta, &c.almost_theta_quasi}) {
      refute_vacuous(*f, "not in required feasible set");
    }
  }
  combine(c.almost_regular, c.almost_eps_pareto, c.almost_eps_quasi);
  combine(c.almost_theta_regular, c.almost_theta, c.almost_theta_quasi);
  return c;
}

bool ClassImplicationReport::ok() const {
  for (const auto& it : items) {
    if (it.status == ImplicationStatus::Violation) return false;
  }
  return true;
}

ClassImplicationReport class_implications_check(const Classification& c) {
  auto implication = [](const Flag& hyp, const Flag& concl) {
    if (!hyp.holds()) return ImplicationStatus::Vacuous;
    return concl.holds() ? ImplicationStatus::Pass : ImplicationStatus::Violation;
  };
  ClassImplicationReport r;
  r.classification = c;
  r.items = {{"almost_theta=>almost_eps_pareto", implication(c.almost_theta, c.almost_eps_pareto)},
             {"almost_theta_quasi=>almost_eps_quasi", implication(c.almost_theta_quasi, c.almost_eps_quasi)},
             {"almost_theta_regular=>almost_regular", implication(c.almost_theta_regular, c.almost_regular)}};
  return r;
}

ClassImplicationReport class_implications_check(const Problem& prob, const Vector& z, const Grid& grid, const Tolerances& tols) {
  return class_implications_check(classify_point(prob, z, grid, tols));
}

}  // namespace robustlu
