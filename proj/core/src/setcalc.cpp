#include "robustlu/setcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace robustlu {

namespace {

void require_dim(const Vector& v, std::size_t dim, const char* what) {
  if (static_cast<std::size_t>(v.size()) != dim) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

bool near_duplicate(const std::vector<Vector>& set, const Vector& u, double tol) {
  return std::any_of(set.begin(), set.end(),
                     [&](const Vector& w) { return (w - u).norm() <= tol; });
}

// Calls fn(indices) for every size-k subset of {0, .., n-1}.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

Matrix kernel_basis(const Matrix& a, double threshold) {
  const auto n = a.cols();
  if (a.rows() == 0) return Matrix::Identity(n, n);
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(threshold);
  if (lu.rank() == n) return Matrix(n, 0);
  Matrix k = lu.kernel();
  // Orthonormalise so +/- pairs are well scaled.
  Eigen::HouseholderQR<Matrix> qr(k);
  return qr.householderQ() * Matrix::Identity(n, k.cols());
}

}  // namespace

// ---------------------------------------------------------------- Polytope

Polytope::Polytope(std::vector<Vector> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) {
    throw std::invalid_argument("polytope needs at least one vertex");
  }
  const auto d = vertices_.front().size();
  for (const auto& v : vertices_) {
    if (v.size() != d) throw std::invalid_argument("polytope vertices differ in dimension");
  }
}

// ---------------------------------------------------------------- PolyCone

PolyCone::PolyCone(std::size_t dim, std::vector<Vector> generators)
    : dim_(dim), generators_(std::move(generators)) {
  for (const auto& g : generators_) require_dim(g, dim_, "cone generator");
}

bool PolyCone::contains(const Vector& y, double tol) const {
  require_dim(y, dim_, "cone membership");
  if (generators_.empty()) return y.norm() <= tol;
  const std::vector<WeightedPolytope> terms{{1.0, Polytope::singleton(-y)}};
  return dist_origin(terms, *this).dist <= tol;
}

// ---------------------------------------------------------------- Polyhedron

Polyhedron::Polyhedron(std::size_t dim, std::vector<Halfspace> rows)
    : dim_(dim), rows_(std::move(rows)) {
  for (const auto& r : rows_) require_dim(r.a, dim_, "halfspace");
}

Polyhedron Polyhedron::box(const Vector& lo, const Vector& hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("box bounds differ in dimension");
  const auto n = static_cast<std::size_t>(lo.size());
  std::vector<Halfspace> rows;
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    Vector e = Vector::Zero(lo.size());
    e[i] = -1.0;
    rows.push_back({e, -lo[i]});
    e[i] = 1.0;
    rows.push_back({e, hi[i]});
  }
  return Polyhedron(n, std::move(rows));
}

double Polyhedron::max_violation(const Vector& x) const {
  require_dim(x, dim_, "polyhedron");
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows_) worst = std::max(worst, r.a.dot(x) - r.b);
  return worst;
}

bool Polyhedron::contains(const Vector& x, double tol) const {
  return max_violation(x) <= tol;
}

Vector Polyhedron::project(const Vector& y, double tol, int max_sweeps) const {
  require_dim(y, dim_, "projection");
  if (max_violation(y) <= 0.0) return y;
  Vector x = y;
  std::vector<Vector> increments(rows_.size(), Vector::Zero(y.size()));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const Vector before = x;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const auto& r = rows_[k];
      const double nrm2 = r.a.squaredNorm();
      if (nrm2 == 0.0) continue;
      const Vector tmp = x + increments[k];
      const double excess = r.a.dot(tmp) - r.b;
      x = excess > 0.0 ? Vector(tmp - (excess / nrm2) * r.a) : tmp;
      increments[k] = tmp - x;
    }
    if ((x - before).norm() <= tol && max_violation(x) <= tol) break;
  }
  return x;
}

// ---------------------------------------------------------------- cones

PolyCone normal_cone(const Polyhedron& S, const Vector& z, double tol_active) {
  require_dim(z, S.dim(), "normal cone");
  if (!S.contains(z, tol_active)) {
    throw std::domain_error("normal cone requested at a point outside the ground set");
  }
  std::vector<Vector> gens;
  for (const auto& r : S.rows()) {
    const double nrm = r.a.norm();
    if (nrm == 0.0) continue;
    if (r.a.dot(z) >= r.b - tol_active) {
      const Vector u = r.a / nrm;
      if (!near_duplicate(gens, u, 1e-12)) gens.push_back(u);
    }
  }
  return PolyCone(S.dim(), std::move(gens));
}

PolyCone polar(const PolyCone& c) {
  const auto n = static_cast<int>(c.dim());
  if (c.dim() > kMaxPolarDim) {
    throw std::domain_error("polar cone supported only up to dimension 4");
  }
  std::vector<Vector> out;
  std::vector<Vector> gens;
  for (const auto& g : c.generators()) {
    if (g.norm() > 0.0) gens.push_back(g / g.norm());
  }
  const int rows = static_cast<int>(gens.size());
  Matrix G(rows, n);
  for (int r = 0; r < rows; ++r) G.row(r) = gens[static_cast<std::size_t>(r)].transpose();

  constexpr double kRankTol = 1e-10;
  const Matrix lineality = kernel_basis(G, kRankTol);
  for (Eigen::Index k = 0; k < lineality.cols(); ++k) {
    const Vector u = lineality.col(k).normalized();
    out.push_back(u);
    out.push_back(-u);
  }
  const int rank = n - static_cast<int>(lineality.cols());
  if (rank == 0) return PolyCone(c.dim(), std::move(out));

  // Extreme rays of the pointed part: n-1 independent tight constraints,
  // counting the lineality equalities.
  for_each_subset(rows, rank - 1, [&](const std::vector<int>& idx) {
    Matrix E(static_cast<Eigen::Index>(idx.size()) + lineality.cols(), n);
    for (std::size_t i = 0; i < idx.size(); ++i) E.row(static_cast<Eigen::Index>(i)) = G.row(idx[i]);
    for (Eigen::Index k = 0; k < lineality.cols(); ++k) {
      E.row(static_cast<Eigen::Index>(idx.size()) + k) = lineality.col(k).transpose();
    }
    const Matrix ker = kernel_basis(E, kRankTol);
    if (ker.cols() != 1) return;
    const Vector d = ker.col(0).normalized();
    for (const double s : {1.0, -1.0}) {
      const Vector ray = s * d;
      if (rows == 0 || (G * ray).maxCoeff() <= 1e-10) {
        if (!near_duplicate(out, ray, 1e-9)) out.push_back(ray);
      }
    }
  });
  return PolyCone(c.dim(), std::move(out));
}

Polytope hull_union(const std::vector<Polytope>& ps) {
  if (ps.empty()) throw std::invalid_argument("hull_union of an empty family");
  std::vector<Vector> verts;
  const auto d = ps.front().dim();
  for (const auto& p : ps) {
    if (p.dim() != d) throw std::invalid_argument("hull_union: dimension mismatch");
    verts.insert(verts.end(), p.vertices().begin(), p.vertices().end());
  }
  return Polytope(std::move(verts));
}

// ---------------------------------------------------------------- dist_origin

Vector project_simplex(const Vector& y) {
  const auto k = y.size();
  std::vector<double> s(y.data(), y.data() + k);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    cumsum += s[static_cast<std::size_t>(i)];
    const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (s[static_cast<std::size_t>(i)] - t > 0.0) tau = t;
  }
  return (y.array() - tau).max(0.0).matrix();
}

namespace {

struct Layout {
  std::vector<Eigen::Index> offset;  // start of each simplex block
  std::vector<Eigen::Index> size;
  Eigen::Index cone_offset = 0;
  Eigen::Index cone_size = 0;
  Eigen::Index total() const { return cone_offset + cone_size; }
};

Vector project_feasible(const Vector& xi, const Layout& lay) {
  Vector out(xi.size());
  for (std::size_t t = 0; t < lay.offset.size(); ++t) {
    out.segment(lay.offset[t], lay.size[t]) = project_simplex(xi.segment(lay.offset[t], lay.size[t]));
  }
  out.segment(lay.cone_offset, lay.cone_size) = xi.segment(lay.cone_offset, lay.cone_size).cwiseMax(0.0);
  return out;
}

// Re-solve the least-squares problem on the support of xi exactly. Returns
// true and overwrites xi when the corrected point is feasible and no worse.
bool polish_on_support(const Matrix& M, const Layout& lay, Vector& xi, double threshold) {
  std::vector<Eigen::Index> free_cols;   // variables in the reduced parametrisation
  std::vector<Eigen::Index> base_of;     // base variable for each free simplex column
  std::vector<Eigen::Index> bases(lay.offset.size());
  for (std::size_t t = 0; t < lay.offset.size(); ++t) {
    Eigen::Index best = lay.offset[t];
    std::vector<Eigen::Index> supp;
    for (Eigen::Index k = lay.offset[t]; k < lay.offset[t] + lay.size[t]; ++k) {
      if (xi[k] > xi[best]) best = k;
      if (xi[k] > threshold) supp.push_back(k);
    }
    bases[t] = best;
    for (const auto k : supp) {
      if (k == best) continue;
      free_cols.push_back(k);
      base_of.push_back(best);
    }
  }
  for (Eigen::Index r = lay.cone_offset; r < lay.total(); ++r) {
    if (xi[r] > threshold) {
      free_cols.push_back(r);
      base_of.push_back(-1);
    }
  }

  Vector restricted = Vector::Zero(xi.size());
  for (std::size_t t = 0; t < bases.size(); ++t) restricted[bases[t]] = 1.0;
  for (std::size_t i = 0; i < free_cols.size(); ++i) {
    const auto k = free_cols[i];
    restricted[k] = xi[k];
    if (base_of[i] >= 0) restricted[base_of[i]] -= xi[k];
  }
  const Vector start_res = M * restricted;

  Vector correction = Vector::Zero(xi.size());
  if (!free_cols.empty()) {
    Matrix N(M.rows(), static_cast<Eigen::Index>(free_cols.size()));
    for (std::size_t i = 0; i < free_cols.size(); ++i) {
      Vector col = M.col(free_cols[i]);
      if (base_of[i] >= 0) col -= M.col(base_of[i]);
      N.col(static_cast<Eigen::Index>(i)) = col;
    }
    const Vector beta = N.completeOrthogonalDecomposition().solve(-start_res);
    for (std::size_t i = 0; i < free_cols.size(); ++i) {
      correction[free_cols[i]] += beta[static_cast<Eigen::Index>(i)];
      if (base_of[i] >= 0) correction[base_of[i]] -= beta[static_cast<Eigen::Index>(i)];
    }
  }
  Vector candidate = restricted + correction;
  if (candidate.minCoeff() < -1e-13) return false;
  candidate = candidate.cwiseMax(0.0);
  for (std::size_t t = 0; t < lay.offset.size(); ++t) {
    auto block = candidate.segment(lay.offset[t], lay.size[t]);
    const double s = block.sum();
    if (s <= 0.0) return false;
    block /= s;
  }
  if ((M * candidate).norm() <= (M * xi).norm()) {
    xi = candidate;
    return true;
  }
  return false;
}

}  // namespace

DistResult dist_origin(const std::vector<WeightedPolytope>& terms, const PolyCone& cone,
                       const DistOptions& opts) {
  const auto n = static_cast<Eigen::Index>(cone.dim());
  Layout lay;
  Eigen::Index cols = 0;
  for (const auto& t : terms) {
    if (static_cast<Eigen::Index>(t.polytope.dim()) != n) {
      throw std::invalid_argument("dist_origin: polytope dimension differs from cone dimension");
    }
    if (!(t.weight >= 0.0)) throw std::invalid_argument("dist_origin: negative term weight");
    lay.offset.push_back(cols);
    lay.size.push_back(static_cast<Eigen::Index>(t.polytope.size()));
    cols += static_cast<Eigen::Index>(t.polytope.size());
  }
  lay.cone_offset = cols;
  lay.cone_size = static_cast<Eigen::Index>(cone.generators().size());

  Matrix M(n, lay.total());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    for (std::size_t k = 0; k < terms[t].polytope.size(); ++k) {
      M.col(lay.offset[t] + static_cast<Eigen::Index>(k)) = terms[t].weight * terms[t].polytope.vertex(k);
    }
  }
  for (Eigen::Index r = 0; r < lay.cone_size; ++r) {
    M.col(lay.cone_offset + r) = cone.generators()[static_cast<std::size_t>(r)];
  }

  Vector xi = Vector::Zero(lay.total());
  for (std::size_t t = 0; t < lay.offset.size(); ++t) {
    xi.segment(lay.offset[t], lay.size[t]).setConstant(1.0 / static_cast<double>(lay.size[t]));
  }

  DistResult res;
  const double lipschitz =
      lay.total() == 0 ? 0.0 : Eigen::SelfAdjointEigenSolver<Matrix>(M * M.transpose()).eigenvalues().maxCoeff();
  auto objective = [&](const Vector& v) { return 0.5 * (M * v).squaredNorm(); };

  if (lipschitz <= 0.0) {
    res.converged = true;
  } else {
    Vector y = xi;
    double t = 1.0;
    double f_prev = objective(xi);
    for (int it = 0; it < opts.max_iter; ++it) {
      res.iterations = it + 1;
      const Vector grad = M.transpose() * (M * y);
      const Vector next = project_feasible(y - grad / lipschitz, lay);
      const double gm = lipschitz * (y - next).norm();
      const double f_next = objective(next);
      if (gm <= opts.tol) {
        if (f_next <= f_prev) xi = next;
        res.converged = true;
        break;
      }
      if (f_next > f_prev && t > 1.0) {
        // Adaptive restart: drop momentum and retry from the last iterate.
        t = 1.0;
        y = xi;
        continue;
      }
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = next + ((t - 1.0) / t_next) * (next - xi);
      xi = next;
      t = t_next;
      f_prev = f_next;
    }
  }

  for (const double threshold : {1e-12, 1e-9, 1e-6}) {
    if (polish_on_support(M, lay, xi, threshold)) res.polished = true;
  }

  res.residual = M * xi;
  res.dist = res.residual.norm();
  if (res.polished && res.dist == 0.0) res.converged = true;
  for (std::size_t t = 0; t < lay.offset.size(); ++t) {
    res.alphas.emplace_back(xi.segment(lay.offset[t], lay.size[t]));
  }
  res.mu = xi.segment(lay.cone_offset, lay.cone_size);
  return res;
}

}  // namespace robustlu
