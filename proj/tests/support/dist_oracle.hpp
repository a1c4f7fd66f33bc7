#pragma once

// Independent oracle for dist_origin on small instances: exhaustive search
// over the per-term simplices on a lattice, exact nonnegative least squares
// over the cone coefficients by subset enumeration, then local zooming.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "robustlu/setcalc.hpp"

namespace robustlu::oracle {

/// min over mu >= 0 of ||s + G mu|| by trying every generator subset.
inline double nnls_residual(const Vector& s, const std::vector<Vector>& gens) {
  double best = s.norm();
  const std::size_t r = gens.size();
  for (unsigned mask = 1; mask < (1u << r); ++mask) {
    std::vector<Vector> cols;
    for (std::size_t k = 0; k < r; ++k) {
      if (mask & (1u << k)) cols.push_back(gens[k]);
    }
    Matrix G(s.size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) G.col(static_cast<Eigen::Index>(k)) = cols[k];
    const Vector mu = G.completeOrthogonalDecomposition().solve(-s);
    if ((mu.array() < -1e-12).any()) continue;
    best = std::min(best, (s + G * mu.cwiseMax(0.0)).norm());
  }
  return best;
}

struct OracleResult {
  double dist = std::numeric_limits<double>::infinity();
  std::size_t lattice_points = 0;
};

/// Lattice step 1e-3 on every simplex, then four zoom levels (factor 10,
/// +-10 steps) around the incumbent. Intended for sum_t (k_t - 1) <= 2.
inline OracleResult grid_oracle(const std::vector<WeightedPolytope>& terms, const PolyCone& cone,
                                double step = 1e-3) {
  const std::size_t T = terms.size();
  const Eigen::Index n = terms.front().polytope.vertex(0).size();
  OracleResult out;
  std::vector<std::vector<double>> best(T);
  std::vector<std::vector<double>> cur(T);

  auto evaluate = [&]() {
    Vector s = Vector::Zero(n);
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t k = 0; k < cur[t].size(); ++k) {
        s += terms[t].weight * cur[t][k] * terms[t].polytope.vertex(k);
      }
    }
    ++out.lattice_points;
    const double d = nnls_residual(s, cone.generators());
    if (d < out.dist) {
      out.dist = d;
      best = cur;
    }
  };

  // Coarse: every lattice point of every simplex.
  const int N = static_cast<int>(std::lround(1.0 / step));
  std::function<void(std::size_t, std::size_t, int)> coarse = [&](std::size_t t, std::size_t k, int left) {
    if (t == T) {
      evaluate();
      return;
    }
    const std::size_t K = terms[t].polytope.size();
    cur[t].resize(K);
    if (k + 1 == K) {
      cur[t][k] = static_cast<double>(left) / N;
      coarse(t + 1, 0, N);
      return;
    }
    for (int i = 0; i <= left; ++i) {
      cur[t][k] = static_cast<double>(i) / N;
      coarse(t, k + 1, left - i);
    }
  };
  coarse(0, 0, N);

  // Zoom: offsets on the first K-1 weights, the last weight absorbs the rest.
  double h = step;
  for (int level = 0; level < 4; ++level) {
    h /= 10.0;
    const auto center = best;
    std::function<void(std::size_t, std::size_t)> local = [&](std::size_t t, std::size_t k) {
      if (t == T) {
        evaluate();
        return;
      }
      const std::size_t K = center[t].size();
      if (k + 1 == K) {
        double rest = 1.0;
        for (std::size_t q = 0; q + 1 < K; ++q) rest -= cur[t][q];
        if (rest < -1e-15) return;
        cur[t][k] = std::max(rest, 0.0);
        local(t + 1, 0);
        return;
      }
      for (int i = -10; i <= 10; ++i) {
        const double a = center[t][k] + i * h;
        if (a < 0.0 || a > 1.0) continue;
        cur[t][k] = a;
        local(t, k + 1);
      }
    };
    cur = center;
    local(0, 0);
  }
  return out;
}

struct DistInstance {
  std::vector<WeightedPolytope> terms;
  PolyCone cone{1};
};

/// Random instance with n <= 3, at most 6 vertices in total and at most two
/// free simplex coordinates, plus up to two cone generators.
inline DistInstance random_dist_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_int_distribution<int> nterms(1, 4);
  std::uniform_int_distribution<int> ngens(0, 2);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> weight(0.0, 3.0);
  const auto n = static_cast<Eigen::Index>(dim(rng));
  auto rv = [&]() {
    Vector v(n);
    for (auto& c : v) c = coord(rng);
    return v;
  };
  DistInstance inst;
  const int T = nterms(rng);
  int free = 2;
  int total = 6;
  for (int t = 0; t < T && total > 0; ++t) {
    int k = 1 + std::uniform_int_distribution<int>(0, free)(rng);
    k = std::min(k, total);
    free -= k - 1;
    total -= k;
    std::vector<Vector> verts;
    for (int q = 0; q < k; ++q) verts.push_back(rv());
    inst.terms.push_back({weight(rng), Polytope(std::move(verts))});
  }
  std::vector<Vector> gens;
  const int G = ngens(rng);
  for (int r = 0; r < G; ++r) gens.push_back(rv());
  inst.cone = PolyCone(static_cast<std::size_t>(n), std::move(gens));
  return inst;
}

/// Lower bound from a unit direction u with u . g >= 0 on the cone:
/// ||s|| >= u . s >= sum_t w_t min_k u . p_tk.
inline double dual_bound(const std::vector<WeightedPolytope>& terms, const PolyCone& cone, const Vector& u) {
  for (const auto& g : cone.generators()) {
    if (u.dot(g) < -1e-9) return -std::numeric_limits<double>::infinity();
  }
  double lb = 0.0;
  for (const auto& t : terms) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : t.polytope.vertices()) m = std::min(m, u.dot(p));
    lb += t.weight * m;
  }
  return lb;
}

}  // namespace robustlu::oracle
