#include "robustlu/convexity.hpp"

#include <cmath>
#include <stdexcept>

#include "robustlu/classify.hpp"

namespace robustlu {

std::string_view to_string(Notion n) {
  switch (n) {
    case Notion::Generalized:
      return "generalized";
    case Notion::ThetaPseudoQuasi:
      return "theta_pseudo_quasi";
    case Notion::EpsPseudoQuasi:
      return "eps_pseudo_quasi";
  }
  return "";
}

std::optional<Notion> parse_notion(std::string_view s) {
  for (Notion n : {Notion::Generalized, Notion::ThetaPseudoQuasi, Notion::EpsPseudoQuasi}) {
    if (s == to_string(n)) return n;
  }
  return std::nullopt;
}

namespace {

constexpr double kZeroRow = 1e-14;

bool row_holds(const Vector& a, double b, const Vector& w, double slack) {
  const double scale = 1.0 + std::abs(b) + a.norm() * w.norm();
  return a.dot(w) <= b + slack + 1e-12 * scale;
}

// Calls f(indices) for every k-subset of {0..r-1}, k = 0..kmax.
template <class F>
void for_each_subset(std::size_t r, std::size_t kmax, F&& f) {
  std::vector<std::size_t> idx;
  f(idx);
  for (std::size_t k = 1; k <= kmax; ++k) {
    idx.resize(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      f(idx);
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == r - k + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t t = i; t < k; ++t) idx[t] = idx[t - 1] + 1;
    }
  }
}

}  // namespace

MinNormPoint min_norm_point(const OmegaSystem& sys, double slack) {
  const auto n = static_cast<Eigen::Index>(sys.dim);
  std::vector<const OmegaRow*> rows;
  for (const auto& row : sys.rows) {
    if (row.a.size() != n) throw std::invalid_argument("omega row has the wrong dimension");
    if (row.a.lpNorm<Eigen::Infinity>() <= kZeroRow) {
      if (0.0 > row.b + slack) return {};
      continue;
    }
    bool dup = false;
    for (const OmegaRow* r : rows) dup = dup || (r->a == row.a && r->b == row.b);
    if (!dup) rows.push_back(&row);
  }

  MinNormPoint best;
  auto consider = [&](const Vector& w) {
    const double nw = w.norm();
    if (nw >= best.norm) return;
    for (const OmegaRow* r : rows) {
      if (!row_holds(r->a, r->b, w, slack)) return;
    }
    best.nonempty = true;
    best.norm = nw;
    best.omega = w;
  };

  const std::size_t kmax = std::min<std::size_t>(sys.dim, rows.size());
  for_each_subset(rows.size(), kmax, [&](const std::vector<std::size_t>& idx) {
    if (idx.empty()) {
      consider(Vector::Zero(n));
      return;
    }
    const auto k = static_cast<Eigen::Index>(idx.size());
    Matrix A(k, n);
    Vector rhs(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      A.row(i) = rows[idx[static_cast<std::size_t>(i)]]->a.transpose();
      rhs[i] = rows[idx[static_cast<std::size_t>(i)]]->b + slack;
    }
    Eigen::FullPivLU<Matrix> lu(A * A.transpose());
    lu.setThreshold(1e-12);
    if (lu.rank() < k) return;
    consider(A.transpose() * lu.solve(rhs));
  });
  return best;
}

bool omega_feasible(const OmegaSystem& sys, double tol) {
  const MinNormPoint p = min_norm_point(sys, tol);
  return p.nonempty && p.norm <= sys.radius + tol;
}

Violation min_violation(const OmegaSystem& sys, double tol) {
  auto ok = [&](double t, Vector* w) {
    const MinNormPoint p = min_norm_point(sys, t);
    if (!p.nonempty || p.norm > sys.radius + tol) return false;
    if (w != nullptr) *w = p.omega;
    return true;
  };
  Violation v;
  double hi = 0.0;
  for (const auto& row : sys.rows) hi = std::max(hi, -row.b);
  Vector w = Vector::Zero(static_cast<Eigen::Index>(sys.dim));
  if (ok(0.0, &w)) {
    v.omega = w;
  } else {
    double lo = 0.0;
    // At omega = 0 every row holds with slack hi.
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (ok(mid, nullptr)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    if (!ok(hi, &w)) w = Vector::Zero(static_cast<Eigen::Index>(sys.dim));
    v.amount = hi;
    v.omega = w;
  }
  for (const auto& row : sys.rows) {
    if (row.a.dot(v.omega) - row.b > tol) v.failing_rows.push_back(row.label);
  }
  return v;
}

SelectionSpace selection_space(const Problem& prob, const Vector& z, const Tolerances& tols) {
  SelectionSpace s;
  const Vector none(0);
  for (const auto& o : prob.objectives()) {
    s.polytopes.push_back(subdiff(o.lower, z, none, tols.tol_active).polytope);
    s.polytopes.push_back(subdiff(o.upper, z, none, tols.tol_active).polytope);
  }
  for (std::size_t j = 0; j < prob.p(); ++j) {
    for (const auto& v : active_set(prob, j, z, tols.tol_active)) {
      s.polytopes.push_back(subdiff(prob.constraints()[j].g, z, v, tols.tol_active).polytope);
      s.constraint_samples.emplace_back(j, v);
    }
  }
  return s;
}

namespace {

OmegaSystem build_system(const Problem& prob, Notion notion, const Vector& z, const Vector& x,
                         const std::vector<Vector>& selection, const SelectionSpace& space, const Tolerances& tols) {
  if (selection.size() != space.polytopes.size()) throw std::invalid_argument("selection has the wrong length");

  OmegaSystem sys;
  sys.dim = prob.n();
  const double dist = (x - z).norm();
  sys.radius = dist;
  const PolyCone cone = normal_cone(prob.S(), z, tols.tol_feas);
  for (const auto& g : cone.generators()) {
    sys.rows.push_back({g, 0.0, "normal_cone"});
  }

  const auto fx = objective_bounds(prob, x);
  const auto fz = objective_bounds(prob, z);
  const double root = prob.sqrt_theta();
  const std::size_t m = prob.m();

  switch (notion) {
    case Notion::Generalized:
      for (std::size_t i = 0; i < m; ++i) {
        const std::string tag = "objective " + std::to_string(i + 1);
        sys.rows.push_back({selection[2 * i], fx[i].lo - fz[i].lo, tag + " lower"});
        sys.rows.push_back({selection[2 * i + 1], fx[i].hi - fz[i].hi, tag + " upper"});
      }
      break;
    case Notion::ThetaPseudoQuasi: {
      double phi_x = 0.0;
      double phi_z = 0.0;
      Vector sum = Vector::Zero(static_cast<Eigen::Index>(prob.n()));
      for (std::size_t i = 0; i < m; ++i) {
        phi_x += fx[i].lo + fx[i].hi;
        phi_z += fz[i].lo + fz[i].hi;
        sum += selection[2 * i] + selection[2 * i + 1];
      }
      // Antecedent must fail strictly whenever the consequent fails at x.
      if (phi_x < phi_z - root * dist - tols.tol_feas) {
        sys.rows.push_back({sum, -root * dist - tols.delta_strict, "phi"});
      }
      break;
    }
    case Notion::EpsPseudoQuasi:
      for (std::size_t i = 0; i < m; ++i) {
        const Interval& e = prob.precision()[i];
        const std::string tag = "objective " + std::to_string(i + 1);
        const double shift_lo = e.hi() / root * dist;
        const double shift_hi = e.lo() / root * dist;
        if (fx[i].lo < fz[i].lo - shift_lo - tols.tol_feas) {
          sys.rows.push_back({selection[2 * i], -shift_lo - tols.delta_strict, tag + " lower"});
        }
        if (fx[i].hi < fz[i].hi - shift_hi - tols.tol_feas) {
          sys.rows.push_back({selection[2 * i + 1], -shift_hi - tols.delta_strict, tag + " upper"});
        }
      }
      break;
  }

  for (std::size_t k = 0; k < space.constraint_samples.size(); ++k) {
    const auto& [j, v] = space.constraint_samples[k];
    const auto& g = prob.constraints()[j].g;
    const double gx = g.eval(x, v);
    const double gz = g.eval(z, v);
    const Vector& xs = selection[2 * m + k];
    const std::string tag = "constraint " + std::to_string(j + 1);
    if (notion == Notion::Generalized) {
      sys.rows.push_back({xs, gx - gz, tag});
    } else if (gx <= gz + tols.tol_feas) {
      sys.rows.push_back({xs, 0.0, tag});
    }
  }
  return sys;
}

}  // namespace

OmegaSystem omega_system(const Problem& prob, Notion notion, const Vector& z, const Vector& x,
                         const std::vector<Vector>& selection, const Tolerances& tols) {
  return build_system(prob, notion, z, x, selection, selection_space(prob, z, tols), tols);
}

ConvexityVerdict certify(const Problem& prob, Notion notion, const Vector& z, const std::vector<Vector>& samples,
                         const Tolerances& tols) {
  if (!in_S(prob, z, tols.tol_feas)) throw std::domain_error("convexity: z is not in S");
  const SelectionSpace space = selection_space(prob, z, tols);
  std::size_t total = 1;
  for (const auto& p : space.polytopes) {
    total *= p.size();
    if (total > kMaxSelections) throw std::length_error("convexity: too many subgradient selections");
  }

  ConvexityVerdict out;
  out.notion = notion;
  std::vector<std::size_t> digit(space.polytopes.size(), 0);
  for (const auto& x : samples) {
    if (!in_S(prob, x, tols.tol_feas)) {
      ++out.samples_skipped;
      continue;
    }
    ++out.samples_checked;
    std::fill(digit.begin(), digit.end(), 0);
    for (std::size_t s = 0; s < total; ++s) {
      std::vector<Vector> selection;
      selection.reserve(space.polytopes.size());
      for (std::size_t k = 0; k < space.polytopes.size(); ++k) selection.push_back(space.polytopes[k].vertex(digit[k]));
      const OmegaSystem sys = build_system(prob, notion, z, x, selection, space, tols);
      ++out.systems_checked;
      const MinNormPoint p = min_norm_point(sys, tols.tol_feas);
      if (!p.nonempty || p.norm > sys.radius + tols.tol_feas) {
        const Violation v = min_violation(sys, tols.tol_feas);
        out.counterexample = Counterexample{x, std::move(selection), v.amount, v.failing_rows};
        out.certified = false;
        return out;
      }
      if (s == 0) out.witnesses.emplace_back(x, p.omega);
      for (std::size_t k = 0; k < digit.size(); ++k) {
        if (++digit[k] < space.polytopes[k].size()) break;
        digit[k] = 0;
      }
    }
  }
  out.certified = true;
  return out;
}

}  // namespace robustlu
