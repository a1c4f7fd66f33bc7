#include "robustlu/wolfe.hpp"

#include <stdexcept>

namespace robustlu {

DualConfig DualConfig::make(const Problem& prob, const Vector& z, const Vector& lambda, bool cap_mode,
                            const Tolerances& tols) {
  const KktCertificate cert = check_kkt_pair(prob, z, lambda, tols);
  if (!cert.verdict) throw std::invalid_argument("dual anchor is not a KKT pair up to E: " + cert.reason);
  DualConfig cfg;
  cfg.anchor_z = z;
  cfg.anchor_lambda = lambda;
  cfg.cap_mode = cap_mode;
  for (std::size_t j = 0; j < prob.p(); ++j) {
    if (cert.signs[j].region == SignRegion::Slack) cfg.J_eps.push_back(j);
  }
  return cfg;
}

namespace {

std::vector<Bounds> dual_bounds(const Problem& prob, const Vector& y, const Vector& lambda) {
  if (static_cast<std::size_t>(lambda.size()) != prob.p()) throw std::invalid_argument("multiplier vector has the wrong length");
  double pen = 0.0;
  for (std::size_t j = 0; j < prob.p(); ++j) pen += lambda[static_cast<Eigen::Index>(j)] * robust_value(prob, j, y);
  pen /= 2.0 * static_cast<double>(prob.m());
  auto out = objective_bounds(prob, y);
  for (auto& b : out) {
    b.lo += pen;
    b.hi += pen;
  }
  return out;
}

}  // namespace

IntervalVector dual_objective(const Problem& prob, const Vector& y, const Vector& lambda) {
  const auto b = dual_bounds(prob, y, lambda);
  IntervalVector out;
  for (const auto& v : b) {
    if (!v.valid()) throw std::domain_error("dual objective has lower > upper; objective data are invalid at y");
    out.emplace_back(v.lo, v.hi);
  }
  return out;
}

DualMembership in_Omega_D(const Problem& prob, const DualConfig& cfg, const Vector& y, const Vector& lambda,
                          const Tolerances& tols) {
  if (!in_S(prob, y, tols.tol_feas)) throw std::domain_error("dual point y is not in S");
  DualMembership d;
  const Stationarity st = stationarity(prob, y, lambda, tols);
  d.inclusion_residual = st.dist.dist;
  d.allowance = prob.sqrt_theta();
  d.surrogate_exact = st.surrogate_exact;
  d.inclusion_ok = d.inclusion_residual <= d.allowance + tols.tol_incl;
  if (cfg.cap_mode) {
    for (std::size_t j : cfg.J_eps) {
      const auto k = static_cast<Eigen::Index>(j);
      if (lambda[k] > cfg.anchor_lambda[k] + tols.tol_feas) {
        d.cap_ok = false;
        d.cap_violations.push_back(j);
      }
    }
  }
  d.member = d.inclusion_ok && d.cap_ok;
  if (!d.inclusion_ok) {
    d.reason = "stationarity residual exceeds sqrt(theta)";
  } else if (!d.cap_ok) {
    d.reason = "multiplier cap lambda_j <= lambda_jE violated";
  } else {
    d.reason = "member";
  }
  return d;
}

bool dual_dominates(const Problem& prob, const DualPoint& p, const DualPoint& bar, double tol_strict) {
  const auto lp = dual_bounds(prob, p.y, p.lambda);
  const auto lb = dual_bounds(prob, bar.y, bar.lambda);
  const double k = (p.y - bar.y).norm() / prob.sqrt_theta();
  std::vector<Bounds> shifted;
  for (std::size_t i = 0; i < lp.size(); ++i) {
    const Interval& e = prob.precision()[i];
    // Interval subtraction: the lower endpoint loses eps^U, the upper eps^L.
    shifted.emplace_back(lp[i].lo - k * e.hi(), lp[i].hi - k * e.lo());
  }
  return vec_gt_lu(shifted, lb, tol_strict);
}

DualVerdict dual_classify(const Problem& prob, const DualConfig& cfg, const DualPoint& candidate,
                          const std::vector<DualPoint>& samples, const Tolerances& tols) {
  DualVerdict v;
  for (const auto& s : samples) {
    ++v.samples_checked;
    if (!in_S(prob, s.y, tols.tol_feas)) continue;
    if (!in_Omega_D(prob, cfg, s.y, s.lambda, tols).member) continue;
    ++v.samples_feasible;
    if (dual_dominates(prob, s, candidate, tols.tol_strict)) {
      v.holds = false;
      v.witness = s;
      v.reason = "dominated by a dual-feasible sample";
      return v;
    }
  }
  v.reason = "no dominating dual-feasible sample";
  return v;
}

std::vector<DualPoint> dual_samples(const Problem& prob, const DualConfig& cfg, const std::vector<Vector>& ys,
                                    const Vector& lambda_max, int lambda_steps, const Tolerances& tols) {
  if (static_cast<std::size_t>(lambda_max.size()) != prob.p() || lambda_steps < 1) {
    throw std::invalid_argument("dual samples: bad multiplier grid");
  }
  std::vector<Vector> lambdas;
  const auto p = static_cast<std::size_t>(prob.p());
  std::vector<int> idx(p, 0);
  while (true) {
    Vector l(static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) {
      const auto k = static_cast<Eigen::Index>(j);
      l[k] = lambda_max[k] * static_cast<double>(idx[j]) / lambda_steps;
    }
    lambdas.push_back(l);
    std::size_t j = 0;
    while (j < p && ++idx[j] > lambda_steps) idx[j++] = 0;
    if (j == p) break;
  }
  std::vector<DualPoint> out;
  for (const auto& y : ys) {
    if (!in_S(prob, y, tols.tol_feas)) continue;
    for (const auto& l : lambdas) {
      if (in_Omega_D(prob, cfg, y, l, tols).member) out.push_back({y, l});
    }
  }
  return out;
}

ConverseReport converse_duality_check(const Problem& prob, const DualConfig& cfg, const DualPoint& dual_point,
                                      const std::vector<Vector>& grid_points, const Tolerances& tols) {
  ConverseReport r;
  if (!in_S(prob, dual_point.y, tols.tol_feas) ||
      !in_Omega_D(prob, cfg, dual_point.y, dual_point.lambda, tols).member) {
    r.status = "dual point not feasible";
    return r;
  }
  r.dual_feasible = true;

  std::vector<Vector> in_s;
  for (const auto& x : grid_points) {
    if (in_S(prob, x, tols.tol_feas)) in_s.push_back(x);
  }
  r.convexity_ok = certify(prob, Notion::Generalized, dual_point.y, in_s, tols).certified;
  if (!r.convexity_ok) {
    r.status = "generalized convexity fails at y; check skipped";
    return r;
  }

  const Vector gy = robust_values(prob, dual_point.y);
  r.hypothesis_holds = true;
  for (const auto& x : in_s) {
    if (!in_Omega(prob, x, tols.tol_feas)) continue;
    const Vector gx = robust_values(prob, x);
    for (Eigen::Index j = 0; j < gx.size(); ++j) {
      if (gx[j] > gy[j] + tols.tol_feas) {
        r.hypothesis_holds = false;
        r.hypothesis_witness = x;
        break;
      }
    }
    if (!r.hypothesis_holds) break;
  }
  if (!r.hypothesis_holds) {
    r.status = "hypothesis violated";
    return r;
  }

  for (const auto& x : in_s) {
    if (!in_Omega(prob, x, tols.tol_feas)) continue;
    if (dominates_eps_quasi(prob, x, dual_point.y, tols.tol_strict)) {
      r.domination_found = true;
      r.witness = x;
      break;
    }
  }
  r.status = r.domination_found ? "violation: dominating x found" : "no dominating x on grid";
  return r;
}

}  // namespace robustlu
