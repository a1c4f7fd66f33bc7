#include "robustlu/kkt.hpp"

#include <stdexcept>

namespace robustlu {

std::string_view to_string(SignRegion r) {
  switch (r) {
    case SignRegion::NonPositive:
      return "nonpositive";
    case SignRegion::Slack:
      return "within_sqrt_theta";
    case SignRegion::Excess:
      return "above_sqrt_theta";
  }
  return "";
}

namespace {

void check_args(const Problem& prob, const Vector& y, const Vector& lambda) {
  if (static_cast<std::size_t>(y.size()) != prob.n()) throw std::invalid_argument("point has the wrong dimension");
  if (static_cast<std::size_t>(lambda.size()) != prob.p()) {
    throw std::invalid_argument("multiplier vector has length " + std::to_string(lambda.size()) + ", expected " +
                                std::to_string(prob.p()));
  }
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    if (!(lambda[j] >= 0.0)) throw std::invalid_argument("multipliers must be nonnegative");
  }
}

}  // namespace

Stationarity stationarity(const Problem& prob, const Vector& y, const Vector& lambda, const Tolerances& tols) {
  check_args(prob, y, lambda);
  const PolyCone cone = normal_cone(prob.S(), y, tols.tol_feas);

  Stationarity out;
  std::vector<WeightedPolytope> terms;
  const Vector none(0);
  for (const auto& o : prob.objectives()) {
    for (const Expr* e : {&o.lower, &o.upper}) {
      SubdiffResult s = subdiff(*e, y, none, tols.tol_active);
      out.surrogate_exact = out.surrogate_exact && s.is_exact;
      terms.push_back({1.0, std::move(s.polytope)});
    }
  }
  for (std::size_t j = 0; j < prob.p(); ++j) {
    const double lj = lambda[static_cast<Eigen::Index>(j)];
    if (lj == 0.0) continue;
    const auto& g = prob.constraints()[j].g;
    std::vector<Polytope> parts;
    for (const auto& v : active_set(prob, j, y, tols.tol_active)) {
      SubdiffResult s = subdiff(g, y, v, tols.tol_active);
      out.surrogate_exact = out.surrogate_exact && s.is_exact;
      parts.push_back(std::move(s.polytope));
    }
    terms.push_back({lj, hull_union(parts)});
  }
  out.dist = dist_origin(terms, cone);
  return out;
}

KktCertificate check_kkt_pair(const Problem& prob, const Vector& z, const Vector& lambda, const Tolerances& tols) {
  KktCertificate c;
  c.tols = tols;
  c.allowance = prob.sqrt_theta();
  check_args(prob, z, lambda);
  c.in_Omega_E = in_Omega_E(prob, z, tols.tol_feas);
  if (!in_S(prob, z, tols.tol_feas)) {
    // Outside S there is no normal cone; report without a decomposition.
    c.reason = "z is not in Omega_E";
    c.inclusion_residual = std::numeric_limits<double>::infinity();
    return c;
  }

  const Stationarity st = stationarity(prob, z, lambda, tols);
  c.decomposition = st.dist;
  c.inclusion_residual = st.dist.dist;
  c.surrogate_exact = st.surrogate_exact;

  bool signs_ok = true;
  for (std::size_t j = 0; j < prob.p(); ++j) {
    SignStatus s;
    s.g = robust_value(prob, j, z);
    s.lambda = lambda[static_cast<Eigen::Index>(j)];
    if (s.g <= tols.tol_sign) {
      s.region = SignRegion::NonPositive;
      s.ok = s.lambda < tols.tol_pos;
    } else if (s.g <= prob.sqrt_theta() + tols.tol_feas) {
      s.region = SignRegion::Slack;
      s.ok = s.lambda >= tols.tol_pos;
    } else {
      s.region = SignRegion::Excess;
      s.ok = false;
    }
    signs_ok = signs_ok && s.ok;
    c.signs.push_back(s);
  }

  const bool inclusion_ok = c.inclusion_residual <= c.allowance + tols.tol_incl;
  c.verdict = c.in_Omega_E && inclusion_ok && signs_ok;
  if (!c.in_Omega_E) {
    c.reason = "z is not in Omega_E";
  } else if (!inclusion_ok) {
    c.reason = "stationarity residual exceeds sqrt(theta)";
  } else if (!signs_ok) {
    c.reason = "multiplier sign condition violated";
  } else {
    c.reason = "KKT pair up to E";
  }
  return c;
}

}  // namespace robustlu
