#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "robustlu/model.hpp"

namespace robustlu {

/// Where g_j(z) falls relative to the sign conditions.
enum class SignRegion { NonPositive, Slack, Excess };
std::string_view to_string(SignRegion r);

struct SignStatus {
  double g = 0.0;
  double lambda = 0.0;
  SignRegion region = SignRegion::NonPositive;  ///< "<= 0", "(0, sqrt(theta)]" or "> sqrt(theta)"
  bool ok = true;
};

/// Distance from the origin to
///   sum_i [df_i^L(y) + df_i^U(y)] + sum_j lambda_j co{d_x g_j(y, v) : v active} + N(y; S)
/// with the surrogate subdifferentials of module expr.
struct Stationarity {
  DistResult dist;
  bool surrogate_exact = true;
};

/// Throws std::invalid_argument on dimension mismatch or negative lambda and
/// std::domain_error when y lies outside S.
Stationarity stationarity(const Problem& prob, const Vector& y, const Vector& lambda, const Tolerances& tols = {});

struct KktCertificate {
  bool verdict = false;
  std::string reason;
  bool in_Omega_E = false;
  double inclusion_residual = 0.0;
  double allowance = 0.0;  ///< sqrt(theta)
  std::vector<SignStatus> signs;
  DistResult decomposition;
  bool surrogate_exact = true;
  Tolerances tols;
};

/// Is (z, lambda) a KKT pair up to E? verdict = z in Omega_E, the inclusion
/// residual is within sqrt(theta) + tol_incl, and lambda_j = 0 where
/// g_j(z) <= 0 while lambda_j > 0 where 0 < g_j(z) <= sqrt(theta).
/// A true verdict is relative to the computed subdifferential surrogates.
KktCertificate check_kkt_pair(const Problem& prob, const Vector& z, const Vector& lambda, const Tolerances& tols = {});

}  // namespace robustlu
