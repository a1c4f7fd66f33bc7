#pragma once

#include <charconv>
#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace robustlu {

/// Shortest decimal text that reads back to the same double.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // drops the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// Comma-separated components, e.g. "1,0.5".
inline std::string format_vector(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += format_number(v[i]);
  }
  return out;
}

}  // namespace robustlu
