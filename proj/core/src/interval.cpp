#include "robustlu/interval.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace robustlu {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi)) {
    throw std::invalid_argument("interval endpoint is NaN");
  }
  if (lo > hi) {
    std::ostringstream msg;
    msg << "invalid interval [" << lo << ", " << hi << "]: lower bound exceeds upper bound";
    throw std::invalid_argument(msg.str());
  }
}

Interval operator+(const Interval& a, const Interval& b) {
  return Interval(a.lo() + b.lo(), a.hi() + b.hi());
}

Interval operator-(const Interval& a, const Interval& b) {
  return Interval(a.lo() - b.hi(), a.hi() - b.lo());
}

Interval scale(double k, const Interval& a) {
  if (k >= 0.0) {
    return Interval(k * a.lo(), k * a.hi());
  }
  return Interval(k * a.hi(), k * a.lo());
}

bool leq_lu(const Interval& a, const Interval& b) {
  return a.lo() <= b.lo() && a.hi() <= b.hi();
}

bool lt_lu(const Interval& a, const Interval& b) {
  return leq_lu(a, b) && !(a == b);
}

bool lt_s_lu(const Interval& a, const Interval& b) {
  return a.lo() < b.lo() && a.hi() < b.hi();
}

bool vec_gt_lu(std::span<const Bounds> a, std::span<const Bounds> b, double strict_slack) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("vec_gt_lu: interval vectors differ in length");
  }
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].lo < b[i].lo || a[i].hi < b[i].hi) {
      return false;
    }
    if (a[i].lo > b[i].lo + strict_slack || a[i].hi > b[i].hi + strict_slack) {
      strict = true;
    }
  }
  return strict;
}

bool vec_gt_lu(std::span<const Interval> a, std::span<const Interval> b) {
  const auto ab = to_bounds(a);
  const auto bb = to_bounds(b);
  return vec_gt_lu(std::span<const Bounds>(ab), std::span<const Bounds>(bb));
}

std::vector<Bounds> to_bounds(std::span<const Interval> v) {
  return std::vector<Bounds>(v.begin(), v.end());
}

}  // namespace robustlu
