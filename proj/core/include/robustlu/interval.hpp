#pragma once

#include <span>
#include <vector>

namespace robustlu {

/// Closed bounded real interval [lo, hi]. Construction rejects lo > hi and NaN
/// endpoints; values are immutable afterwards.
class Interval {
 public:
  Interval(double lo, double hi);

  /// Degenerate interval [a, a].
  static Interval point(double a) { return Interval(a, a); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double width() const { return hi_ - lo_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

using IntervalVector = std::vector<Interval>;

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);

/// k * [lo, hi]; endpoints swap for negative k.
Interval scale(double k, const Interval& a);
inline Interval operator*(double k, const Interval& a) { return scale(k, a); }

// LU order relations. Comparisons are exact; callers own tolerances.
bool leq_lu(const Interval& a, const Interval& b);
bool lt_lu(const Interval& a, const Interval& b);
bool lt_s_lu(const Interval& a, const Interval& b);

inline bool geq_lu(const Interval& a, const Interval& b) { return leq_lu(b, a); }
inline bool gt_lu(const Interval& a, const Interval& b) { return lt_lu(b, a); }

/// Raw endpoint pair with no lo <= hi guarantee. Formal expressions such as the
/// epsilon-Lagrangian can produce inverted endpoints; LU comparisons are still
/// well defined on them componentwise.
struct Bounds {
  double lo;
  double hi;

  Bounds(double l, double h) : lo(l), hi(h) {}
  Bounds(const Interval& a) : lo(a.lo()), hi(a.hi()) {}  // NOLINT(implicit)

  bool valid() const { return lo <= hi; }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// a >_LU b componentwise: every a_i >=_LU b_i and some a_k >_LU b_k.
/// strict_slack > 0 demands the strict endpoint exceed its partner by more
/// than the slack. Throws std::invalid_argument on length mismatch.
bool vec_gt_lu(std::span<const Bounds> a, std::span<const Bounds> b, double strict_slack = 0.0);
bool vec_gt_lu(std::span<const Interval> a, std::span<const Interval> b);

std::vector<Bounds> to_bounds(std::span<const Interval> v);

}  // namespace robustlu
