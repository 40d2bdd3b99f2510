#pragma once

#include <limits>
#include <vector>

namespace icx {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;  // may be +infinity
  double length() const noexcept { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorted, disjoint closed intervals on [0, inf), plus the point at infinity.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::vector<Interval> intervals, bool includes_infinity);

  static IntervalSet half_line();
  static IntervalSet point(double t);

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  bool includes_infinity() const noexcept { return includes_infinity_; }
  /// True when no finite point belongs to the set.
  bool empty() const noexcept { return intervals_.empty(); }
  bool contains(double t) const noexcept;
  /// Lebesgue measure of the finite part (may be +infinity).
  double total_length() const noexcept;
  /// Finite part intersected with [0, limit); drops the point at infinity.
  IntervalSet below(double limit) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> intervals_;
  bool includes_infinity_ = false;
};

}  // namespace icx
