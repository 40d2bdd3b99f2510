#include "icx/interval_set.hpp"

#include <algorithm>
#include <stdexcept>

namespace icx {

IntervalSet::IntervalSet(std::vector<Interval> intervals, bool includes_infinity)
    : intervals_(std::move(intervals)), includes_infinity_(includes_infinity) {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (!(iv.lo >= 0.0) || !(iv.lo <= iv.hi))
      throw std::invalid_argument("IntervalSet: interval bounds out of order");
    if (i > 0 && !(intervals_[i - 1].hi < iv.lo))
      throw std::invalid_argument("IntervalSet: intervals must be sorted and disjoint");
  }
}

IntervalSet IntervalSet::half_line() {
  return IntervalSet({{0.0, std::numeric_limits<double>::infinity()}}, true);
}

IntervalSet IntervalSet::point(double t) { return IntervalSet({{t, t}}, false); }

bool IntervalSet::contains(double t) const noexcept {
  for (const auto& iv : intervals_)
    if (t >= iv.lo && t <= iv.hi) return true;
  return false;
}

double IntervalSet::total_length() const noexcept {
  double total = 0.0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

IntervalSet IntervalSet::below(double limit) const {
  std::vector<Interval> out;
  for (const auto& iv : intervals_) {
    if (iv.lo >= limit) break;
    // Closed intervals clipped to a half-open bound keep the bound as
    // supremum; the single excluded point has measure zero.
    out.push_back({iv.lo, std::min(iv.hi, limit)});
  }
  return IntervalSet(std::move(out), false);
}

}  // namespace icx
