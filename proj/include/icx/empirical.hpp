#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace icx {

/// Rejection reason for raw data handed to make_sample().
class SampleError : public std::invalid_argument {
 public:
  enum class Kind { Empty, Negative, NonFinite };

  SampleError(Kind kind, std::size_t index);

  Kind kind() const noexcept { return kind_; }
  /// Offending position in the raw input (0 for Kind::Empty).
  std::size_t index() const noexcept { return index_; }

 private:
  Kind kind_;
  std::size_t index_;
};

/// Sorted, finite, non-negative observations. Immutable once built.
class Sample {
 public:
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double min() const noexcept { return values_.front(); }
  double max() const noexcept { return values_.back(); }
  double mean() const noexcept;

  /// Every value multiplied by c > 0.
  Sample scaled(double c) const;

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  friend Sample make_sample(std::span<const double> raw);
  explicit Sample(std::vector<double> sorted) : values_(std::move(sorted)) {}
  std::vector<double> values_;
};

/// Validates and sorts raw observations. Throws SampleError.
Sample make_sample(std::span<const double> raw);

/// (1/m) * sum (x_i - t)^+, evaluated directly from the definition.
double empirical_sl(const Sample& s, double t);

/// t -> F_m^SL(t) - G_n^SL(t) as a piecewise-linear function.
///
/// Breakpoints are the distinct values of {0} u x u y in increasing order;
/// the function is linear between consecutive breakpoints and vanishes from
/// the last breakpoint on.
struct SlDifference {
  std::vector<double> breakpoints;
  std::vector<double> node_values;

  std::size_t size() const noexcept { return breakpoints.size(); }
  /// Slope on [Z_j, Z_{j+1}] for j = 0..l-2.
  std::vector<double> slopes() const;
  /// Linear interpolation between nodes; 0 beyond the last breakpoint.
  double operator()(double t) const noexcept;
};

/// Node values via suffix sums over the merged samples, O(l) after sorting.
/// Each numerator n A_j - m B_j is summed exactly and rounded once before
/// the division by m n, so f_j does not depend on the summation order.
SlDifference sl_difference(const Sample& x, const Sample& y);

}  // namespace icx
