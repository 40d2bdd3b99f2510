#include "icx/empirical.hpp"

#include <algorithm>
#include <cmath>

#include "icx/numeric.hpp"

namespace icx {

namespace {

std::string describe(SampleError::Kind kind, std::size_t index) {
  switch (kind) {
    case SampleError::Kind::Empty:
      return "sample is empty";
    case SampleError::Kind::Negative:
      return "negative value at index " + std::to_string(index);
    case SampleError::Kind::NonFinite:
      return "non-finite value at index " + std::to_string(index);
  }
  return "invalid sample";
}

// Suffix sums of a sorted sample, swept from the top: at threshold t,
// the exact sum and the count of the values strictly greater than t.
class SuffixSweep {
 public:
  explicit SuffixSweep(std::span<const double> sorted) : values_(sorted), pos_(sorted.size()) {}

  // Thresholds must be presented in decreasing order. Adds
  // weight * sum (v - t)^+ to acc without rounding.
  void stop_loss_sum(double t, double weight, ExactSum& acc) {
    while (pos_ > 0 && values_[pos_ - 1] > t) sum_.add(values_[--pos_]);
    acc.add_scaled(sum_, weight);
    acc.add_product(-weight * static_cast<double>(values_.size() - pos_), t);
  }

 private:
  std::span<const double> values_;
  std::size_t pos_;
  ExactSum sum_;
};

}  // namespace

SampleError::SampleError(Kind kind, std::size_t index)
    : std::invalid_argument(describe(kind, index)), kind_(kind), index_(index) {}

double Sample::mean() const noexcept {
  long double acc = 0.0L;
  for (double v : values_) acc += v;
  return static_cast<double>(acc / values_.size());
}

Sample Sample::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("scale factor must be positive");
  std::vector<double> out(values_);
  for (double& v : out) v *= c;
  return Sample(std::move(out));
}

Sample make_sample(std::span<const double> raw) {
  if (raw.empty()) throw SampleError(SampleError::Kind::Empty, 0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) throw SampleError(SampleError::Kind::NonFinite, i);
    if (raw[i] < 0.0) throw SampleError(SampleError::Kind::Negative, i);
  }
  std::vector<double> sorted(raw.begin(), raw.end());
  std::sort(sorted.begin(), sorted.end());
  // -0.0 compares equal to 0 but would print as "-0".
  for (double& v : sorted) v += 0.0;
  return Sample(std::move(sorted));
}

double empirical_sl(const Sample& s, double t) {
  ExactSum acc;
  for (double v : s.values())
    if (v > t) acc.add_difference(v, t);
  return acc.value() / static_cast<double>(s.size());
}

std::vector<double> SlDifference::slopes() const {
  std::vector<double> out;
  if (breakpoints.size() < 2) return out;
  out.reserve(breakpoints.size() - 1);
  for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j)
    out.push_back((node_values[j + 1] - node_values[j]) / (breakpoints[j + 1] - breakpoints[j]));
  return out;
}

double SlDifference::operator()(double t) const noexcept {
  if (t >= breakpoints.back()) return 0.0;
  if (t <= breakpoints.front()) return node_values.front();
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
  const double w = (t - breakpoints[j]) / (breakpoints[j + 1] - breakpoints[j]);
  return std::lerp(node_values[j], node_values[j + 1], w);
}

SlDifference sl_difference(const Sample& x, const Sample& y) {
  SlDifference out;
  auto& z = out.breakpoints;
  z.reserve(x.size() + y.size() + 1);
  z.push_back(0.0);
  std::merge(x.values().begin(), x.values().end(), y.values().begin(), y.values().end(),
             std::back_inserter(z));
  z.erase(std::unique(z.begin(), z.end()), z.end());

  // f_j = (n A_j - m B_j) / (m n) with A, B the unnormalised stop-loss sums.
  // The numerator is exact, so f_j is the same double however it is summed.
  out.node_values.resize(z.size());
  const double m = static_cast<double>(x.size());
  const double n = static_cast<double>(y.size());
  SuffixSweep sx(x.values());
  SuffixSweep sy(y.values());
  for (std::size_t j = z.size(); j-- > 0;) {
    ExactSum num;
    sx.stop_loss_sum(z[j], n, num);
    sy.stop_loss_sum(z[j], -m, num);
    out.node_values[j] = num.value() / (m * n);
  }
  return out;
}

}  // namespace icx
