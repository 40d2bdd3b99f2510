#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "icx/distributions.hpp"
#include "icx/empirical.hpp"
#include "icx/random.hpp"

namespace icx::testing {

inline bool close_rel(double a, double b, double rel, double floor = 1.0) {
  return std::abs(a - b) <= rel * std::max({floor, std::abs(a), std::abs(b)});
}

// Values from a randomly chosen family. Some draws are rounded to one decimal
// or snapped to 0 so that ties and atoms show up regularly.
inline std::vector<double> mixed_values(std::size_t count, RandomStream& rs) {
  static const DistributionSpec families[] = {
      DistributionSpec::exponential(1.0),   DistributionSpec::uniform(0.0, 2.0),
      DistributionSpec::gamma(0.5),         DistributionSpec::gamma(2.0),
      DistributionSpec::weibull(2.0),       DistributionSpec::shifted_pareto(3.0),
      DistributionSpec::two_point(0.0, 0.5, 1.0), DistributionSpec::two_point(0.5, 0.3, 2.0)};
  const auto& d = families[rs.below(std::size(families))];
  const bool round = rs.uniform() < 0.3;
  std::vector<double> v(count);
  for (double& x : v) {
    x = draw(d, rs);
    if (round) x = std::round(x * 10.0) / 10.0;
    if (rs.uniform() < 0.05) x = 0.0;
  }
  return v;
}

inline Sample mixed_sample(std::size_t lo, std::size_t hi, RandomStream& rs) {
  const std::size_t count = lo + rs.below(hi - lo + 1);
  return make_sample(mixed_values(count, rs));
}

// Ties come only from repeated values: draws with replacement from a small
// pool, atoms and zeros. Unlike decimal rounding, rescaling preserves every
// equality between resampled sums of such data.
inline Sample tied_sample(std::size_t lo, std::size_t hi, RandomStream& rs) {
  static const DistributionSpec families[] = {
      DistributionSpec::exponential(1.0), DistributionSpec::gamma(0.5),
      DistributionSpec::weibull(2.0),     DistributionSpec::shifted_pareto(3.0),
      DistributionSpec::two_point(0.0, 0.5, 1.0), DistributionSpec::two_point(0.5, 0.3, 2.0)};
  const auto& d = families[rs.below(std::size(families))];
  const std::size_t count = lo + rs.below(hi - lo + 1);
  std::vector<double> pool(std::max<std::size_t>(2, count / 3));
  for (double& v : pool) v = draw(d, rs);
  std::vector<double> v(count);
  for (double& x : v) x = rs.uniform() < 0.05 ? 0.0 : pool[rs.below(pool.size())];
  return make_sample(v);
}

// (1/m) sum (x_i - t)^+ straight from the definition, in long double.
inline long double direct_sl(std::span<const double> xs, long double t) {
  long double s = 0.0L;
  for (double x : xs) s += std::max(0.0L, x - t);
  return s / xs.size();
}

}  // namespace icx::testing
