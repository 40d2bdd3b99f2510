#include "icx/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "icx/numeric.hpp"

namespace icx {

std::string_view to_string(StatKind kind) noexcept {
  return kind == StatKind::KS ? "ks" : "cvm";
}

double kappa(std::size_t m, std::size_t n) noexcept {
  const double dm = static_cast<double>(m);
  const double dn = static_cast<double>(n);
  return std::sqrt(dm * dn / (dm + dn));
}

double max_positive_part(std::span<const double> node_values) noexcept {
  double best = 0.0;
  for (double v : node_values) best = std::max(best, v);
  return best;
}

double positive_part_integral(std::span<const double> z, std::span<const double> f) noexcept {
  long double acc = 0.0L;
  for (std::size_t j = 0; j + 1 < z.size(); ++j) {
    const long double h = static_cast<long double>(z[j + 1]) - z[j];
    const long double a = f[j];
    const long double b = f[j + 1];
    if (a == b) {
      if (a > 0) acc += a * h;
    } else if (a >= 0 && b >= 0) {
      acc += 0.5L * (a + b) * h;
    } else if (a > 0 || b > 0) {
      const long double p = std::max(a, b);
      acc += 0.5L * p * p / std::fabs(b - a) * h;
    }
  }
  return static_cast<double>(acc);
}

double ks_statistic(const Sample& x, const Sample& y) {
  const auto d = sl_difference(x, y);
  return kappa(x.size(), y.size()) * max_positive_part(d.node_values);
}

double cvm_statistic(const Sample& x, const Sample& y) {
  const auto d = sl_difference(x, y);
  return kappa(x.size(), y.size()) * positive_part_integral(d.breakpoints, d.node_values);
}

double statistic(const Sample& x, const Sample& y, StatKind kind) {
  return kind == StatKind::KS ? ks_statistic(x, y) : cvm_statistic(x, y);
}

double oracle_statistic(const Sample& x, const Sample& y, StatKind kind, std::size_t refinement) {
  if (refinement < 2) throw std::invalid_argument("oracle_statistic: refinement must be >= 2");

  std::vector<double> z{0.0};
  for (double v : x.values()) z.push_back(v);
  for (double v : y.values()) z.push_back(v);
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());

  // Node values straight from the definition, term by term. The numerator
  // n sum (x_i - t)^+ - m sum (y_k - t)^+ is accumulated without rounding.
  const double m = static_cast<double>(x.size());
  const double n = static_cast<double>(y.size());
  std::vector<double> f(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    ExactSum num;
    for (double v : x.values()) {
      if (v <= z[j]) continue;
      num.add_product(v, n);
      num.add_product(-z[j], n);
    }
    for (double v : y.values()) {
      if (v <= z[j]) continue;
      num.add_product(v, -m);
      num.add_product(z[j], m);
    }
    f[j] = num.value() / (m * n);
  }

  const double r = static_cast<double>(refinement);
  if (kind == StatKind::KS) {
    double best = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      best = std::max(best, f[j]);
      if (j + 1 == z.size()) break;
      for (std::size_t k = 1; k < refinement; ++k)
        best = std::max(best, std::lerp(f[j], f[j + 1], static_cast<double>(k) / r));
    }
    return kappa(x.size(), y.size()) * best;
  }

  long double total = 0.0L;
  for (std::size_t j = 0; j + 1 < z.size(); ++j) {
    const double h = (z[j + 1] - z[j]) / r;
    long double seg = 0.5L * (std::max(f[j], 0.0) + std::max(f[j + 1], 0.0));
    for (std::size_t k = 1; k < refinement; ++k)
      seg += std::max(std::lerp(f[j], f[j + 1], static_cast<double>(k) / r), 0.0);
    total += seg * h;
  }
  return kappa(x.size(), y.size()) * static_cast<double>(total);
}

}  // namespace icx
