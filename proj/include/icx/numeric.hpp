#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace icx {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  std::size_t max_intervals = 4000;
};

/// Thrown when adaptive quadrature exhausts its interval budget.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved abs error " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b].
/// Bisects the interval with the largest error estimate until the summed
/// estimate falls below abs_tol or the interval cap is hit.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Like integrate(), but splits [a, b] at the given interior points first
/// (kinks and jumps of the integrand) and throws QuadratureError on failure.
double integrate_pieces(const std::function<double(double)>& f, double a, double b,
                        std::span<const double> breaks, const QuadratureOptions& opts = {});

/// Bisection for an increasing function: smallest x in [lo, hi] with f(x) >= target,
/// to absolute width `xtol`.
double bisect_increasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, double xtol = 1e-12);

/// Standard normal distribution function.
/// Error-free accumulation of doubles (Shewchuk's non-overlapping partials).
/// value() is the correctly rounded sum, so two ExactSums holding the same
/// real number always report the same double.
class ExactSum {
 public:
  void add(double x);
  /// Adds a * b without rounding.
  void add_product(double a, double b);
  /// Adds a - b without rounding.
  void add_difference(double a, double b);
  void add(const ExactSum& other);
  void add_scaled(const ExactSum& other, double c);
  double value() const noexcept;
  const std::vector<double>& partials() const noexcept { return partials_; }

 private:
  std::vector<double> partials_;
};

double normal_cdf(double z) noexcept;
/// Standard normal density.
double normal_pdf(double z) noexcept;
/// Standard normal quantile (bisection on normal_cdf, |error| < 1e-13).
double normal_quantile(double p);

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware).
/// Work is handed out in contiguous chunks; results must be written by index.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

/// Resolves a thread-count request: 0 means hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested) noexcept;

}  // namespace icx
