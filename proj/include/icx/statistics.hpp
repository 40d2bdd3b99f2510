#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "icx/empirical.hpp"

namespace icx {

enum class StatKind { KS, CvM };

std::string_view to_string(StatKind kind) noexcept;

/// sqrt(m n / (m + n)).
double kappa(std::size_t m, std::size_t n) noexcept;

/// One-sided Kolmogorov-Smirnov statistic for increasing convex order:
/// kappa * max_j f_j^+ over the breakpoints of sl_difference(x, y).
double ks_statistic(const Sample& x, const Sample& y);

/// One-sided Cramer-von Mises statistic: kappa * integral of f^+, exact.
double cvm_statistic(const Sample& x, const Sample& y);

double statistic(const Sample& x, const Sample& y, StatKind kind);

/// max_j f_j^+ for node values of a piecewise-linear function.
double max_positive_part(std::span<const double> node_values) noexcept;

/// Exact integral of the positive part of the piecewise-linear function
/// through (z_j, f_j), zero to the right of the last node.
///
/// Per segment of width h with end values a, b:
///   a == b           ->  a^+ h
///   a != b           ->  h (b^+^2 - a^+^2) / (2 (b - a))
/// The second form is evaluated as h (a + b) / 2 when both ends are
/// non-negative and as the triangle h p^2 / (2 |b - a|) on a sign change,
/// which is the same quantity without cancellation.
double positive_part_integral(std::span<const double> breakpoints,
                              std::span<const double> node_values) noexcept;

/// Brute-force reference for both statistics, independent of the suffix-sum
/// path: node values are summed term by term from the definition and f is
/// sampled at `refinement` sub-points per segment (max for KS, composite
/// trapezoid of f^+ for CvM).
double oracle_statistic(const Sample& x, const Sample& y, StatKind kind, std::size_t refinement);

}  // namespace icx
