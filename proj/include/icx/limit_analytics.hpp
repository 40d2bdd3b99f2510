#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "icx/bootstrap.hpp"
#include "icx/distributions.hpp"
#include "icx/interval_set.hpp"
#include "icx/random.hpp"
#include "icx/statistics.hpp"

namespace icx {

/// Covariance of the standard Brownian bridge, min(u, v) - u v.
double bridge_cov(double u, double v) noexcept;

/// Joint normal law of X = B(u0), Y = B(u1) in the two-point example
/// F = twopoint(0, 1/2, 1), G = twopoint(0, 3/4, 2) with mixing ratio tau.
///
/// Switched resampling mixes H = (1 - tau) F + tau G, whose bridge levels at
/// the atoms 0 and 1 are u0 = (2 + tau)/4 and u1 = (4 - tau)/4. Proportional
/// resampling mixes H0 = tau F + (1 - tau) G with levels (3 - tau)/4 and
/// (3 + tau)/4. All moments follow from bridge_cov at the levels.
struct TwoPointLimit {
  double tau = 0.0;
  ResamplingScheme scheme = ResamplingScheme::Switched;
  double level_x = 0.0;
  double level_y = 0.0;
  double sigma1_sq = 0.0;
  double sigma2_sq = 0.0;
  double cov = 0.0;

  double rho() const noexcept;
  /// var(X + Y).
  double sum_variance() const noexcept { return sigma1_sq + sigma2_sq + 2.0 * cov; }
};

TwoPointLimit two_point_params(double tau, ResamplingScheme scheme);

/// P(X^+ + Y^+ <= z) for z >= 0: condition on X / sigma1 = t and integrate
/// the Gaussian conditional law of Y against the standard normal density.
double xplus_yplus_cdf(const TwoPointLimit& p, double z);

/// Upper alpha-quantile of X^+ + Y^+ (bisection to 1e-6).
double limit_quantile(const TwoPointLimit& p, double alpha);

/// P((X + Y)^+ > c) under the switched-scheme moments, which is the limiting
/// rejection probability of the KS test when its critical value is c.
double tks_exceed_prob(double tau, double c);

/// Distribution function of the mixture (1 - tau) F + tau G.
std::function<double(double)> mixture_cdf(const DistributionSpec& f, const DistributionSpec& g,
                                          double tau);

/// Time nodes 0 = t_0 < ... < t_M; the last node is the truncation point.
class BridgeGrid {
 public:
  explicit BridgeGrid(std::vector<double> nodes);

  /// count nodes equally spaced on [0, t_max].
  static BridgeGrid uniform(double t_max, std::size_t count);
  /// count nodes at H-probability levels equally spaced on [0, H(t_max)];
  /// H is inverted by bisection.
  static BridgeGrid probability_spaced(const std::function<double(double)>& h, double t_max,
                                       std::size_t count);
  /// Union of count/2 probability-spaced and count/2 equally spaced nodes.
  /// Probability spacing alone leaves long gaps in t where H is close to 1,
  /// which biases the trapezoid integral of the bridge.
  static BridgeGrid balanced(const std::function<double(double)>& h, double t_max,
                             std::size_t count);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double truncation() const noexcept { return nodes_.back(); }

 private:
  std::vector<double> nodes_;
};

/// Smallest t (found by doubling then bisection) with H(t) >= 1 - mass.
double truncation_point(const std::function<double(double)>& h, double mass = 1e-6);

/// Quadrature rule for t -> integral of B(H(s)) ds between nodes.
/// LeftPoint is exact when H is a step function with jumps on grid nodes.
enum class PathRule { Trapezoid, LeftPoint };

/// One path of B_H(t) = integral_t^T B(H(s)) ds at the grid nodes.
/// The bridge is sampled at the levels H(t_i) by sequential Gaussian
/// conditioning; equal levels share a value and B(1) = 0.
/// Throws std::invalid_argument if H decreases along the grid.
std::vector<double> simulate_bh_path(const std::function<double(double)>& h,
                                     const BridgeGrid& grid, RandomStream& stream,
                                     PathRule rule = PathRule::Trapezoid);

struct FunctionalOptions {
  std::size_t paths = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  PathRule rule = PathRule::Trapezoid;
};

/// Sorted Monte-Carlo sample of
///   KS:  max(0, sup of B_H over restriction)   (the point at infinity contributes 0)
///   CvM: integral over restriction of B_H^+
/// with B_H linear between grid nodes and 0 beyond the truncation point.
/// Path p uses its own stream keyed by (seed, p).
std::vector<double> simulate_functional(const std::function<double(double)>& h, StatKind kind,
                                        const IntervalSet& restriction, const BridgeGrid& grid,
                                        const FunctionalOptions& opts);

/// Covariance function of B_H, the double integral over [s, upper] x [t, upper]
/// of H(u ^ v) - H(u) H(v), by nested adaptive quadrature split at `breaks`.
double limit_covariance(const std::function<double(double)>& h, double s, double t, double upper,
                        std::span<const double> breaks = {});

}  // namespace icx
