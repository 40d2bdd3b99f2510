#include "icx/limit_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>

#include "icx/numeric.hpp"

namespace icx {

namespace {

constexpr std::uint64_t kPathTag = 0x70617468ULL;  // "path"
constexpr double kNormalCut = 8.0;

double conditional_tail(double z, double mean, double sd) {
  if (sd <= 0.0) return mean > z ? 1.0 : 0.0;
  return 1.0 - normal_cdf((z - mean) / sd);
}

}  // namespace

double bridge_cov(double u, double v) noexcept { return std::min(u, v) - u * v; }

double TwoPointLimit::rho() const noexcept {
  const double denom = std::sqrt(sigma1_sq * sigma2_sq);
  return denom > 0.0 ? cov / denom : 0.0;
}

TwoPointLimit two_point_params(double tau, ResamplingScheme scheme) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("two_point_params: tau in [0, 1]");
  TwoPointLimit p;
  p.tau = tau;
  p.scheme = scheme;
  if (scheme == ResamplingScheme::Switched) {
    p.level_x = (2.0 + tau) / 4.0;
    p.level_y = (4.0 - tau) / 4.0;
  } else {
    p.level_x = (3.0 - tau) / 4.0;
    p.level_y = (3.0 + tau) / 4.0;
  }
  p.sigma1_sq = bridge_cov(p.level_x, p.level_x);
  p.sigma2_sq = bridge_cov(p.level_y, p.level_y);
  p.cov = bridge_cov(p.level_x, p.level_y);
  return p;
}

double xplus_yplus_cdf(const TwoPointLimit& p, double z) {
  if (z < 0.0) return 0.0;
  if (!(p.sigma1_sq > 0.0 && p.sigma2_sq > 0.0))
    throw std::invalid_argument("xplus_yplus_cdf: variances must be positive");
  const double s1 = std::sqrt(p.sigma1_sq);
  const double s2 = std::sqrt(p.sigma2_sq);
  const double rho = p.rho();
  const double cond_sd = s2 * std::sqrt(std::max(0.0, 1.0 - rho * rho));

  QuadratureOptions opts;
  opts.abs_tol = 1e-7;
  // X <= 0: need Y <= z.
  const auto neg = integrate(
      [&](double t) { return conditional_tail(z, rho * s2 * t, cond_sd) * normal_pdf(t); },
      -kNormalCut, 0.0, opts);
  // 0 < X <= z: need Y <= z - X.
  const double top = std::min(z / s1, kNormalCut);
  const auto pos = integrate(
      [&](double t) {
        return conditional_tail(z - s1 * t, rho * s2 * t, cond_sd) * normal_pdf(t);
      },
      0.0, top, opts);
  if (!neg.converged || !pos.converged)
    throw QuadratureError("xplus_yplus_cdf: quadrature did not converge",
                          neg.abs_error + pos.abs_error);
  return std::clamp(normal_cdf(z / s1) - neg.value - pos.value, 0.0, 1.0);
}

double limit_quantile(const TwoPointLimit& p, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2)");
  auto cdf = [&](double z) { return xplus_yplus_cdf(p, z); };
  double hi = 1.0;
  while (cdf(hi) < 1.0 - alpha) hi *= 2.0;
  return bisect_increasing(cdf, 1.0 - alpha, 0.0, hi, 1e-7);
}

double tks_exceed_prob(double tau, double c) {
  const auto p = two_point_params(tau, ResamplingScheme::Switched);
  return 1.0 - normal_cdf(c / std::sqrt(p.sum_variance()));
}

std::function<double(double)> mixture_cdf(const DistributionSpec& f, const DistributionSpec& g,
                                          double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("mixture_cdf: tau in [0, 1]");
  return [f, g, tau](double t) { return (1.0 - tau) * cdf(f, t) + tau * cdf(g, t); };
}

// ---------------------------------------------------------------- grids

BridgeGrid::BridgeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2 || nodes_.front() != 0.0)
    throw std::invalid_argument("BridgeGrid: needs >= 2 nodes starting at 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw std::invalid_argument("BridgeGrid: nodes must be strictly increasing");
}

BridgeGrid BridgeGrid::uniform(double t_max, std::size_t count) {
  if (count < 2 || !(t_max > 0.0)) throw std::invalid_argument("BridgeGrid::uniform: bad extent");
  std::vector<double> nodes(count);
  for (std::size_t i = 0; i < count; ++i)
    nodes[i] = t_max * static_cast<double>(i) / static_cast<double>(count - 1);
  nodes.back() = t_max;
  return BridgeGrid(std::move(nodes));
}

BridgeGrid BridgeGrid::probability_spaced(const std::function<double(double)>& h, double t_max,
                                          std::size_t count) {
  if (count < 2 || !(t_max > 0.0)) throw std::invalid_argument("BridgeGrid: bad extent");
  const double top = h(t_max);
  const double bottom = h(0.0);
  std::vector<double> nodes{0.0};
  for (std::size_t i = 1; i + 1 < count; ++i) {
    const double level = bottom + (top - bottom) * static_cast<double>(i) / static_cast<double>(count - 1);
    const double t = bisect_increasing(h, level, 0.0, t_max, 1e-13 * t_max);
    if (t > nodes.back() && t < t_max) nodes.push_back(t);
  }
  nodes.push_back(t_max);
  return BridgeGrid(std::move(nodes));
}

BridgeGrid BridgeGrid::balanced(const std::function<double(double)>& h, double t_max,
                               std::size_t count) {
  if (count < 4) throw std::invalid_argument("BridgeGrid::balanced: needs >= 4 nodes");
  const auto a = probability_spaced(h, t_max, count / 2);
  const auto b = uniform(t_max, count - count / 2);
  std::vector<double> nodes;
  nodes.reserve(count);
  std::set_union(a.nodes().begin(), a.nodes().end(), b.nodes().begin(), b.nodes().end(),
                 std::back_inserter(nodes));
  return BridgeGrid(std::move(nodes));
}

double truncation_point(const std::function<double(double)>& h, double mass) {
  double lo = 0.0, hi = 1.0;
  while (h(hi) < 1.0 - mass) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw std::invalid_argument("truncation_point: H does not reach 1");
  }
  return bisect_increasing(h, 1.0 - mass, lo, hi, 1e-10 * hi);
}

// ---------------------------------------------------------------- path simulation

namespace {

std::vector<double> bridge_levels(const std::function<double(double)>& h, const BridgeGrid& grid) {
  std::vector<double> levels;
  levels.reserve(grid.size());
  double prev = 0.0;
  for (double t : grid.nodes()) {
    const double u = std::clamp(h(t), 0.0, 1.0);
    if (u < prev) throw std::invalid_argument("simulate_bh_path: H is not monotone on the grid");
    levels.push_back(u);
    prev = u;
  }
  return levels;
}

std::vector<double> path_from_levels(std::span<const double> levels, std::span<const double> t,
                                     RandomStream& stream, PathRule rule) {
  const std::size_t k = t.size();
  std::vector<double> bridge(k);
  double prev_u = 0.0, prev_b = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double u = levels[i];
    if (u >= 1.0) {
      prev_b = 0.0;
    } else if (u > prev_u) {
      const double mean = prev_b * (1.0 - u) / (1.0 - prev_u);
      const double var = (u - prev_u) * (1.0 - u) / (1.0 - prev_u);
      prev_b = mean + std::sqrt(var) * stream.normal();
    }
    prev_u = u;
    bridge[i] = prev_b;
  }

  std::vector<double> path(k, 0.0);
  long double acc = 0.0L;
  for (std::size_t i = k - 1; i-- > 0;) {
    const double dt = t[i + 1] - t[i];
    acc += rule == PathRule::Trapezoid ? 0.5L * (bridge[i] + bridge[i + 1]) * dt
                                       : static_cast<long double>(bridge[i]) * dt;
    path[i] = static_cast<double>(acc);
  }
  return path;
}

}  // namespace

std::vector<double> simulate_bh_path(const std::function<double(double)>& h,
                                     const BridgeGrid& grid, RandomStream& stream, PathRule rule) {
  return path_from_levels(bridge_levels(h, grid), grid.nodes(), stream, rule);
}

std::vector<double> simulate_functional(const std::function<double(double)>& h, StatKind kind,
                                        const IntervalSet& restriction, const BridgeGrid& grid,
                                        const FunctionalOptions& opts) {
  if (opts.paths < 1) throw std::invalid_argument("simulate_functional: paths must be >= 1");
  const auto t = grid.nodes();
  const double end = grid.truncation();
  const auto levels = bridge_levels(h, grid);

  std::vector<double> out(opts.paths);
  parallel_for(opts.paths, opts.threads, [&](std::size_t p) {
    RandomStream stream(opts.seed, derive_id({kPathTag, static_cast<std::uint64_t>(p)}));
    const auto path = path_from_levels(levels, t, stream, opts.rule);
    auto at = [&](double s) {
      if (s >= end) return 0.0;
      const auto it = std::upper_bound(t.begin(), t.end(), s);
      const std::size_t j = static_cast<std::size_t>(it - t.begin()) - 1;
      if (t[j] == s) return path[j];
      return std::lerp(path[j], path[j + 1], (s - t[j]) / (t[j + 1] - t[j]));
    };

    double value = 0.0;
    for (const auto& iv : restriction.intervals()) {
      const double lo = iv.lo;
      const double hi = std::min(iv.hi, end);
      if (lo > end) break;
      std::vector<double> zs{lo};
      for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] > lo && t[i] < hi) zs.push_back(t[i]);
      if (hi > lo) zs.push_back(hi);
      std::vector<double> fs(zs.size());
      for (std::size_t i = 0; i < zs.size(); ++i) fs[i] = at(zs[i]);
      if (kind == StatKind::KS)
        value = std::max(value, max_positive_part(fs));
      else
        value += positive_part_integral(zs, fs);
    }
    out[p] = value;
  });
  std::sort(out.begin(), out.end());
  return out;
}

double limit_covariance(const std::function<double(double)>& h, double s, double t, double upper,
                        std::span<const double> breaks) {
  QuadratureOptions inner_opts;
  inner_opts.abs_tol = 1e-11;
  inner_opts.max_intervals = 2000;
  auto inner = [&](double u) {
    std::vector<double> cuts(breaks.begin(), breaks.end());
    cuts.push_back(u);
    const double hu = h(u);
    return integrate_pieces([&](double v) { return h(std::min(u, v)) - hu * h(v); }, t, upper,
                            cuts, inner_opts);
  };
  QuadratureOptions outer_opts;
  outer_opts.abs_tol = 1e-9;
  outer_opts.max_intervals = 2000;
  std::vector<double> cuts(breaks.begin(), breaks.end());
  cuts.push_back(t);
  return integrate_pieces(inner, s, upper, cuts, outer_opts);
}

}  // namespace icx
