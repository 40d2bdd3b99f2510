#include "icx/bootstrap.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "icx/numeric.hpp"

namespace icx {

namespace {

constexpr std::uint64_t kReplicateTag = 0x626f6f74ULL;  // "boot"

// Pooled data reduced to distinct values (0 always included) and, per pooled
// index, the rank of its value. A replicate is then a pair of count vectors
// over the distinct values, and both statistics follow from one sweep.
class PooledResampler {
 public:
  PooledResampler(const Sample& x, const Sample& y, ResamplingScheme scheme)
      : m_(x.size()), n_(y.size()), weights_(pooled_weights(m_, n_, scheme)) {
    values_.push_back(0.0);
    values_.insert(values_.end(), x.values().begin(), x.values().end());
    values_.insert(values_.end(), y.values().begin(), y.values().end());
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());

    rank_.reserve(m_ + n_);
    auto rank_of = [&](double v) {
      return static_cast<std::uint32_t>(std::lower_bound(values_.begin(), values_.end(), v) -
                                        values_.begin());
    };
    for (double v : x.values()) rank_.push_back(rank_of(v));
    for (double v : y.values()) rank_.push_back(rank_of(v));
  }

  struct Pair {
    double ks;
    double cvm;
  };

  Pair replicate(std::size_t b, std::uint64_t seed) const {
    auto stream = replicate_stream(seed, b);
    std::vector<std::uint32_t> cx(values_.size(), 0), cy(values_.size(), 0);
    for (std::size_t k = 0; k < m_; ++k) ++cx[rank_[draw_pooled_index(m_, n_, weights_, stream)]];
    for (std::size_t k = 0; k < n_; ++k) ++cy[rank_[draw_pooled_index(m_, n_, weights_, stream)]];

    // Same exact numerator as sl_difference, so a replicate that equals the
    // observed statistic in real arithmetic also equals it in floating point.
    std::vector<double> f(values_.size());
    const double m = static_cast<double>(m_), n = static_cast<double>(n_);
    ExactSum sx, sy;
    double nx = 0.0, ny = 0.0;
    for (std::size_t j = values_.size(); j-- > 0;) {
      const double t = values_[j];
      ExactSum num;
      num.add_scaled(sx, n);
      num.add_product(-n * nx, t);
      num.add_scaled(sy, -m);
      num.add_product(m * ny, t);
      f[j] = num.value() / (m * n);
      if (cx[j]) sx.add_product(t, cx[j]);
      if (cy[j]) sy.add_product(t, cy[j]);
      nx += cx[j];
      ny += cy[j];
    }
    const double k = kappa(m_, n_);
    return {k * max_positive_part(f), k * positive_part_integral(values_, f)};
  }

 private:
  std::size_t m_, n_;
  PooledWeights weights_;
  std::vector<double> values_;
  std::vector<std::uint32_t> rank_;
};

std::vector<PooledResampler::Pair> all_replicates(const Sample& x, const Sample& y,
                                                  const BootstrapConfig& cfg) {
  cfg.validate();
  const PooledResampler resampler(x, y, cfg.scheme);
  std::vector<PooledResampler::Pair> out(cfg.replicates);
  parallel_for(cfg.replicates, cfg.threads,
               [&](std::size_t b) { out[b] = resampler.replicate(b, cfg.seed); });
  return out;
}

TestReport make_report(StatKind kind, double observed, std::vector<double> sorted,
                       const Sample& x, const Sample& y, const BootstrapConfig& cfg) {
  TestReport r;
  r.kind = kind;
  r.statistic = observed;
  r.critical_value = critical_value(sorted, cfg.alpha);
  r.p_value = p_value(sorted, observed);
  r.reject = observed > r.critical_value;
  r.m = x.size();
  r.n = y.size();
  r.resamples = cfg.replicates;
  r.alpha = cfg.alpha;
  r.scheme = cfg.scheme;
  r.seed = cfg.seed;
  return r;
}

}  // namespace

std::string_view to_string(ResamplingScheme s) noexcept {
  return s == ResamplingScheme::Switched ? "switched" : "proportional";
}

ResamplingScheme parse_scheme(std::string_view text) {
  if (text == "switched") return ResamplingScheme::Switched;
  if (text == "proportional") return ResamplingScheme::Proportional;
  throw std::invalid_argument("unknown resampling scheme '" + std::string(text) + "'");
}

StatSelection parse_stat_selection(std::string_view text) {
  if (text == "ks") return StatSelection::KS;
  if (text == "cvm") return StatSelection::CvM;
  if (text == "both") return StatSelection::Both;
  throw std::invalid_argument("unknown statistic '" + std::string(text) + "'");
}

void BootstrapConfig::validate() const {
  if (replicates < 1) throw std::invalid_argument("bootstrap needs at least one replicate");
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2)");
}

PooledWeights pooled_weights(std::size_t m, std::size_t n, ResamplingScheme scheme) noexcept {
  const double dm = static_cast<double>(m);
  const double dn = static_cast<double>(n);
  const double total = dm + dn;
  PooledWeights w;
  if (scheme == ResamplingScheme::Switched) {
    w.x_total = dn / total;
    w.x_each = w.x_total / dm;
    w.y_each = (dm / total) / dn;
  } else {
    w.x_total = dm / total;
    w.x_each = 1.0 / total;
    w.y_each = 1.0 / total;
  }
  return w;
}

std::size_t draw_pooled_index(std::size_t m, std::size_t n, const PooledWeights& w,
                              RandomStream& stream) noexcept {
  const double u = stream.uniform();
  if (u < w.x_total) {
    const auto i = static_cast<std::size_t>(u / w.x_total * static_cast<double>(m));
    return std::min(i, m - 1);
  }
  const auto j =
      static_cast<std::size_t>((u - w.x_total) / (1.0 - w.x_total) * static_cast<double>(n));
  return m + std::min(j, n - 1);
}

std::pair<Sample, Sample> resample_split(const Sample& x, const Sample& y, ResamplingScheme scheme,
                                         RandomStream& stream) {
  const std::size_t m = x.size(), n = y.size();
  const auto w = pooled_weights(m, n, scheme);
  auto value = [&](std::size_t idx) { return idx < m ? x[idx] : y[idx - m]; };
  std::vector<double> xs(m), ys(n);
  for (double& v : xs) v = value(draw_pooled_index(m, n, w, stream));
  for (double& v : ys) v = value(draw_pooled_index(m, n, w, stream));
  return {make_sample(xs), make_sample(ys)};
}

RandomStream replicate_stream(std::uint64_t seed, std::size_t b) noexcept {
  return RandomStream(seed, derive_id({kReplicateTag, static_cast<std::uint64_t>(b)}));
}

std::vector<double> bootstrap_distribution(const Sample& x, const Sample& y, StatKind kind,
                                           const BootstrapConfig& cfg) {
  const auto reps = all_replicates(x, y, cfg);
  std::vector<double> out;
  out.reserve(reps.size());
  for (const auto& r : reps) out.push_back(kind == StatKind::KS ? r.ks : r.cvm);
  std::sort(out.begin(), out.end());
  return out;
}

BootstrapPair bootstrap_distributions(const Sample& x, const Sample& y,
                                      const BootstrapConfig& cfg) {
  const auto reps = all_replicates(x, y, cfg);
  BootstrapPair out;
  out.ks.reserve(reps.size());
  out.cvm.reserve(reps.size());
  for (const auto& r : reps) {
    out.ks.push_back(r.ks);
    out.cvm.push_back(r.cvm);
  }
  std::sort(out.ks.begin(), out.ks.end());
  std::sort(out.cvm.begin(), out.cvm.end());
  return out;
}

double critical_value(std::span<const double> sorted, double alpha) {
  if (sorted.empty()) throw std::invalid_argument("critical_value: no replicates");
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2)");
  const double b = static_cast<double>(sorted.size());
  // The small offset keeps products such as 1000 * 0.95 from rounding up.
  auto k = static_cast<std::size_t>(std::ceil(b * (1.0 - alpha) - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

double p_value(std::span<const double> sorted, double observed) {
  const auto at_least =
      static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), observed));
  return (1.0 + static_cast<double>(at_least)) / (static_cast<double>(sorted.size()) + 1.0);
}

std::vector<TestReport> run_test(const Sample& x, const Sample& y, StatSelection which,
                                 const BootstrapConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<TestReport> out;
  if (which == StatSelection::Both) {
    auto reps = bootstrap_distributions(x, y, cfg);
    out.push_back(make_report(StatKind::KS, ks_statistic(x, y), std::move(reps.ks), x, y, cfg));
    out.push_back(make_report(StatKind::CvM, cvm_statistic(x, y), std::move(reps.cvm), x, y, cfg));
  } else {
    const StatKind kind = which == StatSelection::KS ? StatKind::KS : StatKind::CvM;
    out.push_back(make_report(kind, statistic(x, y, kind), bootstrap_distribution(x, y, kind, cfg),
                              x, y, cfg));
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : out) r.wall_time_seconds = elapsed;
  return out;
}

TestReport run_test(const Sample& x, const Sample& y, StatKind kind, const BootstrapConfig& cfg) {
  return run_test(x, y, kind == StatKind::KS ? StatSelection::KS : StatSelection::CvM, cfg).front();
}

}  // namespace icx
