#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "icx/empirical.hpp"
#include "icx/random.hpp"
#include "icx/statistics.hpp"

namespace icx {

/// Switched: resample from (n/N) F_m + (m/N) G_n, so the smaller sample gets
/// the larger share. Proportional: every pooled observation has mass 1/N.
enum class ResamplingScheme { Switched, Proportional };

std::string_view to_string(ResamplingScheme s) noexcept;
ResamplingScheme parse_scheme(std::string_view text);

struct BootstrapConfig {
  std::size_t replicates = 1000;
  double alpha = 0.05;
  ResamplingScheme scheme = ResamplingScheme::Switched;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency; never affects results

  /// Throws std::invalid_argument unless B >= 1 and 0 < alpha < 1/2.
  void validate() const;
};

/// Probability of each pooled index: X-indices 0..m-1, then Y-indices.
struct PooledWeights {
  double x_each = 0.0;
  double y_each = 0.0;
  double x_total = 0.0;  // total mass on the X block
};

PooledWeights pooled_weights(std::size_t m, std::size_t n, ResamplingScheme scheme) noexcept;

/// Draws one pooled index in [0, m + n) from the scheme's weights.
std::size_t draw_pooled_index(std::size_t m, std::size_t n, const PooledWeights& w,
                              RandomStream& stream) noexcept;

/// N = m + n index draws; the first m form the X-resample, the rest the Y-resample.
std::pair<Sample, Sample> resample_split(const Sample& x, const Sample& y, ResamplingScheme scheme,
                                         RandomStream& stream);

/// Stream used for bootstrap replicate b under a given seed.
RandomStream replicate_stream(std::uint64_t seed, std::size_t b) noexcept;

/// Sorted bootstrap replicates of the chosen statistic (length B).
std::vector<double> bootstrap_distribution(const Sample& x, const Sample& y, StatKind kind,
                                           const BootstrapConfig& cfg);

struct BootstrapPair {
  std::vector<double> ks;
  std::vector<double> cvm;
};

/// Both statistics from the same B resamples; each vector equals what
/// bootstrap_distribution() returns for that kind.
BootstrapPair bootstrap_distributions(const Sample& x, const Sample& y,
                                      const BootstrapConfig& cfg);

/// The ceil(B (1 - alpha))-th smallest replicate.
double critical_value(std::span<const double> sorted_replicates, double alpha);

/// (1 + #{replicates >= observed}) / (B + 1).
double p_value(std::span<const double> sorted_replicates, double observed);

struct TestReport {
  StatKind kind = StatKind::KS;
  double statistic = 0.0;
  double critical_value = 0.0;
  double p_value = 1.0;
  bool reject = false;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t resamples = 0;
  double alpha = 0.0;
  ResamplingScheme scheme = ResamplingScheme::Switched;
  std::uint64_t seed = 0;
  double wall_time_seconds = 0.0;
};

enum class StatSelection { KS, CvM, Both };

StatSelection parse_stat_selection(std::string_view text);

/// Observed statistic(s), bootstrap critical value(s) and p-value(s);
/// rejects when observed > critical value. One report per selected kind,
/// KS first.
std::vector<TestReport> run_test(const Sample& x, const Sample& y, StatSelection which,
                                 const BootstrapConfig& cfg);

TestReport run_test(const Sample& x, const Sample& y, StatKind kind, const BootstrapConfig& cfg);

}  // namespace icx
