#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "icx/bootstrap.hpp"
#include "icx/distributions.hpp"
#include "support.hpp"

using namespace icx;

namespace {

Sample S(std::initializer_list<double> v) { return make_sample(std::vector<double>(v)); }

bool same_report(const TestReport& a, const TestReport& b) {
  return a.kind == b.kind && a.statistic == b.statistic && a.critical_value == b.critical_value &&
         a.p_value == b.p_value && a.reject == b.reject && a.m == b.m && a.n == b.n &&
         a.resamples == b.resamples && a.alpha == b.alpha && a.scheme == b.scheme &&
         a.seed == b.seed;
}

std::vector<double> per_index(std::size_t m, std::size_t n, const PooledWeights& w) {
  std::vector<double> p(m + n);
  for (std::size_t i = 0; i < m; ++i) p[i] = w.x_each;
  for (std::size_t j = 0; j < n; ++j) p[m + j] = w.y_each;
  return p;
}

}  // namespace

TEST_CASE("pooled weights") {
  const auto sw = pooled_weights(2, 3, ResamplingScheme::Switched);
  CHECK(sw.x_each == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(sw.y_each == doctest::Approx(2.0 / 15.0).epsilon(1e-15));
  const auto pr = pooled_weights(2, 3, ResamplingScheme::Proportional);
  CHECK(pr.x_each == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(pr.y_each == doctest::Approx(0.2).epsilon(1e-15));
  for (auto scheme : {ResamplingScheme::Switched, ResamplingScheme::Proportional}) {
    for (std::size_t m : {1u, 2u, 7u, 50u, 1200u})
      for (std::size_t n : {1u, 3u, 50u, 400u}) {
        long double total = 0.0L;
        for (double p : per_index(m, n, pooled_weights(m, n, scheme))) total += p;
        REQUIRE(std::abs(static_cast<double>(total) - 1.0) <= 1e-15 * 4);
      }
    const auto eq = pooled_weights(6, 6, scheme);
    CHECK(eq.x_each == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(eq.y_each == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  }
}

TEST_CASE("pooled index draws follow the weights") {
  RandomStream rs(4, 4);
  const std::size_t m = 3, n = 1, draws = 200000;
  const auto w = pooled_weights(m, n, ResamplingScheme::Switched);
  std::vector<std::size_t> counts(m + n, 0);
  for (std::size_t k = 0; k < draws; ++k) ++counts[draw_pooled_index(m, n, w, rs)];
  const double x_share = static_cast<double>(counts[0] + counts[1] + counts[2]) / draws;
  CHECK(std::abs(x_share - 0.25) < 4.0 * std::sqrt(0.25 * 0.75 / draws));
  for (std::size_t i = 0; i < m; ++i)
    CHECK(std::abs(static_cast<double>(counts[i]) / draws - 0.25 / 3.0) < 0.003);
}

TEST_CASE("resample_split") {
  RandomStream rs(10, 0);
  const auto a = S({1.0}), b = S({2.0});
  int a_first = 0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    const auto [xh, yh] = resample_split(a, b, ResamplingScheme::Switched, rs);
    REQUIRE(xh.size() == 1);
    REQUIRE(yh.size() == 1);
    a_first += xh[0] == 1.0;
  }
  CHECK(std::abs(a_first / double(trials) - 0.5) < 4.0 * std::sqrt(0.25 / trials));

  const auto x = S({0.1, 0.2, 0.3}), y = S({5.0});
  RandomStream r1(3, 9), r2(3, 9);
  const auto s1 = resample_split(x, y, ResamplingScheme::Switched, r1);
  const auto s2 = resample_split(x, y, ResamplingScheme::Switched, r2);
  CHECK(s1.first == s2.first);
  CHECK(s1.second == s2.second);

  int y_draws = 0;
  for (int i = 0; i < trials; ++i) {
    const auto [xh, yh] = resample_split(x, y, ResamplingScheme::Switched, rs);
    for (double v : xh.values()) y_draws += v == 5.0;
    y_draws += yh[0] == 5.0;
  }
  // Each single draw is an X value with probability n/N = 1/4.
  CHECK(std::abs(y_draws / (4.0 * trials) - 0.75) < 4.0 * std::sqrt(0.75 * 0.25 / (4.0 * trials)));
}

TEST_CASE("replicates match statistics of explicit resamples") {
  RandomStream data(12, 12);
  const auto x = testing::mixed_sample(5, 30, data);
  const auto y = testing::mixed_sample(5, 30, data);
  BootstrapConfig cfg;
  cfg.replicates = 64;
  cfg.seed = 99;
  for (auto scheme : {ResamplingScheme::Switched, ResamplingScheme::Proportional}) {
    cfg.scheme = scheme;
    const auto both = bootstrap_distributions(x, y, cfg);
    std::vector<double> ks, cvm;
    for (std::size_t b = 0; b < cfg.replicates; ++b) {
      auto stream = replicate_stream(cfg.seed, b);
      const auto [xh, yh] = resample_split(x, y, scheme, stream);
      ks.push_back(ks_statistic(xh, yh));
      cvm.push_back(cvm_statistic(xh, yh));
    }
    std::sort(ks.begin(), ks.end());
    std::sort(cvm.begin(), cvm.end());
    for (std::size_t b = 0; b < cfg.replicates; ++b) {
      REQUIRE(testing::close_rel(both.ks[b], ks[b], 1e-12, 1e-300));
      REQUIRE(testing::close_rel(both.cvm[b], cvm[b], 1e-12, 1e-300));
    }
    CHECK(bootstrap_distribution(x, y, StatKind::KS, cfg) == both.ks);
  }
}

TEST_CASE("degenerate pooled samples") {
  const auto c = S({2.0, 2.0, 2.0});
  BootstrapConfig cfg;
  cfg.replicates = 50;
  const auto reps = bootstrap_distribution(c, c, StatKind::CvM, cfg);
  for (double v : reps) CHECK(v == 0.0);
  const auto reports = run_test(c, c, StatSelection::Both, cfg);
  REQUIRE(reports.size() == 2);
  for (const auto& r : reports) {
    CHECK(r.statistic == 0.0);
    CHECK(r.critical_value == 0.0);
    CHECK_FALSE(r.reject);
    CHECK(r.p_value == 1.0);
  }
  cfg.replicates = 1;
  CHECK(bootstrap_distribution(S({1, 2}), S({3}), StatKind::KS, cfg).size() == 1);
}

TEST_CASE("critical values and p-values") {
  const std::vector<double> r{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(critical_value(r, 0.1) == 9);
  CHECK(critical_value(r, 0.05) == 10);
  CHECK(critical_value(std::vector<double>{4, 4, 4}, 0.2) == 4);
  CHECK(critical_value(std::vector<double>{3.5}, 0.05) == 3.5);
  CHECK(p_value(r, 11) == doctest::Approx(1.0 / 11.0));
  CHECK(p_value(r, 0) == 1.0);
  CHECK(p_value(r, 9) == doctest::Approx(3.0 / 11.0));
  CHECK_THROWS(critical_value(r, 0.5));
  CHECK_THROWS(critical_value(std::vector<double>{}, 0.05));

  // 1000 * (1 - 0.05) must select the 950th order statistic.
  std::vector<double> thousand(1000);
  for (std::size_t i = 0; i < thousand.size(); ++i) thousand[i] = static_cast<double>(i + 1);
  CHECK(critical_value(thousand, 0.05) == 950);

  RandomStream rs(6, 6);
  std::vector<double> noise(777);
  for (double& v : noise) v = rs.normal();
  std::sort(noise.begin(), noise.end());
  double prev = critical_value(noise, 0.001);
  for (double a = 0.002; a < 0.5; a += 0.001) {
    const double c = critical_value(noise, a);
    REQUIRE(c <= prev);
    prev = c;
  }
}

TEST_CASE("configuration validation") {
  BootstrapConfig cfg;
  cfg.alpha = 0.5;
  CHECK_THROWS(cfg.validate());
  cfg.alpha = 0.05;
  cfg.replicates = 0;
  CHECK_THROWS(cfg.validate());
  CHECK(parse_scheme("proportional") == ResamplingScheme::Proportional);
  CHECK_THROWS(parse_scheme("bogus"));
  CHECK(parse_stat_selection("both") == StatSelection::Both);
}

TEST_CASE("reports are bit-identical across thread counts") {
  RandomStream data(21, 0);
  const auto x = sample_n(DistributionSpec::gamma(2), 60, data);
  const auto y = sample_n(DistributionSpec::exponential(1), 45, data);
  BootstrapConfig cfg;
  cfg.replicates = 400;
  cfg.seed = 1234;
  cfg.threads = 1;
  const auto ref = run_test(x, y, StatSelection::Both, cfg);
  const auto ref_reps = bootstrap_distributions(x, y, cfg);
  for (unsigned t : {4u, 16u}) {
    cfg.threads = t;
    const auto got = run_test(x, y, StatSelection::Both, cfg);
    CHECK(same_report(got[0], ref[0]));
    CHECK(same_report(got[1], ref[1]));
    const auto reps = bootstrap_distributions(x, y, cfg);
    CHECK(reps.ks == ref_reps.ks);
    CHECK(reps.cvm == ref_reps.cvm);
  }
  CHECK(ref[0].reject == (ref[0].statistic > ref[0].critical_value));
}

TEST_CASE("decisions and p-values are invariant under rescaling") {
  RandomStream data(33, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = sample_n(DistributionSpec::weibull(2), 50, data);
    const auto y = sample_n(DistributionSpec::exponential(1), 50, data);
    BootstrapConfig cfg;
    cfg.replicates = 300;
    cfg.seed = 500 + trial;
    const auto base = run_test(x, y, StatSelection::Both, cfg);
    for (double c : {1e-3, 1.0, 1e3}) {
      const auto scaled = run_test(x.scaled(c), y.scaled(c), StatSelection::Both, cfg);
      for (int k = 0; k < 2; ++k) {
        REQUIRE(scaled[k].reject == base[k].reject);
        REQUIRE(scaled[k].p_value == base[k].p_value);
        const double power = k == 0 ? c : c * c;
        REQUIRE(testing::close_rel(scaled[k].statistic, power * base[k].statistic, 1e-12, 0.0));
        REQUIRE(testing::close_rel(scaled[k].critical_value, power * base[k].critical_value, 1e-12,
                                   0.0));
      }
    }
  }
}

TEST_CASE("rescaling invariance holds with repeated values and atoms") {
  RandomStream data(34, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = testing::tied_sample(10, 40, data);
    const auto y = testing::tied_sample(10, 40, data);
    BootstrapConfig cfg;
    cfg.replicates = 200;
    cfg.seed = 700 + trial;
    const auto base = run_test(x, y, StatSelection::Both, cfg);
    for (double c : {1e-3, 1e3}) {
      const auto scaled = run_test(x.scaled(c), y.scaled(c), StatSelection::Both, cfg);
      for (int k = 0; k < 2; ++k) {
        REQUIRE(scaled[k].reject == base[k].reject);
        REQUIRE(scaled[k].p_value == base[k].p_value);
      }
    }
  }
}

TEST_CASE("schemes coincide when m = n") {
  RandomStream data(44, 0);
  const auto x = sample_n(DistributionSpec::exponential(1), 40, data);
  const auto y = sample_n(DistributionSpec::exponential(2), 40, data);
  BootstrapConfig a, b;
  a.replicates = b.replicates = 200;
  b.scheme = ResamplingScheme::Proportional;
  const auto ra = bootstrap_distributions(x, y, a), rb = bootstrap_distributions(x, y, b);
  CHECK(ra.ks == rb.ks);
  CHECK(ra.cvm == rb.cvm);
}
