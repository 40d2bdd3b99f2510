#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "icx/random.hpp"

using icx::RandomStream;

TEST_CASE("philox4x32-10 known answer, zero key and counter") {
  RandomStream rs(0, 0);
  CHECK(rs() == 0xe169c58d6627e8d5ULL);
  CHECK(rs() == 0x9b00dbd8bc57ac4cULL);
}

TEST_CASE("streams are reproducible and distinct") {
  RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 16; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);

  RandomStream base(1, 2);
  auto s0 = base.substream(0), s1 = base.substream(1), s0b = base.substream(0);
  CHECK(s0() == s0b());
  CHECK(base.substream(0)() != s1());
}

TEST_CASE("derive_id separates paths") {
  std::set<std::uint64_t> ids;
  for (std::uint64_t i = 0; i < 50; ++i)
    for (std::uint64_t j = 0; j < 50; ++j) ids.insert(icx::derive_id({i, j}));
  CHECK(ids.size() == 2500);
  CHECK(icx::derive_id({1, 2}) != icx::derive_id({2, 1}));
}

TEST_CASE("uniform lies strictly inside (0,1) with the right moments") {
  RandomStream rs(3, 0);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rs.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sq += u * u;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sq / n - mean * mean - 1.0 / 12.0) < 2e-3);
}

TEST_CASE("normal draws have mean 0, variance 1 and symmetric tails") {
  RandomStream rs(9, 1);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  int beyond = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rs.normal();
    sum += z;
    sq += z * z;
    beyond += std::abs(z) > 1.959963984540054;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(sq / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  const double p = static_cast<double>(beyond) / n;
  CHECK(std::abs(p - 0.05) < 4.0 * std::sqrt(0.05 * 0.95 / n));
}

TEST_CASE("below is unbiased over a small range") {
  RandomStream rs(11, 4);
  const std::uint64_t bound = 7;
  const int n = 70000;
  std::vector<int> counts(bound, 0);
  for (int i = 0; i < n; ++i) {
    const auto v = rs.below(bound);
    REQUIRE(v < bound);
    ++counts[v];
  }
  double chi2 = 0.0;
  const double expected = static_cast<double>(n) / bound;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 22.46);  // 0.999 quantile of chi-square with 6 df
  CHECK(rs.below(1) == 0);
}
