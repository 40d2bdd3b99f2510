#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "icx/empirical.hpp"
#include "support.hpp"

using namespace icx;
using icx::testing::close_rel;
using icx::testing::direct_sl;

namespace {
Sample S(std::initializer_list<double> v) { return make_sample(std::vector<double>(v)); }
}  // namespace

TEST_CASE("make_sample sorts and validates") {
  const auto s = S({3, 1, 2});
  CHECK(std::vector<double>(s.values().begin(), s.values().end()) == std::vector<double>{1, 2, 3});
  CHECK(s.min() == 1);
  CHECK(s.max() == 3);
  CHECK(s.mean() == 2);

  try {
    make_sample(std::vector<double>{});
    FAIL("expected EmptySample");
  } catch (const SampleError& e) {
    CHECK(e.kind() == SampleError::Kind::Empty);
  }
  try {
    make_sample(std::vector<double>{1, -0.5});
    FAIL("expected NegativeValue");
  } catch (const SampleError& e) {
    CHECK(e.kind() == SampleError::Kind::Negative);
    CHECK(e.index() == 1);
  }
  try {
    make_sample(std::vector<double>{0.0, 2.0, std::numeric_limits<double>::quiet_NaN()});
    FAIL("expected NonFinite");
  } catch (const SampleError& e) {
    CHECK(e.kind() == SampleError::Kind::NonFinite);
    CHECK(e.index() == 2);
  }
  CHECK_THROWS_AS(make_sample(std::vector<double>{std::numeric_limits<double>::infinity()}),
                  SampleError);
  // Negative zero is a valid loss and is stored as +0.
  const auto z = S({-0.0});
  CHECK_FALSE(std::signbit(z[0]));
}

TEST_CASE("empirical stop-loss transform") {
  const auto s = S({1, 3});
  CHECK(empirical_sl(s, 0.0) == 2.0);
  CHECK(empirical_sl(s, 2.0) == 0.5);
  CHECK(empirical_sl(S({2}), 5.0) == 0.0);
  CHECK(empirical_sl(s, 3.0) == 0.0);
}

TEST_CASE("sl_difference hand-evaluated examples") {
  const auto d = sl_difference(S({2}), S({1}));
  CHECK(d.breakpoints == std::vector<double>{0, 1, 2});
  CHECK(d.node_values == std::vector<double>{1, 1, 0});
  CHECK(d.slopes() == std::vector<double>{0, -1});

  const auto e = sl_difference(S({2}), S({0, 3}));
  CHECK(e.breakpoints == std::vector<double>{0, 2, 3});
  CHECK(e.node_values == std::vector<double>{0.5, -0.5, 0});
  CHECK(e(1.0) == doctest::Approx(0.0));
  CHECK(e(10.0) == 0.0);

  const auto x = S({0.5, 1.5, 1.5, 4});
  const auto same = sl_difference(x, x);
  for (double v : same.node_values) CHECK(v == 0.0);

  const auto zeros = sl_difference(S({0, 0}), S({0}));
  CHECK(zeros.breakpoints == std::vector<double>{0});
  CHECK(zeros.node_values == std::vector<double>{0});
}

TEST_CASE("sl_difference structural invariants on random samples") {
  RandomStream rs(2024, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = testing::mixed_sample(1, 60, rs);
    const auto y = testing::mixed_sample(1, 60, rs);
    const auto d = sl_difference(x, y);
    const double scale = x.mean() + y.mean();

    REQUIRE(d.breakpoints.front() == 0.0);
    CHECK(d.node_values.back() == 0.0);
    CHECK(close_rel(d.node_values.front(), x.mean() - y.mean(), 1e-12, scale));
    for (std::size_t j = 1; j < d.size(); ++j) REQUIRE(d.breakpoints[j] > d.breakpoints[j - 1]);

    // Node values match the defining sums.
    for (std::size_t j = 0; j < d.size(); ++j) {
      const long double t = d.breakpoints[j];
      const double ref = static_cast<double>(direct_sl(x.values(), t) - direct_sl(y.values(), t));
      REQUIRE(close_rel(d.node_values[j], ref, 1e-12, scale));
    }

    // Linear interpolation between nodes matches the definition.
    const double top = std::max(x.max(), y.max());
    for (int k = 0; k < 100; ++k) {
      const double t = rs.uniform() * top * 1.1;
      const double ref = static_cast<double>(direct_sl(x.values(), t) - direct_sl(y.values(), t));
      REQUIRE(close_rel(d(t), ref, 1e-12, scale));
    }

    // Antisymmetry.
    const auto r = sl_difference(y, x);
    REQUIRE(r.breakpoints == d.breakpoints);
    for (std::size_t j = 0; j < d.size(); ++j) REQUIRE(r.node_values[j] == -d.node_values[j]);

    // Scaling.
    const double c = 0.5 + 4.0 * rs.uniform();
    const auto ds = sl_difference(x.scaled(c), y.scaled(c));
    REQUIRE(ds.size() == d.size());
    for (std::size_t j = 0; j < d.size(); ++j) {
      REQUIRE(close_rel(ds.breakpoints[j], c * d.breakpoints[j], 1e-14, 0.0));
      REQUIRE(close_rel(ds.node_values[j], c * d.node_values[j], 1e-12, c * scale));
    }
  }
}

TEST_CASE("ties across the two samples merge into one breakpoint") {
  const auto d = sl_difference(S({1, 2, 2}), S({2, 3}));
  CHECK(d.breakpoints == std::vector<double>{0, 1, 2, 3});
}
