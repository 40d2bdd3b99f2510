#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "icx/numeric.hpp"

using namespace icx;

TEST_CASE("adaptive quadrature on smooth integrands") {
  const auto r = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));

  const auto g = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0);
  CHECK(g.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));

  const auto empty = integrate([](double) { return 1.0; }, 2.0, 2.0);
  CHECK(empty.value == 0.0);
}

TEST_CASE("integrate_pieces handles kinks at break points") {
  auto kink = [](double x) { return std::abs(x - 1.0 / 3.0); };
  const double exact = 0.5 * (1.0 / 9.0) + 0.5 * (4.0 / 9.0);
  const std::vector<double> breaks{1.0 / 3.0};
  CHECK(integrate_pieces(kink, 0.0, 1.0, breaks) == doctest::Approx(exact).epsilon(1e-13));
  // Breaks outside the range are ignored.
  const std::vector<double> far{-1.0, 5.0, 1.0 / 3.0};
  CHECK(integrate_pieces(kink, 0.0, 1.0, far) == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("quadrature reports failure on a singular integrand") {
  QuadratureOptions opts;
  opts.max_intervals = 20;
  opts.abs_tol = 1e-14;
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, opts);
  CHECK_FALSE(r.converged);
  CHECK_THROWS_AS(integrate_pieces([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {}, opts),
                  QuadratureError);
}

TEST_CASE("bisection finds the crossing of an increasing function") {
  const double r = bisect_increasing([](double x) { return x * x * x; }, 8.0, 0.0, 10.0, 1e-12);
  CHECK(r == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("normal distribution helpers") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
  CHECK(normal_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
  for (double p : {1e-10, 0.025, 0.3, 0.5, 0.9, 0.999999})
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  CHECK(normal_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-12));
  CHECK_THROWS(normal_quantile(1.0));
}

TEST_CASE("parallel_for visits every index exactly once") {
  for (unsigned threads : {1u, 2u, 4u, 16u}) {
    std::vector<std::atomic<int>> hits(1003);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i].fetch_add(1); });
    bool all_once = true;
    for (auto& h : hits) all_once = all_once && h.load() == 1;
    CHECK(all_once);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("parallel_for rethrows worker exceptions") {
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t i) {
                                 if (i == 37) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("exact summation") {
  ExactSum s;
  for (double v : {1e100, 1.0, -1e100, 1e-100}) s.add(v);
  CHECK(s.value() == 1.0);

  ExactSum t;
  for (int i = 0; i < 10; ++i) t.add(0.1);
  CHECK(t.value() == 1.0);  // naive summation gives 0.9999999999999999

  // Half-way case: 1 + 2^-53 + tiny must round up, not to even.
  ExactSum h;
  h.add(1.0);
  h.add(0x1p-53);
  h.add(1e-300);
  CHECK(h.value() == 1.0 + 0x1p-52);

  ExactSum p;
  p.add_product(0.1, 3.0);
  p.add(-0.3);
  CHECK(p.value() == doctest::Approx(5.551115123125783e-17).epsilon(1e-12));

  ExactSum d;
  d.add_difference(1.0, 1e-17);
  d.add(-1.0);
  CHECK(d.value() == -1e-17);

  // Order of accumulation does not change the reported value.
  std::vector<double> v;
  for (int i = 1; i <= 200; ++i) v.push_back(std::ldexp(1.0 / i, (i * 37) % 120 - 60) * (i % 3 ? 1 : -1));
  ExactSum fwd, rev;
  for (double x : v) fwd.add(x);
  for (auto it = v.rbegin(); it != v.rend(); ++it) rev.add(*it);
  CHECK(fwd.value() == rev.value());
  CHECK(ExactSum{}.value() == 0.0);
}
