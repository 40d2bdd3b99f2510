#include "icx/distributions.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "icx/numeric.hpp"

namespace icx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailSurvival = 1e-12;
constexpr double kRefineTol = 1e-6;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// x with P(X > x) = q for small q.
double upper_quantile(const DistributionSpec& d, double q) {
  switch (d.family()) {
    case Family::Uniform:
    case Family::TwoPoint:
      return upper_support(d);
    case Family::Exponential:
      return -std::log(q) / d.param(0);
    case Family::Weibull:
      return std::pow(-std::log(q), 1.0 / d.param(0));
    case Family::Gamma:
      return boost::math::gamma_q_inv(d.param(0), q);
    case Family::ShiftedPareto:
      return std::pow(q, -1.0 / d.param(0)) - 1.0;
  }
  return kInf;
}

double gamma_draw(double shape, RandomStream& rng) {
  // Marsaglia-Tsang squeeze; shapes below 1 use the U^(1/shape) boost.
  if (shape < 1.0) {
    const double u = rng.uniform();
    return gamma_draw(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double auto_t_max(const DistributionSpec& f, const DistributionSpec& g, double tol) {
  const double uf = upper_support(f);
  const double ug = upper_support(g);
  if (std::isfinite(uf) && std::isfinite(ug)) return std::max(uf, ug);
  auto small = [&](double t) { return std::max(sl_analytic(f, t), sl_analytic(g, t)) <= tol; };
  double lo = 0.0;
  double hi = std::max({1.0, mean(f), mean(g)});
  while (!small(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    (small(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

// ---------------------------------------------------------------- construction

DistributionSpec DistributionSpec::uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a >= 0.0 && a < b, "unif(a,b) needs 0 <= a < b");
  return {Family::Uniform, {a, b, 0.0}};
}

DistributionSpec DistributionSpec::exponential(double rate) {
  require(std::isfinite(rate) && rate > 0.0, "exp(rate) needs rate > 0");
  return {Family::Exponential, {rate, 0.0, 0.0}};
}

DistributionSpec DistributionSpec::weibull(double shape) {
  require(std::isfinite(shape) && shape > 0.0, "weib(shape) needs shape > 0");
  return {Family::Weibull, {shape, 0.0, 0.0}};
}

DistributionSpec DistributionSpec::gamma(double shape) {
  require(std::isfinite(shape) && shape > 0.0, "gamma(shape) needs shape > 0");
  return {Family::Gamma, {shape, 0.0, 0.0}};
}

DistributionSpec DistributionSpec::shifted_pareto(double eta) {
  require(std::isfinite(eta) && eta > 1.0, "par(eta) needs eta > 1 (finite mean)");
  return {Family::ShiftedPareto, {eta, 0.0, 0.0}};
}

DistributionSpec DistributionSpec::two_point(double v1, double p1, double v2) {
  require(std::isfinite(v1) && std::isfinite(v2) && v1 >= 0.0 && v1 < v2,
          "twopoint(v1,p1,v2) needs 0 <= v1 < v2");
  require(p1 > 0.0 && p1 < 1.0, "twopoint(v1,p1,v2) needs 0 < p1 < 1");
  return {Family::TwoPoint, {v1, p1, v2}};
}

std::string DistributionSpec::to_string() const {
  switch (family_) {
    case Family::Uniform:
      return "unif(" + fmt(params_[0]) + "," + fmt(params_[1]) + ")";
    case Family::Exponential:
      return "exp(" + fmt(params_[0]) + ")";
    case Family::Weibull:
      return "weib(" + fmt(params_[0]) + ")";
    case Family::Gamma:
      return "gamma(" + fmt(params_[0]) + ")";
    case Family::ShiftedPareto:
      return "par(" + fmt(params_[0]) + ")";
    case Family::TwoPoint:
      return "twopoint(" + fmt(params_[0]) + "," + fmt(params_[1]) + "," + fmt(params_[2]) + ")";
  }
  return "?";
}

DistributionSpec parse_distribution(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));

  const auto open = s.find('(');
  if (open == std::string::npos || s.empty() || s.back() != ')')
    throw std::invalid_argument("malformed distribution '" + std::string(text) +
                                "', expected name(args)");
  const std::string name = s.substr(0, open);
  std::vector<double> args;
  const char* p = s.data() + open + 1;
  const char* end = s.data() + s.size() - 1;
  while (p < end) {
    double v = 0.0;
    const auto res = std::from_chars(p, end, v);
    if (res.ec != std::errc())
      throw std::invalid_argument("bad number in distribution '" + std::string(text) + "'");
    args.push_back(v);
    p = res.ptr;
    if (p < end) {
      if (*p != ',')
        throw std::invalid_argument("bad separator in distribution '" + std::string(text) + "'");
      ++p;
    }
  }

  auto arity = [&](std::size_t k) {
    if (args.size() != k)
      throw std::invalid_argument("distribution '" + name + "' takes " + std::to_string(k) +
                                  " argument(s)");
  };
  if (name == "unif" || name == "uniform") {
    arity(2);
    return DistributionSpec::uniform(args[0], args[1]);
  }
  if (name == "exp" || name == "exponential") {
    arity(1);
    return DistributionSpec::exponential(args[0]);
  }
  if (name == "weib" || name == "weibull") {
    arity(1);
    return DistributionSpec::weibull(args[0]);
  }
  if (name == "gamma") {
    arity(1);
    return DistributionSpec::gamma(args[0]);
  }
  if (name == "par" || name == "pareto") {
    arity(1);
    return DistributionSpec::shifted_pareto(args[0]);
  }
  if (name == "twopoint") {
    arity(3);
    return DistributionSpec::two_point(args[0], args[1], args[2]);
  }
  throw std::invalid_argument("unknown distribution family '" + name + "'");
}

// ---------------------------------------------------------------- distribution functions

double cdf(const DistributionSpec& d, double x) {
  if (x < 0.0) return 0.0;
  return 1.0 - survival(d, x);
}

double survival(const DistributionSpec& d, double x) {
  if (x < 0.0) return 1.0;
  switch (d.family()) {
    case Family::Uniform: {
      const double a = d.param(0), b = d.param(1);
      if (x <= a) return 1.0;
      if (x >= b) return 0.0;
      return (b - x) / (b - a);
    }
    case Family::Exponential:
      return std::exp(-d.param(0) * x);
    case Family::Weibull:
      return std::exp(-std::pow(x, d.param(0)));
    case Family::Gamma:
      return x == 0.0 ? 1.0 : boost::math::gamma_q(d.param(0), x);
    case Family::ShiftedPareto:
      return std::pow(1.0 + x, -d.param(0));
    case Family::TwoPoint:
      if (x < d.param(0)) return 1.0;
      if (x < d.param(2)) return 1.0 - d.param(1);
      return 0.0;
  }
  return 0.0;
}

double pdf(const DistributionSpec& d, double x) {
  if (x < 0.0) return 0.0;
  switch (d.family()) {
    case Family::Uniform:
      return (x >= d.param(0) && x <= d.param(1)) ? 1.0 / (d.param(1) - d.param(0)) : 0.0;
    case Family::Exponential:
      return d.param(0) * std::exp(-d.param(0) * x);
    case Family::Weibull: {
      const double beta = d.param(0);
      return beta * std::pow(x, beta - 1.0) * std::exp(-std::pow(x, beta));
    }
    case Family::Gamma:
      return boost::math::gamma_p_derivative(d.param(0), x);
    case Family::ShiftedPareto:
      return d.param(0) * std::pow(1.0 + x, -d.param(0) - 1.0);
    case Family::TwoPoint:
      break;
  }
  throw std::invalid_argument("pdf: two-point law has no density");
}

double quantile(const DistributionSpec& d, double p) {
  require(p > 0.0 && p < 1.0, "quantile: p must lie in (0, 1)");
  switch (d.family()) {
    case Family::Uniform:
      return d.param(0) + p * (d.param(1) - d.param(0));
    case Family::Exponential:
      return -std::log1p(-p) / d.param(0);
    case Family::Weibull:
      return std::pow(-std::log1p(-p), 1.0 / d.param(0));
    case Family::Gamma:
      return boost::math::gamma_p_inv(d.param(0), p);
    case Family::ShiftedPareto:
      return std::pow(1.0 - p, -1.0 / d.param(0)) - 1.0;
    case Family::TwoPoint:
      return p <= d.param(1) ? d.param(0) : d.param(2);
  }
  return 0.0;
}

double upper_support(const DistributionSpec& d) noexcept {
  switch (d.family()) {
    case Family::Uniform:
      return d.param(1);
    case Family::TwoPoint:
      return d.param(2);
    default:
      return kInf;
  }
}

std::vector<double> support_breaks(const DistributionSpec& d) {
  switch (d.family()) {
    case Family::Uniform:
      return {d.param(0), d.param(1)};
    case Family::TwoPoint:
      return {d.param(0), d.param(2)};
    default:
      return {};
  }
}

double mean(const DistributionSpec& d) {
  switch (d.family()) {
    case Family::Uniform:
      return 0.5 * (d.param(0) + d.param(1));
    case Family::Exponential:
      return 1.0 / d.param(0);
    case Family::Weibull:
      return std::tgamma(1.0 + 1.0 / d.param(0));
    case Family::Gamma:
      return d.param(0);
    case Family::ShiftedPareto:
      return 1.0 / (d.param(0) - 1.0);
    case Family::TwoPoint:
      return d.param(1) * d.param(0) + (1.0 - d.param(1)) * d.param(2);
  }
  return 0.0;
}

// ---------------------------------------------------------------- stop-loss transforms

bool has_closed_form_sl(const DistributionSpec& d) noexcept {
  switch (d.family()) {
    case Family::Weibull:
      return d.param(0) == 2.0;
    case Family::Gamma:
      return false;
    default:
      return true;
  }
}

double sl_analytic(const DistributionSpec& d, double t) {
  if (t < 0.0) return mean(d) - t;
  switch (d.family()) {
    case Family::Uniform: {
      const double a = d.param(0), b = d.param(1);
      if (t <= a) return 0.5 * (a + b) - t;
      if (t >= b) return 0.0;
      return (b - t) * (b - t) / (2.0 * (b - a));
    }
    case Family::Exponential:
      return std::exp(-d.param(0) * t) / d.param(0);
    case Family::ShiftedPareto: {
      const double eta = d.param(0);
      return std::pow(1.0 + t, 1.0 - eta) / (eta - 1.0);
    }
    case Family::TwoPoint: {
      const double v1 = d.param(0), p1 = d.param(1), v2 = d.param(2);
      return p1 * std::max(v1 - t, 0.0) + (1.0 - p1) * std::max(v2 - t, 0.0);
    }
    case Family::Weibull:
      if (d.param(0) == 2.0) return 0.5 * std::sqrt(std::numbers::pi) * std::erfc(t);
      break;
    case Family::Gamma:
      break;
  }
  return sl_quadrature(d, t);
}

double sl_quadrature(const DistributionSpec& d, double t) {
  if (t < 0.0) return sl_quadrature(d, 0.0) - t;
  const bool bounded = std::isfinite(upper_support(d));
  const double upper = bounded ? upper_support(d) : upper_quantile(d, kTailSurvival);
  double tail = 0.0;
  if (!bounded) {
    // Survival below 1e-12 can still carry mass ~1e-8 for polynomial tails;
    // map [c, inf) onto [0, 1) instead of dropping it.
    const double c = std::max(t, upper);
    const auto r = integrate(
        [&](double u) {
          if (u >= 1.0) return 0.0;
          const double w = 1.0 - u;
          return survival(d, c + u / w) / (w * w);
        },
        0.0, 1.0);
    if (!r.converged) throw QuadratureError("sl_quadrature: tail did not converge", r.abs_error);
    tail = r.value;
  }
  if (t >= upper) return tail;
  const auto breaks = support_breaks(d);
  return integrate_pieces([&](double x) { return survival(d, x); }, t, upper, breaks) + tail;
}

// ---------------------------------------------------------------- sampling

double draw(const DistributionSpec& d, RandomStream& rng) {
  switch (d.family()) {
    case Family::Uniform:
      return d.param(0) + (d.param(1) - d.param(0)) * rng.uniform();
    case Family::Exponential:
      return -std::log(rng.uniform()) / d.param(0);
    case Family::Weibull:
      return std::pow(-std::log(rng.uniform()), 1.0 / d.param(0));
    case Family::Gamma:
      return gamma_draw(d.param(0), rng);
    case Family::ShiftedPareto:
      return std::pow(rng.uniform(), -1.0 / d.param(0)) - 1.0;
    case Family::TwoPoint:
      return rng.uniform() < d.param(1) ? d.param(0) : d.param(2);
  }
  return 0.0;
}

Sample sample_n(const DistributionSpec& d, std::size_t n, RandomStream& rng) {
  require(n >= 1, "sample_n: n must be >= 1");
  std::vector<double> raw(n);
  for (double& v : raw) v = draw(d, rng);
  return make_sample(raw);
}

// ---------------------------------------------------------------- order relations

double prob_exceed(const DistributionSpec& f, const DistributionSpec& g) {
  if (g.family() == Family::TwoPoint) {
    const double p1 = g.param(1);
    return p1 * survival(f, g.param(0)) + (1.0 - p1) * survival(f, g.param(2));
  }
  const double upper = std::isfinite(upper_support(g)) ? upper_support(g)
                                                        : upper_quantile(g, kTailSurvival);
  std::vector<double> breaks = support_breaks(f);
  for (double b : support_breaks(g)) breaks.push_back(b);
  const double value = integrate_pieces(
      [&](double x) { return survival(f, x) * pdf(g, x); }, 0.0, upper, breaks);
  return std::clamp(value, 0.0, 1.0);
}

double default_tolerance(const DistributionSpec& g) { return 1e-7 * (1.0 + mean(g)); }

IcxCheck icx_holds(const std::function<double(double)>& sl_f,
                   const std::function<double(double)>& sl_g, double t_max, std::size_t points,
                   double tol) {
  require(points >= 2 && t_max > 0.0, "icx_holds: grid needs >= 2 points and t_max > 0");
  IcxCheck out;
  out.max_violation = -kInf;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = t_max * static_cast<double>(i) / static_cast<double>(points - 1);
    const double diff = sl_f(t) - sl_g(t);
    if (diff > out.max_violation) {
      out.max_violation = diff;
      out.argmax = t;
    }
  }
  out.holds = out.max_violation <= tol;
  return out;
}

IcxCheck icx_holds(const DistributionSpec& f, const DistributionSpec& g, GridSpec grid,
                   std::optional<double> tol) {
  const double eps = tol.value_or(default_tolerance(g));
  const double t_max = grid.t_max > 0.0 ? grid.t_max : auto_t_max(f, g, eps);
  return icx_holds([&](double t) { return sl_analytic(f, t); },
                   [&](double t) { return sl_analytic(g, t); }, t_max, grid.points, eps);
}

EqualitySet equality_set(const DistributionSpec& f, const DistributionSpec& g, double tau,
                         std::optional<double> tol, GridSpec grid) {
  require(tau >= 0.0 && tau <= 1.0, "equality_set: tau must lie in [0, 1]");
  require(grid.points >= 2, "equality_set: grid needs >= 2 points");
  const double eps = tol.value_or(default_tolerance(g));
  const double t_max = grid.t_max > 0.0 ? grid.t_max : auto_t_max(f, g, eps);
  const std::size_t n = grid.points;
  const double h = t_max / static_cast<double>(n - 1);
  auto node = [&](std::size_t i) { return i + 1 == n ? t_max : h * static_cast<double>(i); };
  auto inside = [&](double t) { return std::abs(sl_analytic(f, t) - sl_analytic(g, t)) <= eps; };
  auto refine = [&](double in, double out) {
    while (std::abs(out - in) > kRefineTol) {
      const double mid = 0.5 * (in + out);
      (inside(mid) ? in : out) = mid;
    }
    return in;
  };

  std::vector<char> flags(n);
  for (std::size_t i = 0; i < n; ++i) flags[i] = inside(node(i));

  std::vector<Interval> runs;
  for (std::size_t i = 0; i < n;) {
    if (!flags[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && flags[j + 1]) ++j;
    const double lo = i == 0 ? 0.0 : refine(node(i), node(i - 1));
    const double hi = j + 1 == n ? kInf : refine(node(j), node(j + 1));
    if (i == j && hi - lo < 2.0 * kRefineTol)
      runs.push_back({node(i), node(i)});
    else
      runs.push_back({lo, hi});
    i = j + 1;
  }

  EqualitySet out;
  out.t_max = t_max;
  out.spacing = h;
  out.a = IntervalSet(runs, true);
  if (tau == 0.0)
    out.gamma_h = upper_support(f);
  else if (tau == 1.0)
    out.gamma_h = upper_support(g);
  else
    out.gamma_h = std::max(upper_support(f), upper_support(g));

  const double limit = std::isfinite(out.gamma_h) ? std::min(out.gamma_h, t_max) : t_max;
  // The run that reaches the end of the grid is the numerical point at
  // infinity; when it only starts within refinement distance of the limit
  // it carries no part of S.
  if (!runs.empty() && std::isinf(runs.back().hi) && limit - runs.back().lo < 2.0 * kRefineTol)
    runs.back().lo = std::max(runs.back().lo, limit);
  out.s = IntervalSet(runs, true).below(limit);
  return out;
}

std::string_view to_string(PairClass c) noexcept {
  switch (c) {
    case PairClass::Boundary:
      return "boundary";
    case PairClass::InsideSEmpty:
      return "inside_s_empty";
    case PairClass::InsideSNull:
      return "inside_s_null";
    case PairClass::InsideSPositive:
      return "inside_s_positive";
    case PairClass::Alternative:
      return "alternative";
  }
  return "?";
}

Classification classify_pair(const DistributionSpec& f, const DistributionSpec& g, double tau,
                             std::optional<double> tol, GridSpec grid) {
  Classification out;
  out.icx = icx_holds(f, g, grid, tol);
  if (f == g) {
    out.kind = PairClass::Boundary;
    out.equality = equality_set(f, g, tau, tol, grid);
    return out;
  }
  if (!out.icx.holds) {
    out.kind = PairClass::Alternative;
    return out;
  }
  out.equality = equality_set(f, g, tau, tol, grid);
  const auto& s = out.equality->s;
  if (s.empty())
    out.kind = PairClass::InsideSEmpty;
  else if (s.total_length() <= kNullSpacings * out.equality->spacing)
    out.kind = PairClass::InsideSNull;
  else
    out.kind = PairClass::InsideSPositive;
  return out;
}

}  // namespace icx
