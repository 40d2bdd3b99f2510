#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "icx/empirical.hpp"
#include "icx/interval_set.hpp"
#include "icx/random.hpp"

namespace icx {

enum class Family { Uniform, Exponential, Weibull, Gamma, ShiftedPareto, TwoPoint };

/// Parametric law on [0, inf) used for fixtures and power studies.
///
///   Uniform(a, b)            0 <= a < b
///   Exponential(rate)        rate > 0
///   Weibull(shape)           scale 1, shape > 0
///   Gamma(shape)             scale 1, shape > 0
///   ShiftedPareto(eta)       F(x) = 1 - (1 + x)^-eta, eta > 1
///   TwoPoint(v1, p1, v2)     P(v1) = p1, P(v2) = 1 - p1, 0 <= v1 < v2, 0 < p1 < 1
class DistributionSpec {
 public:
  static DistributionSpec uniform(double a, double b);
  static DistributionSpec exponential(double rate);
  static DistributionSpec weibull(double shape);
  static DistributionSpec gamma(double shape);
  static DistributionSpec shifted_pareto(double eta);
  static DistributionSpec two_point(double v1, double p1, double v2);

  Family family() const noexcept { return family_; }
  double param(std::size_t i) const noexcept { return params_[i]; }
  bool is_continuous() const noexcept { return family_ != Family::TwoPoint; }

  /// Canonical short form, e.g. "weib(2)"; parse_distribution() reads it back.
  std::string to_string() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

 private:
  DistributionSpec(Family f, std::array<double, 3> p) : family_(f), params_(p) {}
  Family family_;
  std::array<double, 3> params_;
};

/// Parses `unif(0,1)`, `exp(1)`, `weib(2)`, `gamma(0.5)`, `par(5)`,
/// `twopoint(0,0.75,2)` (case-insensitive, whitespace tolerated).
DistributionSpec parse_distribution(std::string_view text);

double cdf(const DistributionSpec& d, double x);
/// P(X > x).
double survival(const DistributionSpec& d, double x);
/// Density of a continuous family; throws for TwoPoint.
double pdf(const DistributionSpec& d, double x);
/// Generalised inverse inf{x : F(x) >= p}, p in (0, 1).
double quantile(const DistributionSpec& d, double p);
/// Right end-point of the support; +infinity for unbounded families.
double upper_support(const DistributionSpec& d) noexcept;
/// Kinks/jumps of the distribution function inside the support.
std::vector<double> support_breaks(const DistributionSpec& d);

double mean(const DistributionSpec& d);

/// Stop-loss transform, the integrated survival function on [t, inf).
/// Closed forms for Uniform, Exponential, ShiftedPareto, TwoPoint and
/// Weibull(2); adaptive quadrature of the survival function otherwise.
/// For t < 0 the value is mean - t.
double sl_analytic(const DistributionSpec& d, double t);
/// Stop-loss transform by quadrature of the survival function, for every family.
double sl_quadrature(const DistributionSpec& d, double t);
bool has_closed_form_sl(const DistributionSpec& d) noexcept;

double draw(const DistributionSpec& d, RandomStream& stream);
/// n independent draws, sorted into a Sample.
Sample sample_n(const DistributionSpec& d, std::size_t n, RandomStream& stream);

/// P(X > Y) for independent X ~ f, Y ~ g.
double prob_exceed(const DistributionSpec& f, const DistributionSpec& g);

/// Evaluation grid for transform comparisons. t_max <= 0 selects it from the
/// pair: the largest finite support end-point when both are bounded,
/// otherwise the first t where both transforms are below the tolerance.
struct GridSpec {
  std::size_t points = 4096;
  double t_max = 0.0;
};

struct IcxCheck {
  bool holds = false;
  double max_violation = 0.0;  // max over grid of F^SL - G^SL
  double argmax = 0.0;
};

/// Default comparison tolerance 1e-7 (1 + mean(g)).
double default_tolerance(const DistributionSpec& g);

/// Checks F^SL <= G^SL + tol on a uniform grid over [0, t_max].
IcxCheck icx_holds(const DistributionSpec& f, const DistributionSpec& g, GridSpec grid = {},
                   std::optional<double> tol = std::nullopt);

/// Same check for arbitrary stop-loss transforms on an explicit [0, t_max].
IcxCheck icx_holds(const std::function<double(double)>& sl_f,
                   const std::function<double(double)>& sl_g, double t_max, std::size_t points,
                   double tol);

struct EqualitySet {
  IntervalSet a;       // {t : |F^SL - G^SL| <= tol}, always with the point at infinity
  IntervalSet s;       // a restricted to [0, gamma_h)
  double gamma_h = 0;  // right end-point of (1 - tau) F + tau G
  double t_max = 0;    // grid extent actually used
  double spacing = 0;  // grid spacing
};

EqualitySet equality_set(const DistributionSpec& f, const DistributionSpec& g, double tau,
                         std::optional<double> tol = std::nullopt, GridSpec grid = {});

enum class PairClass { Boundary, InsideSEmpty, InsideSNull, InsideSPositive, Alternative };

std::string_view to_string(PairClass c) noexcept;

struct Classification {
  PairClass kind = PairClass::Boundary;
  IcxCheck icx;
  std::optional<EqualitySet> equality;  // absent on the alternative
};

/// S counts as a null set when its total length is at most
/// kNullSpacings grid spacings; tangential contact of two transforms
/// produces an interval of width O(sqrt(tol)) around the touching point.
inline constexpr double kNullSpacings = 16.0;

Classification classify_pair(const DistributionSpec& f, const DistributionSpec& g, double tau,
                             std::optional<double> tol = std::nullopt, GridSpec grid = {});

}  // namespace icx
