#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wgie/numerics.hpp"

namespace wgie {

/// Closed catalog of lifetime families.
///
/// Parameter order (also the order of DistributionModel::params()):
///   uniform          a, b            density 1/(b-a) on (a, b)
///   exponential      theta           theta e^{-theta x}
///   power            a, b            (b/a)(x/a)^{b-1} on (0, a)
///   beta1            c               c x^{c-1} on (0, 1)
///   pareto1          a, b            (b/a)(x/a)^{-(b+1)} on (a, inf)
///   gamma            shape n, rate   rate^n x^{n-1} e^{-rate x} / Gamma(n)
///   gpd              theta           survival (1 + theta x)^{-1/theta}
///   weibull          shape a, rate   a l (l x)^{a-1} e^{-(l x)^a}
///   exp_exponential  shape a, rate   a l (1 - e^{-l x})^{a-1} e^{-l x}
///   piecewise_linear lo, hi, c0, c1  c0 + c1 x on (lo, hi)
///   custom           user pdf/cdf pair, quadrature paths only
enum class Family {
  uniform,
  exponential,
  power,
  beta1,
  pareto1,
  gamma,
  gpd,
  weibull,
  exp_exponential,
  piecewise_linear,
  custom,
};

std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);
/// Names of the parameters in params() order, e.g. {"shape", "rate"}.
std::vector<std::string> param_names(Family family);

struct Support {
  double lo;
  double hi;
};

/// Immutable parametric lifetime model. Construct through the named
/// factories, which validate parameters and throw DomainError.
class DistributionModel {
 public:
  static DistributionModel uniform(double a, double b);
  static DistributionModel exponential(double theta);
  static DistributionModel power(double a, double b);
  static DistributionModel beta1(double c);
  static DistributionModel pareto1(double a, double b);
  static DistributionModel gamma(double shape, double rate);
  static DistributionModel gpd(double theta);
  static DistributionModel weibull(double shape, double rate);
  static DistributionModel exp_exponential(double shape, double rate);
  static DistributionModel piecewise_linear(double lo, double hi, double intercept, double slope);
  static DistributionModel custom(ScalarFunction pdf, ScalarFunction cdf, double lo, double hi,
                                  std::string name = "custom");
  static DistributionModel from_params(Family family, std::span<const double> params);

  Family family() const noexcept { return family_; }
  std::span<const double> params() const noexcept { return params_; }
  double param(std::size_t i) const { return params_.at(i); }
  Support support() const noexcept { return support_; }
  std::string describe() const;

  struct CustomParts {
    ScalarFunction pdf;
    ScalarFunction cdf;
    std::string name;
  };
  const CustomParts* custom_parts() const noexcept { return custom_.get(); }

 private:
  DistributionModel(Family family, std::vector<double> params, Support support);

  Family family_;
  std::vector<double> params_;
  Support support_;
  std::shared_ptr<const CustomParts> custom_;
};

/// Density; 0 outside the support.
double pdf(const DistributionModel& model, double x);
/// log pdf; -inf outside the support.
double log_pdf(const DistributionModel& model, double x);
double cdf(const DistributionModel& model, double x);
/// Survival 1 - F(x), evaluated without cancellation in the right tail.
double sf(const DistributionModel& model, double x);
/// Inverse cdf for p in (0, 1); DomainError otherwise.
double quantile(const DistributionModel& model, double p);
/// Inverse survival: x with sf(x) = q, q in (0, 1).
double quantile_upper(const DistributionModel& model, double q);

/// Double-truncation interval (t1, t2), 0 <= t1 < t2 <= inf.
struct Window {
  double t1;
  double t2;

  void validate() const;
  double width() const noexcept { return t2 - t1; }
};

/// log(F(t2) - F(t1)), from the tail that keeps the difference accurate.
double log_mass(const DistributionModel& model, Window w);
/// Throws DegenerateWindowError if the window carries (numerically) no mass.
void validate_window(const DistributionModel& model, Window w);
/// Whole support as a window (lower end clamped at 0).
Window full_window(const DistributionModel& model);

/// f(x) / (F(t2) - F(t1)) inside the window, 0 outside.
double truncated_pdf(const DistributionModel& model, Window w, double x);

/// General failure rates h_i = f(t_i) / (F(t2) - F(t1)).
struct GfrPair {
  double h1;
  double h2;
};
GfrPair gfr(const DistributionModel& model, Window w);

/// n draws from the truncated law by inversion, u ~ U(F(t1), F(t2)).
/// Uses std::mt19937_64 seeded with `seed`; identical seeds give identical
/// vectors on every conforming standard library.
std::vector<double> sample_truncated(const DistributionModel& model, Window w, std::size_t n,
                                     std::uint64_t seed);

enum class Tri { yes, no, unknown };
enum class DensityShape { increasing, decreasing, constant, non_monotone };

struct StructureFlags {
  Tri cdf_log_concave;
  DensityShape density;
};
StructureFlags structure_flags(const DistributionModel& model);

std::string_view to_string(Tri t);
std::string_view to_string(DensityShape s);

}  // namespace wgie
