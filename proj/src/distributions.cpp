#include "wgie/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "wgie/errors.hpp"
#include "wgie/rng.hpp"

namespace wgie {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGpdExponentialLimit = 1e-8;

struct FamilyInfo {
  Family family;
  std::string_view name;
  std::vector<std::string> params;
};

const std::vector<FamilyInfo>& catalog() {
  static const std::vector<FamilyInfo> info = {
      {Family::uniform, "uniform", {"a", "b"}},
      {Family::exponential, "exponential", {"theta"}},
      {Family::power, "power", {"a", "b"}},
      {Family::beta1, "beta", {"c"}},
      {Family::pareto1, "pareto1", {"a", "b"}},
      {Family::gamma, "gamma", {"shape", "rate"}},
      {Family::gpd, "gpd", {"theta"}},
      {Family::weibull, "weibull", {"shape", "rate"}},
      {Family::exp_exponential, "ee", {"shape", "rate"}},
      {Family::piecewise_linear, "linear", {"lo", "hi", "intercept", "slope"}},
      {Family::custom, "custom", {}},
  };
  return info;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be a finite positive number");
  }
}

bool gpd_is_exponential(double theta) { return std::abs(theta) < kGpdExponentialLimit; }

// log(1 - e^{-y}) for y > 0.
double log_one_minus_exp_neg(double y) { return std::log(-std::expm1(-y)); }

// Generic inversion of a monotone map g on (lo, hi) by bisection. `g` must be
// increasing and cross `target` inside the support.
double invert_increasing(const ScalarFunction& g, double target, double lo, double hi) {
  if (std::isinf(hi)) {
    hi = std::max(1.0, 2.0 * std::abs(lo));
    for (int i = 0; i < 2000 && g(hi) < target; ++i) hi *= 2.0;
  }
  const ScalarFunction h = [&](double x) { return g(x) - target; };
  if (h(lo) >= 0.0) return lo;
  if (h(hi) <= 0.0) return hi;
  return bisect_root(h, lo, hi, 4e-16);
}

double linear_cdf(std::span<const double> p, double x) {
  const double lo = p[0];
  const double hi = p[1];
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return p[2] * (x - lo) + 0.5 * p[3] * (x * x - lo * lo);
}

}  // namespace

std::string_view family_name(Family family) {
  for (const auto& f : catalog()) {
    if (f.family == family) return f.name;
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (const auto& f : catalog()) {
    if (f.name == name) return f.family;
  }
  if (name == "beta1") return Family::beta1;
  if (name == "exp_exponential" || name == "exponentiated_exponential") return Family::exp_exponential;
  if (name == "piecewise_linear") return Family::piecewise_linear;
  if (name == "exp") return Family::exponential;
  return std::nullopt;
}

std::vector<std::string> param_names(Family family) {
  for (const auto& f : catalog()) {
    if (f.family == family) return f.params;
  }
  return {};
}

DistributionModel::DistributionModel(Family family, std::vector<double> params, Support support)
    : family_(family), params_(std::move(params)), support_(support) {}

DistributionModel DistributionModel::uniform(double a, double b) {
  if (!(a >= 0.0) || !(b > a) || !std::isfinite(b)) {
    throw DomainError("uniform: need 0 <= a < b < inf");
  }
  return DistributionModel(Family::uniform, {a, b}, {a, b});
}

DistributionModel DistributionModel::exponential(double theta) {
  require_positive(theta, "exponential: theta");
  return DistributionModel(Family::exponential, {theta}, {0.0, kInf});
}

DistributionModel DistributionModel::power(double a, double b) {
  require_positive(a, "power: a");
  require_positive(b, "power: b");
  return DistributionModel(Family::power, {a, b}, {0.0, a});
}

DistributionModel DistributionModel::beta1(double c) {
  require_positive(c, "beta: c");
  return DistributionModel(Family::beta1, {c}, {0.0, 1.0});
}

DistributionModel DistributionModel::pareto1(double a, double b) {
  require_positive(a, "pareto1: a");
  require_positive(b, "pareto1: b");
  return DistributionModel(Family::pareto1, {a, b}, {a, kInf});
}

DistributionModel DistributionModel::gamma(double shape, double rate) {
  require_positive(shape, "gamma: shape");
  require_positive(rate, "gamma: rate");
  return DistributionModel(Family::gamma, {shape, rate}, {0.0, kInf});
}

DistributionModel DistributionModel::gpd(double theta) {
  if (!std::isfinite(theta)) throw DomainError("gpd: theta must be finite");
  const double hi = theta < 0.0 && !gpd_is_exponential(theta) ? -1.0 / theta : kInf;
  return DistributionModel(Family::gpd, {theta}, {0.0, hi});
}

DistributionModel DistributionModel::weibull(double shape, double rate) {
  require_positive(shape, "weibull: shape");
  require_positive(rate, "weibull: rate");
  return DistributionModel(Family::weibull, {shape, rate}, {0.0, kInf});
}

DistributionModel DistributionModel::exp_exponential(double shape, double rate) {
  require_positive(shape, "ee: shape");
  require_positive(rate, "ee: rate");
  return DistributionModel(Family::exp_exponential, {shape, rate}, {0.0, kInf});
}

DistributionModel DistributionModel::piecewise_linear(double lo, double hi, double intercept,
                                                      double slope) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw DomainError("linear: need 0 <= lo < hi < inf");
  }
  const double f_lo = intercept + slope * lo;
  const double f_hi = intercept + slope * hi;
  const double tol = 1e-12 * (std::abs(intercept) + std::abs(slope) * hi + 1.0);
  if (f_lo < -tol || f_hi < -tol) throw DomainError("linear: density must be nonnegative");
  const double total = intercept * (hi - lo) + 0.5 * slope * (hi * hi - lo * lo);
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "linear: density integrates to " << total << ", not 1";
    throw DomainError(msg.str());
  }
  return DistributionModel(Family::piecewise_linear, {lo, hi, intercept, slope}, {lo, hi});
}

DistributionModel DistributionModel::custom(ScalarFunction pdf_fn, ScalarFunction cdf_fn, double lo,
                                            double hi, std::string name) {
  if (!pdf_fn || !cdf_fn) throw DomainError("custom: pdf and cdf are required");
  if (!(lo >= 0.0) || !(hi > lo)) throw DomainError("custom: need 0 <= lo < hi");
  DistributionModel m(Family::custom, {}, {lo, hi});
  m.custom_ = std::make_shared<const CustomParts>(
      CustomParts{std::move(pdf_fn), std::move(cdf_fn), std::move(name)});
  return m;
}

DistributionModel DistributionModel::from_params(Family family, std::span<const double> p) {
  const auto need = param_names(family).size();
  if (family == Family::custom) throw DomainError("custom models cannot be built from parameters");
  if (p.size() != need) {
    std::ostringstream msg;
    msg << family_name(family) << ": expected " << need << " parameters, got " << p.size();
    throw DomainError(msg.str());
  }
  switch (family) {
    case Family::uniform: return uniform(p[0], p[1]);
    case Family::exponential: return exponential(p[0]);
    case Family::power: return power(p[0], p[1]);
    case Family::beta1: return beta1(p[0]);
    case Family::pareto1: return pareto1(p[0], p[1]);
    case Family::gamma: return gamma(p[0], p[1]);
    case Family::gpd: return gpd(p[0]);
    case Family::weibull: return weibull(p[0], p[1]);
    case Family::exp_exponential: return exp_exponential(p[0], p[1]);
    case Family::piecewise_linear: return piecewise_linear(p[0], p[1], p[2], p[3]);
    case Family::custom: break;
  }
  throw DomainError("unknown family");
}

std::string DistributionModel::describe() const {
  if (custom_) return custom_->name;
  std::ostringstream out;
  out.precision(10);
  out << family_name(family_) << "(";
  const auto names = param_names(family_);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i) out << ", ";
    out << names[i] << "=" << params_[i];
  }
  out << ")";
  return out.str();
}

double log_pdf(const DistributionModel& m, double x) {
  const auto p = m.params();
  const Support s = m.support();
  if (std::isnan(x) || x < s.lo || x > s.hi) return -kInf;
  switch (m.family()) {
    case Family::uniform:
      return -std::log(p[1] - p[0]);
    case Family::exponential:
      return std::log(p[0]) - p[0] * x;
    case Family::power:
      return std::log(p[1] / p[0]) + (p[1] - 1.0) * std::log(x / p[0]);
    case Family::beta1:
      return std::log(p[0]) + (p[0] - 1.0) * std::log(x);
    case Family::pareto1:
      return std::log(p[1]) + p[1] * std::log(p[0]) - (p[1] + 1.0) * std::log(x);
    case Family::gamma:
      return p[0] * std::log(p[1]) + (p[0] - 1.0) * std::log(x) - p[1] * x - std::lgamma(p[0]);
    case Family::gpd: {
      const double theta = p[0];
      if (gpd_is_exponential(theta)) return -x;
      const double base = std::log1p(theta * x);
      return -(1.0 / theta + 1.0) * base;
    }
    case Family::weibull: {
      const double z = p[1] * x;
      return std::log(p[0] * p[1]) + (p[0] - 1.0) * std::log(z) - std::pow(z, p[0]);
    }
    case Family::exp_exponential: {
      const double z = p[1] * x;
      return std::log(p[0] * p[1]) + (p[0] - 1.0) * log_one_minus_exp_neg(z) - z;
    }
    case Family::piecewise_linear:
      return std::log(p[2] + p[3] * x);
    case Family::custom:
      return std::log(m.custom_parts()->pdf(x));
  }
  return -kInf;
}

double pdf(const DistributionModel& m, double x) {
  const Support s = m.support();
  if (std::isnan(x) || x < s.lo || x > s.hi) return 0.0;
  if (m.family() == Family::custom) return m.custom_parts()->pdf(x);
  if (m.family() == Family::piecewise_linear) return std::max(0.0, m.param(2) + m.param(3) * x);
  return std::exp(log_pdf(m, x));
}

double cdf(const DistributionModel& m, double x) {
  const auto p = m.params();
  const Support s = m.support();
  if (std::isnan(x)) throw DomainError("cdf: x is NaN");
  if (x <= s.lo) return 0.0;
  if (x >= s.hi) return 1.0;
  switch (m.family()) {
    case Family::uniform:
      return (x - p[0]) / (p[1] - p[0]);
    case Family::exponential:
      return -std::expm1(-p[0] * x);
    case Family::power:
      return std::pow(x / p[0], p[1]);
    case Family::beta1:
      return std::pow(x, p[0]);
    case Family::pareto1:
      return -std::expm1(p[1] * std::log(p[0] / x));
    case Family::gamma:
      return gamma_p(p[0], p[1] * x);
    case Family::gpd:
      return gpd_is_exponential(p[0]) ? -std::expm1(-x)
                                      : -std::expm1(-std::log1p(p[0] * x) / p[0]);
    case Family::weibull:
      return -std::expm1(-std::pow(p[1] * x, p[0]));
    case Family::exp_exponential:
      return std::exp(p[0] * log_one_minus_exp_neg(p[1] * x));
    case Family::piecewise_linear:
      return std::clamp(linear_cdf(p, x), 0.0, 1.0);
    case Family::custom:
      return m.custom_parts()->cdf(x);
  }
  return 0.0;
}

double sf(const DistributionModel& m, double x) {
  const auto p = m.params();
  const Support s = m.support();
  if (std::isnan(x)) throw DomainError("sf: x is NaN");
  if (x <= s.lo) return 1.0;
  if (x >= s.hi) return 0.0;
  switch (m.family()) {
    case Family::exponential:
      return std::exp(-p[0] * x);
    case Family::pareto1:
      return std::pow(p[0] / x, p[1]);
    case Family::gamma:
      return gamma_q(p[0], p[1] * x);
    case Family::gpd:
      return gpd_is_exponential(p[0]) ? std::exp(-x) : std::exp(-std::log1p(p[0] * x) / p[0]);
    case Family::weibull:
      return std::exp(-std::pow(p[1] * x, p[0]));
    case Family::exp_exponential:
      return -std::expm1(p[0] * log_one_minus_exp_neg(p[1] * x));
    case Family::uniform:
      return (p[1] - x) / (p[1] - p[0]);
    default:
      return 1.0 - cdf(m, x);
  }
}

double quantile(const DistributionModel& m, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
  const auto p = m.params();
  switch (m.family()) {
    case Family::uniform:
      return p[0] + prob * (p[1] - p[0]);
    case Family::exponential:
      return -std::log1p(-prob) / p[0];
    case Family::power:
      return p[0] * std::pow(prob, 1.0 / p[1]);
    case Family::beta1:
      return std::pow(prob, 1.0 / p[0]);
    case Family::pareto1:
      return p[0] * std::exp(-std::log1p(-prob) / p[1]);
    case Family::gpd:
      return gpd_is_exponential(p[0]) ? -std::log1p(-prob)
                                      : std::expm1(-p[0] * std::log1p(-prob)) / p[0];
    case Family::weibull:
      return std::pow(-std::log1p(-prob), 1.0 / p[0]) / p[1];
    case Family::exp_exponential:
      return -std::log1p(-std::pow(prob, 1.0 / p[0])) / p[1];
    case Family::piecewise_linear: {
      // Solve c0 (x - lo) + c1 (x^2 - lo^2) / 2 = prob.
      const double lo = p[0];
      const double c0 = p[2];
      const double c1 = p[3];
      if (c1 == 0.0) return lo + prob / c0;
      const double f_lo = c0 + c1 * lo;
      const double disc = std::max(0.0, f_lo * f_lo + 2.0 * c1 * prob);
      // Stable root of (c1/2) d^2 + f_lo d - prob = 0 for d = x - lo.
      const double d = 2.0 * prob / (f_lo + std::sqrt(disc));
      return std::min(lo + d, p[1]);
    }
    case Family::gamma:
    case Family::custom:
      break;
  }
  const Support s = m.support();
  return invert_increasing([&m](double x) { return cdf(m, x); }, prob, s.lo, s.hi);
}

double quantile_upper(const DistributionModel& m, double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile_upper: q must lie in (0, 1)");
  const auto p = m.params();
  switch (m.family()) {
    case Family::exponential:
      return -std::log(q) / p[0];
    case Family::pareto1:
      return p[0] * std::pow(q, -1.0 / p[1]);
    case Family::gpd:
      return gpd_is_exponential(p[0]) ? -std::log(q) : std::expm1(-p[0] * std::log(q)) / p[0];
    case Family::weibull:
      return std::pow(-std::log(q), 1.0 / p[0]) / p[1];
    case Family::exp_exponential:
      return -std::log(-std::expm1(std::log1p(-q) / p[0])) / p[1];
    case Family::gamma: {
      const Support s = m.support();
      return invert_increasing([&m](double x) { return -sf(m, x); }, -q, s.lo, s.hi);
    }
    default:
      return quantile(m, 1.0 - q);
  }
}

void Window::validate() const {
  if (std::isnan(t1) || std::isnan(t2)) throw DomainError("window: endpoints must not be NaN");
  if (!(t1 >= 0.0) || !std::isfinite(t1)) throw DomainError("window: need finite t1 >= 0");
  if (!(t2 > t1)) throw DomainError("window: need t1 < t2");
}

double log_mass(const DistributionModel& m, Window w) {
  w.validate();
  const double f1 = cdf(m, w.t1);
  if (f1 <= 0.5) {
    const double f2 = cdf(m, w.t2);
    return std::log(f2 - f1);
  }
  const double s1 = sf(m, w.t1);
  const double s2 = sf(m, w.t2);
  return std::log(s1 - s2);
}

void validate_window(const DistributionModel& m, Window w) {
  const double lm = log_mass(m, w);
  if (!(lm > std::log(1e-300)) || std::isnan(lm)) {
    std::ostringstream msg;
    msg << "window (" << w.t1 << ", " << w.t2 << ") carries no probability mass under "
        << m.describe();
    throw DegenerateWindowError(msg.str());
  }
}

Window full_window(const DistributionModel& m) {
  const Support s = m.support();
  return Window{std::max(0.0, s.lo), s.hi};
}

double truncated_pdf(const DistributionModel& m, Window w, double x) {
  validate_window(m, w);
  if (x < w.t1 || x > w.t2) return 0.0;
  const double lf = log_pdf(m, x);
  if (lf == -kInf) return 0.0;
  return std::exp(lf - log_mass(m, w));
}

GfrPair gfr(const DistributionModel& m, Window w) {
  validate_window(m, w);
  const double lm = log_mass(m, w);
  const double h1 = std::exp(log_pdf(m, w.t1) - lm);
  const double h2 = std::isinf(w.t2) ? 0.0 : std::exp(log_pdf(m, w.t2) - lm);
  return GfrPair{h1, h2};
}

std::vector<double> sample_truncated(const DistributionModel& m, Window w, std::size_t n,
                                     std::uint64_t seed) {
  validate_window(m, w);
  std::vector<double> out;
  out.reserve(n);
  if (n == 0) return out;
  Rng rng(seed);
  const double f1 = cdf(m, w.t1);
  // Invert from whichever tail keeps u well resolved.
  if (f1 <= 0.5) {
    const double f2 = cdf(m, w.t2);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = f1 + (f2 - f1) * uniform_open01(rng);
      double x = u <= 0.0 ? w.t1 : (u >= 1.0 ? w.t2 : quantile(m, u));
      out.push_back(std::clamp(x, w.t1, w.t2));
    }
  } else {
    const double s1 = sf(m, w.t1);
    const double s2 = sf(m, w.t2);
    for (std::size_t i = 0; i < n; ++i) {
      const double q = s1 - (s1 - s2) * uniform_open01(rng);
      double x = q <= 0.0 ? w.t2 : (q >= 1.0 ? w.t1 : quantile_upper(m, q));
      out.push_back(std::clamp(x, w.t1, w.t2));
    }
  }
  return out;
}

StructureFlags structure_flags(const DistributionModel& m) {
  const auto p = m.params();
  auto by_exponent = [](double e) {
    if (e > 0.0) return DensityShape::increasing;
    if (e < 0.0) return DensityShape::decreasing;
    return DensityShape::constant;
  };
  switch (m.family()) {
    case Family::uniform:
      return {Tri::yes, DensityShape::constant};
    case Family::exponential:
      return {Tri::yes, DensityShape::decreasing};
    case Family::power:
      return {Tri::yes, by_exponent(p[1] - 1.0)};
    case Family::beta1:
      return {Tri::yes, by_exponent(p[0] - 1.0)};
    case Family::pareto1:
      return {Tri::yes, DensityShape::decreasing};
    case Family::gamma:
      return {Tri::yes, p[0] <= 1.0 ? DensityShape::decreasing : DensityShape::non_monotone};
    case Family::gpd: {
      const double theta = p[0];
      // f = (1 + theta x)^{-1/theta - 1}; theta < -1 gives a growing convex
      // density whose cdf is no longer log-concave.
      if (theta < -1.0) return {Tri::no, DensityShape::increasing};
      if (theta == -1.0) return {Tri::yes, DensityShape::constant};
      return {Tri::yes, DensityShape::decreasing};
    }
    case Family::weibull:
      return {Tri::yes, p[0] <= 1.0 ? DensityShape::decreasing : DensityShape::non_monotone};
    case Family::exp_exponential:
      return {Tri::yes, p[0] <= 1.0 ? DensityShape::decreasing : DensityShape::non_monotone};
    case Family::piecewise_linear: {
      // F(x) = c0 (x - lo) + c1 (x^2 - lo^2) / 2. log F is concave iff
      // F F'' <= F'^2, which holds whenever f(lo) >= 0 and lo = 0 or c1 <= 0.
      const bool lc = p[0] == 0.0 || p[3] <= 0.0;
      return {lc ? Tri::yes : Tri::unknown, by_exponent(p[3])};
    }
    case Family::custom:
      return {Tri::unknown, DensityShape::non_monotone};
  }
  return {Tri::unknown, DensityShape::non_monotone};
}

std::string_view to_string(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    case Tri::unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(DensityShape s) {
  switch (s) {
    case DensityShape::increasing: return "increasing";
    case DensityShape::decreasing: return "decreasing";
    case DensityShape::constant: return "constant";
    case DensityShape::non_monotone: return "non-monotone";
  }
  return "non-monotone";
}

}  // namespace wgie
