#include "wgie/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "wgie/errors.hpp"

namespace wgie {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSingularDenominator = 1e-8;

struct LogIntegral {
  double log_value;
  double rel_error;
};

// Log-integrand evaluated safely: -inf maps to a zero contribution.
double exp_shifted(double h, double ref) { return h == -kInf ? 0.0 : std::exp(h - ref); }

std::string endpoint_name(Window w, const ScalarFunction& log_integrand) {
  std::ostringstream out;
  if (std::isinf(w.t2)) {
    out << "upper endpoint t2 = inf";
    return out.str();
  }
  const double eps = 1e-9 * std::max(1.0, w.width());
  const double lo = log_integrand(w.t1 + eps);
  const double hi = log_integrand(w.t2 - eps);
  if (lo >= hi) {
    out << "lower endpoint t1 = " << w.t1;
  } else {
    out << "upper endpoint t2 = " << w.t2;
  }
  return out.str();
}

// log int_w exp(h(x)) dx, rescaled by the largest sampled value of h so that
// integrands far below the double range still integrate to a finite log.
LogIntegral log_integral(const ScalarFunction& h, Window w, const QuadratureSpec& spec,
                         std::string_view what) {
  double ref = -kInf;
  constexpr int probes = 33;
  for (int i = 1; i < probes; ++i) {
    const double u = static_cast<double>(i) / probes;
    const double x = std::isinf(w.t2) ? w.t1 + u / (1.0 - u) : w.t1 + u * w.width();
    const double v = h(x);
    if (std::isfinite(v)) ref = std::max(ref, v);
  }
  if (ref == -kInf) ref = 0.0;
  const ScalarFunction g = [&h, ref](double x) { return exp_shifted(h(x), ref); };
  QuadratureResult r;
  try {
    r = integrate_adaptive_ex(g, w.t1, w.t2, spec);
  } catch (const NumericalError& e) {
    std::ostringstream msg;
    msg << what << ": integral diverges or failed to converge near " << endpoint_name(w, h) << " ("
        << e.what() << ")";
    throw DivergenceError(msg.str(), e.best_estimate(), e.error_bound());
  }
  if (!(r.value > 0.0)) {
    std::ostringstream msg;
    msg << what << ": integral is zero on (" << w.t1 << ", " << w.t2 << ")";
    throw DivergenceError(msg.str());
  }
  return LogIntegral{ref + std::log(r.value), r.error / r.value};
}

// Tail checks for the heavy-tailed families on unbounded windows; the
// integrand behaves like x^{-k} at infinity and needs k > 1.
void check_tail(const DistributionModel& m, Window w, double power, bool weighted,
                std::string_view what) {
  if (!std::isinf(w.t2)) return;
  double decay = kInf;
  if (m.family() == Family::pareto1) {
    // x f ~ x^{-b}, f ~ x^{-(b+1)}
    decay = power * (weighted ? m.param(1) : m.param(1) + 1.0);
  } else if (m.family() == Family::gpd && m.param(0) > 1e-8) {
    const double theta = m.param(0);
    decay = power * (weighted ? 1.0 / theta : 1.0 / theta + 1.0);
  }
  if (decay <= 1.0) {
    std::ostringstream msg;
    msg << what << ": integral diverges at upper endpoint t2 = inf for " << m.describe()
        << " (tail decays like x^-" << decay << ")";
    throw DivergenceError(msg.str());
  }
}

// t2^k - t1^k for 0 <= t1 < t2, k != 0, without cancellation when the two
// are close. t2 may be infinite when k < 0.
double pow_difference_over_k(double t1, double t2, double k) {
  if (std::isinf(t2)) return -std::pow(t1, k) / k;
  if (t1 == 0.0) return std::pow(t2, k) / k;
  return std::pow(t1, k) * std::expm1(k * std::log(t2 / t1)) / k;
}

double log_pow_difference_over_k(double t1, double t2, double k) {
  if (std::isinf(t2)) return k * std::log(t1) - std::log(-k);
  if (t1 == 0.0) return k * std::log(t2) - std::log(k);
  return k * std::log(t1) + std::log(std::expm1(k * std::log(t2 / t1)) / k);
}

Window clip_to_support(const DistributionModel& m, Window w) {
  const Support s = m.support();
  return Window{std::max(w.t1, s.lo), std::min(w.t2, s.hi)};
}

}  // namespace

EntropyOrder::EntropyOrder(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError("entropy order: alpha and beta must be finite");
  }
  if (!(beta >= 1.0)) throw DomainError("entropy order: need beta >= 1");
  if (!(alpha < beta)) throw DomainError("entropy order: need alpha < beta (alpha == beta is excluded)");
  if (!(alpha > beta - 1.0)) throw DomainError("entropy order: need alpha > beta - 1");
}

int EntropyOrder::regime() const noexcept {
  const double d = alpha_ + beta_ - 2.0;
  if (std::abs(d) <= 1e-12) return 0;
  return d > 0.0 ? 1 : -1;
}

std::string_view to_string(EntropyMethod m) {
  return m == EntropyMethod::closed_form ? "closed_form" : "quadrature";
}

QuadratureSpec entropy_quadrature() {
  QuadratureSpec spec;
  spec.abs_tol = 1e-300;
  spec.rel_tol = 1e-12;
  return spec;
}

namespace {

QuadratureSpec signed_quadrature() {
  QuadratureSpec spec;
  spec.abs_tol = 1e-13;
  spec.rel_tol = 1e-11;
  return spec;
}

LogIntegral log_weighted_integral_quadrature(const DistributionModel& m, Window w, double power,
                                             const QuadratureSpec& spec, std::string_view what) {
  validate_window(m, w);
  w = clip_to_support(m, w);
  check_tail(m, w, power, true, what);
  const double lz = log_mass(m, w);
  const ScalarFunction h = [&m, lz, power](double x) {
    const double lf = log_pdf(m, x);
    if (lf == -kInf || x <= 0.0) return -kInf;
    return power * (std::log(x) + lf - lz);
  };
  return log_integral(h, w, spec, what);
}

}  // namespace

std::optional<EntropyValue> closed_form_wgie(const DistributionModel& m, Window w,
                                             const EntropyOrder& ord) {
  validate_window(m, w);
  w = clip_to_support(m, w);
  const auto p = m.params();
  const double e = ord.exponent();
  const double s = e + 1.0;
  double log_i = 0.0;

  switch (m.family()) {
    case Family::uniform: {
      log_i = log_pow_difference_over_k(w.t1, w.t2, s) - e * std::log(w.width());
      break;
    }
    case Family::exponential: {
      const double theta = p[0];
      const double log_z = std::isinf(w.t2)
                               ? -theta * w.t1
                               : -theta * w.t1 + std::log(-std::expm1(-theta * w.width()));
      log_i = log_incomplete_gamma_between(s, theta * e * w.t1, theta * e * w.t2) -
              std::log(theta) - s * std::log(e) - e * log_z;
      break;
    }
    case Family::power: {
      const double a = p[0];
      const double b = p[1];
      const double k = b * e + 1.0;
      const double log_z = b * std::log(1.0 / a) + log_pow_difference_over_k(w.t1, w.t2, b) +
                           std::log(b);
      log_i = e * std::log(b) - b * e * std::log(a) + log_pow_difference_over_k(w.t1, w.t2, k) -
              e * log_z;
      break;
    }
    case Family::beta1: {
      // Weighted form: int (c x^c)^e dx = c^e (t2^{ce+1} - t1^{ce+1}) / (ce + 1).
      const double c = p[0];
      const double k = c * e + 1.0;
      const double log_z = log_pow_difference_over_k(w.t1, w.t2, c) + std::log(c);
      log_i = e * std::log(c) + log_pow_difference_over_k(w.t1, w.t2, k) - e * log_z;
      break;
    }
    case Family::pareto1: {
      const double a = p[0];
      const double b = p[1];
      const double k = 1.0 - b * e;
      if (std::abs(k) < kSingularDenominator) return std::nullopt;
      if (std::isinf(w.t2) && k > 0.0) return std::nullopt;
      // (a/t1)^b - (a/t2)^b = a^b (t1^{-b} - t2^{-b}).
      const double log_z = b * std::log(a) + log_pow_difference_over_k(w.t1, w.t2, -b) +
                           std::log(b);
      const double ratio = pow_difference_over_k(w.t1, w.t2, k);
      if (!(ratio > 0.0)) return std::nullopt;
      log_i = e * (std::log(b) + b * std::log(a)) + std::log(ratio) - e * log_z;
      break;
    }
    case Family::gamma: {
      // Rate b throughout: (x f / Z)^e = b^{ne} x^{ne} e^{-b e x} / dgamma(n)^e.
      const double n = p[0];
      const double b = p[1];
      const double k = n * e + 1.0;
      log_i = n * e * std::log(b) - k * std::log(b * e) +
              log_incomplete_gamma_between(k, b * e * w.t1, b * e * w.t2) -
              e * log_incomplete_gamma_between(n, b * w.t1, b * w.t2);
      break;
    }
    default:
      return std::nullopt;
  }
  if (!std::isfinite(log_i)) return std::nullopt;
  return EntropyValue{log_i / ord.spread(), EntropyMethod::closed_form, 0.0};
}

EntropyValue wgie_quadrature(const DistributionModel& m, Window w, const EntropyOrder& ord,
                             const QuadratureSpec& spec) {
  const LogIntegral li = log_weighted_integral_quadrature(m, w, ord.exponent(), spec, "wgie");
  return EntropyValue{li.log_value / ord.spread(), EntropyMethod::quadrature,
                      li.rel_error / ord.spread()};
}

EntropyValue wgie(const DistributionModel& m, Window w, const EntropyOrder& ord) {
  validate_window(m, w);
  check_tail(m, clip_to_support(m, w), ord.exponent(), true, "wgie");
  if (auto cf = closed_form_wgie(m, w, ord)) return *cf;
  return wgie_quadrature(m, w, ord);
}

double log_wgie_integral(const DistributionModel& m, Window w, const EntropyOrder& ord) {
  return wgie(m, w, ord).value * ord.spread();
}

EntropyValue weighted_generalized_entropy(const DistributionModel& m, const EntropyOrder& ord) {
  return wgie(m, full_window(m), ord);
}

EntropyValue generalized_entropy(const DistributionModel& m, const EntropyOrder& ord) {
  const Window w = full_window(m);
  const double power = ord.exponent();
  check_tail(m, w, power, false, "generalized_entropy");
  const ScalarFunction h = [&m, power](double x) {
    const double lf = log_pdf(m, x);
    return lf == -kInf ? -kInf : power * lf;
  };
  const LogIntegral li = log_integral(h, w, entropy_quadrature(), "generalized_entropy");
  return EntropyValue{li.log_value / ord.spread(), EntropyMethod::quadrature,
                      li.rel_error / ord.spread()};
}

namespace {

void check_renyi_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("weighted Renyi: need alpha > 0");
  if (std::abs(alpha - 1.0) < 1e-12) throw DomainError("weighted Renyi: alpha = 1 is excluded");
}

EntropyValue renyi_over(const DistributionModel& m, Window w, double alpha, std::string_view what) {
  check_renyi_alpha(alpha);
  const LogIntegral li =
      log_weighted_integral_quadrature(m, w, alpha, entropy_quadrature(), what);
  const double scale = 1.0 / (1.0 - alpha);
  return EntropyValue{scale * li.log_value, EntropyMethod::quadrature,
                      std::abs(scale) * li.rel_error};
}

}  // namespace

EntropyValue weighted_renyi(const DistributionModel& m, double alpha) {
  return renyi_over(m, full_window(m), alpha, "weighted_renyi");
}

EntropyValue weighted_residual_renyi(const DistributionModel& m, double t, double alpha) {
  const Support s = m.support();
  if (!(t >= s.lo && t < s.hi)) throw DomainError("weighted_residual_renyi: t must lie in the support");
  return renyi_over(m, Window{std::max(0.0, t), s.hi}, alpha, "weighted_residual_renyi");
}

EntropyValue weighted_past_renyi(const DistributionModel& m, double t, double alpha) {
  const Support s = m.support();
  if (!(t > s.lo)) throw DomainError("weighted_past_renyi: t must exceed the support's lower end");
  return renyi_over(m, Window{std::max(0.0, s.lo), std::min(t, s.hi)}, alpha, "weighted_past_renyi");
}

namespace {

double signed_integral(const ScalarFunction& g, Window w, std::string_view what) {
  try {
    return integrate_adaptive(g, w.t1, w.t2, signed_quadrature());
  } catch (const NumericalError& e) {
    std::ostringstream msg;
    msg << what << ": integral failed on (" << w.t1 << ", " << w.t2 << "): " << e.what();
    throw DivergenceError(msg.str(), e.best_estimate(), e.error_bound());
  }
}

}  // namespace

double interval_shannon(const DistributionModel& m, Window w) {
  validate_window(m, w);
  w = clip_to_support(m, w);
  const double lz = log_mass(m, w);
  const ScalarFunction g = [&m, lz](double x) {
    const double lf = log_pdf(m, x);
    if (lf == -kInf) return 0.0;
    const double l = lf - lz;
    return -std::exp(l) * l;
  };
  return signed_integral(g, w, "interval_shannon");
}

double weighted_interval_entropy(const DistributionModel& m, Window w) {
  w.validate();
  if (w.width() <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, w.t1)) {
    return -kInf;
  }
  validate_window(m, w);
  w = clip_to_support(m, w);
  const double lz = log_mass(m, w);
  const ScalarFunction g = [&m, lz](double x) {
    const double lf = log_pdf(m, x);
    if (lf == -kInf) return 0.0;
    const double l = lf - lz;
    return -x * std::exp(l) * l;
  };
  return signed_integral(g, w, "weighted_interval_entropy");
}

double conditional_moment(const DistributionModel& m, Window w, double power) {
  validate_window(m, w);
  w = clip_to_support(m, w);
  check_tail(m, w, 1.0, false, "conditional_moment");
  const double lz = log_mass(m, w);
  const ScalarFunction h = [&m, lz, power](double x) {
    const double lf = log_pdf(m, x);
    if (lf == -kInf || x <= 0.0) return -kInf;
    return power * std::log(x) + lf - lz;
  };
  return std::exp(log_integral(h, w, entropy_quadrature(), "conditional_moment").log_value);
}

double conditional_log_mean(const DistributionModel& m, Window w) {
  validate_window(m, w);
  w = clip_to_support(m, w);
  const double lz = log_mass(m, w);
  const ScalarFunction g = [&m, lz](double x) {
    const double lf = log_pdf(m, x);
    if (lf == -kInf) return 0.0;
    return std::exp(lf - lz) * std::log(x);
  };
  return signed_integral(g, w, "conditional_log_mean");
}

}  // namespace wgie
