#pragma once

#include <functional>
#include <vector>

namespace wgie {

using ScalarFunction = std::function<double(double)>;

/// Accuracy targets for integrate_adaptive. The routine stops once the
/// summed error estimate is below max(abs_tol, rel_tol * |I|).
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  /// Maximum number of bisections applied to any one subinterval.
  int max_depth = 200;
  /// Hard cap on the number of live subintervals.
  int max_intervals = 20000;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature of f over (a, b).
///
/// The rule never evaluates f at the endpoints, so integrable endpoint
/// singularities are fine. b may be +infinity, in which case the integral is
/// mapped onto (0, 1) with x = a + t / (1 - t).
///
/// Throws NumericalError (carrying the best estimate and its error bound) if
/// the tolerance cannot be met within spec.max_depth, and NumericalError
/// naming the abscissa if f returns NaN.
QuadratureResult integrate_adaptive_ex(const ScalarFunction& f, double a, double b,
                                       const QuadratureSpec& spec = {});

inline double integrate_adaptive(const ScalarFunction& f, double a, double b,
                                 const QuadratureSpec& spec = {}) {
  return integrate_adaptive_ex(f, a, b, spec).value;
}

// Incomplete gamma functions. Series below x < s + 1, Lentz continued
// fraction above; all of them throw DomainError for s <= 0 or x < 0.

/// gamma(s, x) = int_0^x t^{s-1} e^{-t} dt.
double lower_incomplete_gamma(double s, double x);
/// Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt.
double upper_incomplete_gamma(double s, double x);
/// log gamma(s, x); stays finite where gamma(s, x) itself underflows.
double log_lower_incomplete_gamma(double s, double x);
double log_upper_incomplete_gamma(double s, double x);
/// Regularized P(s, x) = gamma(s, x) / Gamma(s) and its complement Q.
double gamma_p(double s, double x);
double gamma_q(double s, double x);
/// log int_{x1}^{x2} t^{s-1} e^{-t} dt for 0 <= x1 < x2 <= inf, evaluated from
/// whichever tail avoids cancellation.
double log_incomplete_gamma_between(double s, double x1, double x2);

struct RootBracket {
  double lo;
  double hi;

  void validate() const;
};

/// All sign-change roots of f on the bracket, ascending.
///
/// The bracket is probed at n_probe points (geometrically spaced when it spans
/// more than two decades and lo > 0) and every sign change is bisected to
/// 1e-12 relative width. Roots where f touches zero without changing sign are
/// only found if a probe lands on them exactly.
std::vector<double> find_roots(const ScalarFunction& f, RootBracket bracket, int n_probe = 64);

/// Single root of f in a bracket known to contain a sign change.
double bisect_root(const ScalarFunction& f, double lo, double hi, double rel_tol = 1e-12);

/// Brent's golden-section / parabolic minimizer. f must be unimodal on the
/// bracket; the returned abscissa is located to x_tol.
double minimize_scalar(const ScalarFunction& f, RootBracket bracket, double x_tol = 1e-10);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace wgie
