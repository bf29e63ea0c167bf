#pragma once

#include <optional>
#include <string_view>

#include "wgie/distributions.hpp"
#include "wgie/numerics.hpp"

namespace wgie {

/// Order (alpha, beta) of the generalized entropy: beta >= 1 and
/// beta - 1 < alpha < beta. beta == 1 is the Renyi case.
class EntropyOrder {
 public:
  /// Throws DomainError naming the violated constraint.
  EntropyOrder(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  /// alpha + beta - 1, the power applied to the (weighted) density; always > 0.
  double exponent() const noexcept { return alpha_ + beta_ - 1.0; }
  /// beta - alpha, the inverse of the prefactor; always in (0, 1].
  double spread() const noexcept { return beta_ - alpha_; }
  /// sign(alpha + beta - 2): -1, 0 or +1. The boundary uses a 1e-12 band.
  int regime() const noexcept;

 private:
  double alpha_;
  double beta_;
};

enum class EntropyMethod { closed_form, quadrature };
std::string_view to_string(EntropyMethod m);

struct EntropyValue {
  double value;
  EntropyMethod method;
  /// Propagated quadrature error bound (0 for closed forms).
  double est_error;
};

/// Quadrature settings used for positive integrands (relative accuracy).
QuadratureSpec entropy_quadrature();

/// Weighted generalized interval entropy
///   (1/(beta-alpha)) log int_{t1}^{t2} (x f(x) / (F(t2)-F(t1)))^{alpha+beta-1} dx.
/// Uses the closed form when one exists, quadrature otherwise. Throws
/// DivergenceError when the integral does not exist.
EntropyValue wgie(const DistributionModel& model, Window w, const EntropyOrder& ord);

/// Same quantity by quadrature only, regardless of family.
EntropyValue wgie_quadrature(const DistributionModel& model, Window w, const EntropyOrder& ord,
                             const QuadratureSpec& spec = entropy_quadrature());

/// Tabulated closed forms (uniform, exponential, power, beta, Pareto I, gamma).
/// Empty for other families, for windows the closed form cannot represent,
/// and where a formula denominator is within 1e-8 of zero.
std::optional<EntropyValue> closed_form_wgie(const DistributionModel& model, Window w,
                                             const EntropyOrder& ord);

/// log int_w (x f~(x))^{alpha+beta-1} dx, i.e. (beta - alpha) * wgie.
double log_wgie_integral(const DistributionModel& model, Window w, const EntropyOrder& ord);

/// wgie over the whole support (no truncation).
EntropyValue weighted_generalized_entropy(const DistributionModel& model, const EntropyOrder& ord);

/// (1/(beta-alpha)) log int f^{alpha+beta-1}, the unweighted measure.
EntropyValue generalized_entropy(const DistributionModel& model, const EntropyOrder& ord);

/// Weighted Renyi entropy (1/(1-alpha)) log int (x f)^alpha, 0 < alpha != 1.
EntropyValue weighted_renyi(const DistributionModel& model, double alpha);
/// Residual form over (t, inf) with f / S(t).
EntropyValue weighted_residual_renyi(const DistributionModel& model, double t, double alpha);
/// Past form over (0, t) with f / F(t).
EntropyValue weighted_past_renyi(const DistributionModel& model, double t, double alpha);

/// -int f~ log f~ over the window.
double interval_shannon(const DistributionModel& model, Window w);

/// -int x f~(x) log f~(x) over the window; the weight multiplies the
/// integrand and is not part of the logarithm. Returns -inf for a window
/// too narrow to resolve (the measure diverges as the window collapses).
double weighted_interval_entropy(const DistributionModel& model, Window w);

/// E[X^p | t1 < X < t2].
double conditional_moment(const DistributionModel& model, Window w, double p);
/// E[log X | t1 < X < t2].
double conditional_log_mean(const DistributionModel& model, Window w);

}  // namespace wgie
