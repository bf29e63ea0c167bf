#pragma once

#include <span>
#include <string>
#include <vector>

#include "wgie/distributions.hpp"
#include "wgie/entropy.hpp"

namespace wgie {

/// Positive lifetimes. The constructor rejects empty input and any value
/// that is not finite and > 0.
class Sample {
 public:
  Sample(std::vector<double> values, std::string name = "sample");

  std::span<const double> values() const noexcept { return values_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return values_.size(); }
  double mean() const;

 private:
  std::vector<double> values_;
  std::string name_;
};

struct FitResult {
  DistributionModel model;
  double loglik;
  /// Every log-parameter gradient component of the per-observation
  /// log-likelihood is below 1e-6 in magnitude and the optimum is interior to the search range.
  bool converged;
  int iterations;
};

struct KsResult {
  double statistic;
  double p_value;
};

/// sum log f(x_i); -inf if any observation is outside the support.
double log_likelihood(const DistributionModel& model, std::span<const double> xs);

FitResult fit_exponential(const Sample& s);

/// MLE of theta for observations with t1 < x <= t2 under the exponential law
/// truncated to (t1, t2). InsufficientDataError when fewer than 2 remain.
/// The truncated mean is monotone in theta, so a sample mean at or above
/// the window midpoint has no interior maximum; the fit then reports
/// converged = false at the smallest theta searched.
FitResult fit_doubly_truncated_exponential(const Sample& s, Window w);
/// Truncated log-likelihood of the retained observations at theta.
double truncated_exponential_loglik(const Sample& s, Window w, double theta);

/// Two-parameter MLEs by profile likelihood, n >= 3. Rate is profiled out in
/// closed form (gamma, Weibull) or the shape is (EE); the remaining parameter
/// is searched on a log scale around its moment estimate.
FitResult fit_gamma(const Sample& s);
FitResult fit_weibull(const Sample& s);
FitResult fit_ee(const Sample& s);

/// Dispatch for exponential, gamma, weibull and exp_exponential.
FitResult fit_family(const Sample& s, Family family);

/// Survival of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_sf(double lambda);

/// Both-sided sup distance at the jump points, p-value from the asymptotic
/// Kolmogorov law at sqrt(n) D (parameters treated as known).
KsResult ks_test(const Sample& s, const DistributionModel& model);

enum class EstimationProtocol {
  /// Truncated-likelihood MLE from the observations inside the window.
  truncated,
  /// Untruncated MLE from every observation, reused for each window.
  full_sample,
};
std::string_view to_string(EstimationProtocol p);

/// Plug-in estimate: fit, then wgie at the fitted model. The truncated
/// protocol is available for the exponential family only.
double estimate_wgie(const Sample& s, Family family, Window w, const EntropyOrder& ord,
                     EstimationProtocol protocol);

}  // namespace wgie
