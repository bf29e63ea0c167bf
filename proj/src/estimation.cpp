#include "wgie/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "wgie/errors.hpp"

namespace wgie {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGradientTolerance = 1e-6;

double sum_of(std::span<const double> xs, const std::function<double(double)>& g) {
  CompensatedSum acc;
  for (double x : xs) acc.add(g(x));
  return acc.value();
}

void require_size(const Sample& s, std::size_t n, std::string_view what) {
  if (s.size() < n) {
    std::ostringstream msg;
    msg << what << ": needs at least " << n << " observations, got " << s.size();
    throw InsufficientDataError(msg.str());
  }
}

// Gradient of the mean log-likelihood with respect to log-parameters, by
// central differences.
bool gradient_small(const std::function<double(std::span<const double>)>& loglik,
                    std::vector<double> params, std::size_t n) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double p = params[i];
    constexpr double h = 1e-5;
    params[i] = p * std::exp(h);
    const double up = loglik(params);
    params[i] = p * std::exp(-h);
    const double down = loglik(params);
    params[i] = p;
    const double g = (up - down) / (2.0 * h * static_cast<double>(n));
    if (!(std::abs(g) < kGradientTolerance)) return false;
  }
  return true;
}

struct ProfileSearch {
  double argmax;
  int evaluations;
  bool interior;
};

// Maximizes a unimodal profile over log(x) in [log lo, log hi].
ProfileSearch maximize_log_scale(const std::function<double(double)>& profile, double lo,
                                 double hi) {
  int evaluations = 0;
  const ScalarFunction neg = [&](double u) {
    ++evaluations;
    const double v = profile(std::exp(u));
    return std::isfinite(v) ? -v : kInf;
  };
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  const double u = minimize_scalar(neg, RootBracket{llo, lhi}, 1e-12);
  const double edge = 1e-6 * (lhi - llo);
  return ProfileSearch{std::exp(u), evaluations, u - llo > edge && lhi - u > edge};
}

double sample_variance(const Sample& s) {
  const double m = s.mean();
  const double ss = sum_of(s.values(), [m](double x) { return (x - m) * (x - m); });
  return ss / static_cast<double>(s.size() - 1);
}

}  // namespace

Sample::Sample(std::vector<double> values, std::string name)
    : values_(std::move(values)), name_(std::move(name)) {
  if (values_.empty()) throw InsufficientDataError("sample '" + name_ + "' is empty");
  for (double x : values_) {
    if (!std::isfinite(x) || !(x > 0.0)) {
      std::ostringstream msg;
      msg << "sample '" << name_ << "': values must be finite and > 0, got " << x;
      throw DomainError(msg.str());
    }
  }
}

double Sample::mean() const {
  return sum_of(values_, [](double x) { return x; }) / static_cast<double>(values_.size());
}

double log_likelihood(const DistributionModel& m, std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) {
    const double lf = log_pdf(m, x);
    if (lf == -kInf) return -kInf;
    acc.add(lf);
  }
  return acc.value();
}

FitResult fit_exponential(const Sample& s) {
  const auto model = DistributionModel::exponential(1.0 / s.mean());
  return FitResult{model, log_likelihood(model, s.values()), true, 0};
}

namespace {

std::vector<double> in_window(const Sample& s, Window w) {
  std::vector<double> kept;
  for (double x : s.values()) {
    if (x > w.t1 && x <= w.t2) kept.push_back(x);
  }
  return kept;
}

// log(e^{-theta t1} - e^{-theta t2})
double log_window_mass(double theta, Window w) {
  if (std::isinf(w.t2)) return -theta * w.t1;
  return -theta * w.t1 + std::log(-std::expm1(-theta * w.width()));
}

double truncated_loglik(std::span<const double> xs, double sum, Window w, double theta) {
  const double n = static_cast<double>(xs.size());
  return n * (std::log(theta) - log_window_mass(theta, w)) - theta * sum;
}

}  // namespace

double truncated_exponential_loglik(const Sample& s, Window w, double theta) {
  const auto kept = in_window(s, w);
  return truncated_loglik(kept, sum_of(kept, [](double x) { return x; }), w, theta);
}

FitResult fit_doubly_truncated_exponential(const Sample& s, Window w) {
  w.validate();
  const auto kept = in_window(s, w);
  if (kept.size() < 2) {
    std::ostringstream msg;
    msg << "truncated exponential fit: " << kept.size() << " observation(s) in (" << w.t1 << ", "
        << w.t2 << "], need at least 2";
    throw InsufficientDataError(msg.str());
  }
  const double sum = sum_of(kept, [](double x) { return x; });
  const double mean = sum / static_cast<double>(kept.size());
  // theta is searched on scales set by the distance of the mean from t1.
  const double scale = mean - w.t1;
  if (!(scale > 0.0)) throw DomainError("truncated exponential fit: mean not above t1");
  const double lo = 1e-8 / scale;
  const double hi = 1e8 / scale;
  const auto search = maximize_log_scale(
      [&](double theta) { return truncated_loglik(kept, sum, w, theta); }, lo, hi);
  const double theta = search.argmax;
  const auto loglik = [&](std::span<const double> p) {
    return truncated_loglik(kept, sum, w, p[0]);
  };
  const bool converged = search.interior && gradient_small(loglik, {theta}, kept.size());
  return FitResult{DistributionModel::exponential(theta), truncated_loglik(kept, sum, w, theta),
                   converged, search.evaluations};
}

FitResult fit_gamma(const Sample& s) {
  require_size(s, 3, "gamma fit");
  const double n = static_cast<double>(s.size());
  const double mean = s.mean();
  const double mean_log = sum_of(s.values(), [](double x) { return std::log(x); }) / n;
  // With rate = a / mean the log-likelihood is n[a log(a/mean) - lgamma(a) + (a-1) mean_log - a].
  const auto profile = [&](double a) {
    return n * (a * std::log(a / mean) - std::lgamma(a) + (a - 1.0) * mean_log - a);
  };
  const double a0 = mean * mean / sample_variance(s);
  const auto search = maximize_log_scale(profile, a0 / 1000.0, a0 * 1000.0);
  const double a = search.argmax;
  const auto model = DistributionModel::gamma(a, a / mean);
  const auto loglik = [&](std::span<const double> p) {
    return log_likelihood(DistributionModel::gamma(p[0], p[1]), s.values());
  };
  const bool converged = search.interior && gradient_small(loglik, {a, a / mean}, s.size());
  return FitResult{model, log_likelihood(model, s.values()), converged, search.evaluations};
}

FitResult fit_weibull(const Sample& s) {
  require_size(s, 3, "weibull fit");
  const double n = static_cast<double>(s.size());
  const double sum_log = sum_of(s.values(), [](double x) { return std::log(x); });
  // Rate^a = n / sum x^a.
  const auto rate_for = [&](double a) {
    const double m = sum_of(s.values(), [a](double x) { return std::pow(x, a); }) / n;
    return std::pow(m, -1.0 / a);
  };
  const auto profile = [&](double a) {
    const double lam = rate_for(a);
    return n * std::log(a) + n * a * std::log(lam) + (a - 1.0) * sum_log - n;
  };
  // Shape from the coefficient of variation, cv ~ a^{-0.94} over the usual range.
  const double cv = std::sqrt(sample_variance(s)) / s.mean();
  const double a0 = std::pow(cv, -1.0 / 0.94);
  const auto search = maximize_log_scale(profile, a0 / 1000.0, a0 * 1000.0);
  const double a = search.argmax;
  const auto model = DistributionModel::weibull(a, rate_for(a));
  const auto loglik = [&](std::span<const double> p) {
    return log_likelihood(DistributionModel::weibull(p[0], p[1]), s.values());
  };
  const bool converged = search.interior && gradient_small(loglik, {a, rate_for(a)}, s.size());
  return FitResult{model, log_likelihood(model, s.values()), converged, search.evaluations};
}

FitResult fit_ee(const Sample& s) {
  require_size(s, 3, "exponentiated exponential fit");
  const double n = static_cast<double>(s.size());
  const double sum = sum_of(s.values(), [](double x) { return x; });
  const auto sum_log1m = [&](double lam) {
    return sum_of(s.values(), [lam](double x) { return std::log(-std::expm1(-lam * x)); });
  };
  // Shape = -n / sum log(1 - e^{-lam x}).
  const auto shape_for = [&](double lam) { return -n / sum_log1m(lam); };
  const auto profile = [&](double lam) {
    const double t = sum_log1m(lam);
    const double a = -n / t;
    return n * std::log(a) + n * std::log(lam) + (a - 1.0) * t - lam * sum;
  };
  const double lam0 = 1.0 / s.mean();
  const auto search = maximize_log_scale(profile, lam0 / 1000.0, lam0 * 1000.0);
  const double lam = search.argmax;
  const double a = shape_for(lam);
  const auto model = DistributionModel::exp_exponential(a, lam);
  const auto loglik = [&](std::span<const double> p) {
    return log_likelihood(DistributionModel::exp_exponential(p[0], p[1]), s.values());
  };
  const bool converged = search.interior && gradient_small(loglik, {a, lam}, s.size());
  return FitResult{model, log_likelihood(model, s.values()), converged, search.evaluations};
}

FitResult fit_family(const Sample& s, Family family) {
  switch (family) {
    case Family::exponential: return fit_exponential(s);
    case Family::gamma: return fit_gamma(s);
    case Family::weibull: return fit_weibull(s);
    case Family::exp_exponential: return fit_ee(s);
    default:
      throw DomainError("fit: no maximum-likelihood fitter for family '" +
                        std::string(family_name(family)) + "'");
  }
}

double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // P(K <= l) = sqrt(2 pi)/l sum exp(-(2k-1)^2 pi^2 / (8 l^2))
    constexpr double pi = 3.14159265358979323846;
    const double c = -pi * pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double j = 2.0 * k - 1.0;
      cdf += std::exp(c * j * j);
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

KsResult ks_test(const Sample& s, const DistributionModel& model) {
  std::vector<double> xs(s.values().begin(), s.values().end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(model, xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  d = std::clamp(d, 0.0, 1.0);
  return KsResult{d, kolmogorov_sf(std::sqrt(n) * d)};
}

std::string_view to_string(EstimationProtocol p) {
  return p == EstimationProtocol::truncated ? "truncated" : "full_sample";
}

double estimate_wgie(const Sample& s, Family family, Window w, const EntropyOrder& ord,
                     EstimationProtocol protocol) {
  if (protocol == EstimationProtocol::truncated) {
    if (family != Family::exponential) {
      throw DomainError("estimate_wgie: the truncated protocol supports the exponential family only");
    }
    return wgie(fit_doubly_truncated_exponential(s, w).model, w, ord).value;
  }
  return wgie(fit_family(s, family).model, w, ord).value;
}

}  // namespace wgie
