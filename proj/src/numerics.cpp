#include "wgie/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "wgie/errors.hpp"

namespace wgie {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

// 21-point Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208292626628, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  int depth;
};

struct ByError {
  bool operator()(const Segment& l, const Segment& r) const { return l.error < r.error; }
};

double checked_eval(const ScalarFunction& f, double x, double reported_x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "integrand returned " << y << " at x = " << reported_x;
    throw NumericalError(msg.str());
  }
  return y;
}

// One QUADPACK-style qk21 application. `to_user` maps the working variable
// back to the caller's abscissa for error messages.
template <class Map>
Segment gauss_kronrod_21(const ScalarFunction& g, double a, double b, int depth, Map to_user) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  std::array<double, 10> f_left{};
  std::array<double, 10> f_right{};
  const double f_centre = checked_eval(g, centre, to_user(centre));
  double res_gauss = 0.0;
  double res_kronrod = kWgk[10] * f_centre;
  double res_abs = std::abs(res_kronrod);

  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = checked_eval(g, centre - dx, to_user(centre - dx));
    const double f2 = checked_eval(g, centre + dx, to_user(centre + dx));
    f_left[j] = f1;
    f_right[j] = f2;
    const double sum = f1 + f2;
    res_kronrod += kWgk[j] * sum;
    res_abs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) res_gauss += kWg[j / 2] * sum;
  }

  const double mean = 0.5 * res_kronrod;
  double res_asc = kWgk[10] * std::abs(f_centre - mean);
  for (std::size_t j = 0; j < 10; ++j) {
    res_asc += kWgk[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
  }

  const double value = res_kronrod * half;
  res_abs *= abs_half;
  res_asc *= abs_half;
  double error = std::abs((res_kronrod - res_gauss) * half);
  if (res_asc != 0.0 && error != 0.0) {
    error = res_asc * std::min(1.0, std::pow(200.0 * error / res_asc, 1.5));
  }
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    error = std::max(50.0 * kEps * res_abs, error);
  }
  return Segment{a, b, value, error, depth};
}

template <class Map>
QuadratureResult adapt(const ScalarFunction& g, double a, double b, const QuadratureSpec& spec,
                       Map to_user) {
  std::priority_queue<Segment, std::vector<Segment>, ByError> live;
  std::vector<Segment> frozen;
  int evaluations = 21;
  live.push(gauss_kronrod_21(g, a, b, 0, to_user));

  auto totals = [&] {
    CompensatedSum value;
    CompensatedSum error;
    auto copy = live;
    while (!copy.empty()) {
      value.add(copy.top().value);
      error.add(copy.top().error);
      copy.pop();
    }
    for (const auto& s : frozen) {
      value.add(s.value);
      error.add(s.error);
    }
    return std::pair{value.value(), error.value()};
  };

  double value = live.top().value;
  double error = live.top().error;
  while (true) {
    if (error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
      // Incremental bookkeeping drifts; confirm with a fresh sum.
      auto [v, e] = totals();
      value = v;
      error = e;
      if (error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) break;
    }
    if (live.empty() || static_cast<int>(live.size() + frozen.size()) >= spec.max_intervals) {
      auto [v, e] = totals();
      std::ostringstream msg;
      msg << "quadrature did not converge on (" << to_user(a) << ", " << to_user(b)
          << "): estimate " << v << ", error bound " << e;
      throw NumericalError(msg.str(), v, e);
    }
    Segment worst = live.top();
    live.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const bool too_narrow = !(mid > worst.a && mid < worst.b) ||
                            (worst.b - worst.a) <= 8.0 * kEps * std::abs(mid);
    if (worst.depth >= spec.max_depth || too_narrow) {
      frozen.push_back(worst);
      continue;
    }
    Segment left = gauss_kronrod_21(g, worst.a, mid, worst.depth + 1, to_user);
    Segment right = gauss_kronrod_21(g, mid, worst.b, worst.depth + 1, to_user);
    evaluations += 42;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    live.push(left);
    live.push(right);
  }
  return QuadratureResult{value, error, evaluations};
}

// Continued fraction for Gamma(s, x) e^{x} x^{-s}; converges for x > s + 1.
double upper_gamma_fraction(double s, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete gamma continued fraction did not converge");
}

// Series for gamma(s, x) e^{x} x^{-s}; converges for all x, fast for x < s + 1.
double lower_gamma_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) return sum;
  }
  throw NumericalError("incomplete gamma series did not converge");
}

void check_gamma_args(double s, double x) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("incomplete gamma: s must be > 0");
  if (!(x >= 0.0)) throw DomainError("incomplete gamma: x must be >= 0");
}

// log(1 - e^{d}) for d <= 0.
double log1m_exp(double d) {
  if (d > -0.6931471805599453) return std::log(-std::expm1(d));
  return std::log1p(-std::exp(d));
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("QuadratureSpec: abs_tol must be > 0");
  if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be > 0");
  if (max_depth < 1) throw DomainError("QuadratureSpec: max_depth must be >= 1");
  if (max_intervals < 2) throw DomainError("QuadratureSpec: max_intervals must be >= 2");
}

QuadratureResult integrate_adaptive_ex(const ScalarFunction& f, double a, double b,
                                       const QuadratureSpec& spec) {
  spec.validate();
  if (std::isnan(a) || std::isnan(b) || !(a < b)) {
    throw DomainError("integrate_adaptive: need a < b");
  }
  if (!std::isfinite(a)) throw DomainError("integrate_adaptive: lower limit must be finite");
  if (std::isfinite(b)) {
    return adapt(f, a, b, spec, [](double x) { return x; });
  }
  const auto to_user = [a](double t) { return a + t / (1.0 - t); };
  const ScalarFunction mapped = [&f, to_user](double t) {
    const double x = to_user(t);
    if (!std::isfinite(x)) return 0.0;
    const double jac = 1.0 / ((1.0 - t) * (1.0 - t));
    const double y = f(x);
    return y == 0.0 ? 0.0 : y * jac;
  };
  return adapt(mapped, 0.0, 1.0, spec, to_user);
}

double log_lower_incomplete_gamma(double s, double x) {
  check_gamma_args(s, x);
  if (x == 0.0) return -kInf;
  if (std::isinf(x)) return std::lgamma(s);
  if (x < s + 1.0) return -x + s * std::log(x) + std::log(lower_gamma_series(s, x));
  const double log_upper = -x + s * std::log(x) + std::log(upper_gamma_fraction(s, x));
  return std::lgamma(s) + log1m_exp(log_upper - std::lgamma(s));
}

double log_upper_incomplete_gamma(double s, double x) {
  check_gamma_args(s, x);
  if (x == 0.0) return std::lgamma(s);
  if (std::isinf(x)) return -kInf;
  if (x >= s + 1.0) return -x + s * std::log(x) + std::log(upper_gamma_fraction(s, x));
  const double log_lower = -x + s * std::log(x) + std::log(lower_gamma_series(s, x));
  return std::lgamma(s) + log1m_exp(log_lower - std::lgamma(s));
}

double lower_incomplete_gamma(double s, double x) { return std::exp(log_lower_incomplete_gamma(s, x)); }

double upper_incomplete_gamma(double s, double x) { return std::exp(log_upper_incomplete_gamma(s, x)); }

double gamma_p(double s, double x) {
  return std::exp(log_lower_incomplete_gamma(s, x) - std::lgamma(s));
}

double gamma_q(double s, double x) {
  return std::exp(log_upper_incomplete_gamma(s, x) - std::lgamma(s));
}

double log_incomplete_gamma_between(double s, double x1, double x2) {
  check_gamma_args(s, x1);
  if (!(x2 > x1)) throw DomainError("log_incomplete_gamma_between: need x1 < x2");
  if (x1 > 0.0 && std::isfinite(x2) && (x2 - x1) <= 0.25 * x1) {
    // Narrow band: both tail forms cancel; integrate the scaled integrand.
    const double ref = std::max((s - 1.0) * std::log(x1) - x1, (s - 1.0) * std::log(x2) - x2);
    const ScalarFunction g = [s, ref](double t) { return std::exp((s - 1.0) * std::log(t) - t - ref); };
    QuadratureSpec spec;
    spec.abs_tol = 1e-300;
    spec.rel_tol = 1e-13;  // the Kronrod roundoff floor is 50 eps per segment
    return ref + std::log(integrate_adaptive(g, x1, x2, spec));
  }
  if (x2 <= s) {
    const double l2 = log_lower_incomplete_gamma(s, x2);
    if (x1 == 0.0) return l2;
    return l2 + log1m_exp(log_lower_incomplete_gamma(s, x1) - l2);
  }
  if (x1 >= s) {
    const double u1 = log_upper_incomplete_gamma(s, x1);
    if (std::isinf(x2)) return u1;
    return u1 + log1m_exp(log_upper_incomplete_gamma(s, x2) - u1);
  }
  // x1 < s < x2: both tails are accurate, the middle is Gamma(s)(1 - P1 - Q2).
  const double p1 = x1 == 0.0 ? 0.0 : gamma_p(s, x1);
  const double q2 = std::isinf(x2) ? 0.0 : gamma_q(s, x2);
  return std::lgamma(s) + std::log1p(-(p1 + q2));
}

void RootBracket::validate() const {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    throw DomainError("RootBracket: need lo < hi");
  }
}

double bisect_root(const ScalarFunction& f, double lo, double hi, double rel_tol) {
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) throw DomainError("bisect_root: no sign change in bracket");
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
}

std::vector<double> find_roots(const ScalarFunction& f, RootBracket bracket, int n_probe) {
  bracket.validate();
  if (n_probe < 2) throw DomainError("find_roots: n_probe must be >= 2");
  const bool geometric = bracket.lo > 0.0 && bracket.hi / bracket.lo > 100.0;
  std::vector<double> xs(static_cast<std::size_t>(n_probe));
  for (int i = 0; i < n_probe; ++i) {
    const double u = static_cast<double>(i) / (n_probe - 1);
    xs[i] = geometric ? bracket.lo * std::pow(bracket.hi / bracket.lo, u)
                      : bracket.lo + u * (bracket.hi - bracket.lo);
  }
  xs.front() = bracket.lo;
  xs.back() = bracket.hi;

  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = f(xs[i]);

  std::vector<double> roots;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (fs[i] == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    if (i + 1 < xs.size() && fs[i + 1] != 0.0 && std::isfinite(fs[i]) && std::isfinite(fs[i + 1]) &&
        (fs[i] > 0.0) != (fs[i + 1] > 0.0)) {
      roots.push_back(bisect_root(f, xs[i], xs[i + 1]));
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double minimize_scalar(const ScalarFunction& f, RootBracket bracket, double x_tol) {
  bracket.validate();
  if (!std::isfinite(bracket.lo) || !std::isfinite(bracket.hi)) {
    throw DomainError("minimize_scalar: bracket must be finite");
  }
  constexpr double golden = 0.3819660112501051;
  double a = bracket.lo;
  double b = bracket.hi;
  double x = a + golden * (b - a);
  double w = x;
  double v = x;
  double fx = f(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;

  for (int it = 0; it < 1000; ++it) {
    const double mid = 0.5 * (a + b);
    const double tol1 = 0.25 * x_tol + 2.0 * kEps * std::abs(x);
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) break;

    bool golden_step = true;
    if (std::abs(e) > tol1) {
      // Parabola through (v, fv), (w, fw), (x, fx).
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = mid > x ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x >= mid) ? a - x : b - x;
      d = golden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return x;
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace wgie
