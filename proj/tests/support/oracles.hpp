#pragma once

// Reference computations that share no code with the library: composite
// Gauss-Legendre quadrature on graded panels, and long-double series.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

struct Rule {
  std::vector<long double> x;
  std::vector<long double> w;
};

// n-point Gauss-Legendre on [-1, 1], nodes by Newton iteration on P_n.
inline Rule legendre(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const long double pi = 3.141592653589793238462643383279502884L;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double z = std::cos(pi * (i + 0.75L) / (n + 0.5L));
    long double pp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      long double p1 = 1.0L;
      long double p2 = 0.0L;
      for (int j = 0; j < n; ++j) {
        const long double p3 = p2;
        p2 = p1;
        p1 = ((2.0L * j + 1.0L) * z * p2 - j * p3) / (j + 1.0L);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0L);
      const long double dz = p1 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-19L) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0L / ((1.0L - z * z) * pp * pp);
  }
  return r;
}

inline const Rule& rule20() {
  static const Rule r = legendre(20);
  return r;
}

inline long double panel(const std::function<double(double)>& f, long double a, long double b) {
  const Rule& r = rule20();
  const long double h = 0.5L * (b - a);
  const long double c = 0.5L * (a + b);
  long double s = 0.0L;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    s += r.w[i] * static_cast<long double>(f(static_cast<double>(c + h * r.x[i])));
  }
  return s * h;
}

// Integral over finite (a, b). Panels are graded geometrically toward both
// ends (ratio 0.5 over `levels` levels), so integrable endpoint
// singularities of power type converge.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        int uniform_panels = 64, int levels = 60) {
  const long double A = a;
  const long double B = b;
  const long double q = (B - A) / 4.0L;
  long double s = 0.0L;
  // Graded pieces near each end, each covering [A, A + q] and [B - q, B].
  long double lo = q;
  for (int k = 0; k < levels; ++k) {
    const long double next = lo * 0.5L;
    s += panel(f, A + next, A + lo);
    s += panel(f, B - lo, B - next);
    lo = next;
  }
  s += panel(f, A, A + lo);
  s += panel(f, B - lo, B);
  const long double step = (B - A - 2.0L * q) / uniform_panels;
  for (int k = 0; k < uniform_panels; ++k) {
    s += panel(f, A + q + k * step, A + q + (k + 1) * step);
  }
  return static_cast<double>(s);
}

// Integral over (a, inf) via x = a + scale * t / (1 - t), t in (0, 1).
inline double integrate_to_inf(const std::function<double(double)>& f, double a, double scale) {
  const auto g = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double x = a + scale * t / one_minus;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v * scale / (one_minus * one_minus);
  };
  return integrate(g, 0.0, 1.0, 128, 60);
}

// Regularized lower incomplete gamma P(s, x) by its power series in long double.
inline double gamma_p_series(double s, double x) {
  long double term = 1.0L / s;
  long double sum = term;
  for (int n = 1; n < 100000; ++n) {
    term *= static_cast<long double>(x) / (s + n);
    sum += term;
    if (term < sum * 1e-21L) break;
  }
  const long double log_pref = s * std::log(static_cast<long double>(x)) - x - std::lgamma(s);
  return static_cast<double>(sum * std::exp(log_pref));
}

}  // namespace oracle
