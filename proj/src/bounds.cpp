#include "wgie/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wgie/errors.hpp"

namespace wgie {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDirectionDeadZone = 1e-7;
constexpr double kRootSearchFactor = 50.0;

double H(const DistributionModel& m, Window w, const EntropyOrder& ord) {
  return wgie(m, w, ord).value;
}

bool narrow(Window w) { return !(w.width() > 1e-9 * std::max(1.0, w.t2)); }

BoundReport make_report(TheoremId id, bool hypothesis, double lhs, double rhs, bool lhs_at_least,
                        Window w) {
  const double margin = lhs_at_least ? lhs - rhs : rhs - lhs;
  BoundReport r{};
  r.theorem_id = id;
  r.hypothesis_holds = hypothesis;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = margin;
  r.satisfied = margin >= -kBoundMarginTolerance;
  r.informative = std::isfinite(lhs) && std::isfinite(rhs) && !narrow(w);
  return r;
}

void require_finite_gfr(double h, std::string_view which) {
  if (!std::isfinite(h)) {
    throw NumericalError(std::string(which) + " is not finite at this window");
  }
}

}  // namespace

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::monotone_t1: return "T_monotone_t1";
    case TheoremId::monotone_t2: return "T_monotone_t2";
    case TheoremId::gfr_monotone_1: return "T_gfr_monotone_1";
    case TheoremId::gfr_monotone_2: return "T_gfr_monotone_2";
    case TheoremId::density_monotone_upper: return "T_density_monotone_upper";
    case TheoremId::density_monotone_lower: return "T_density_monotone_lower";
    case TheoremId::exp_inequality: return "P_exp_inequality";
    case TheoremId::logsum: return "T_logsum";
  }
  return "?";
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::increasing: return "increasing";
    case Direction::decreasing: return "decreasing";
    case Direction::undetermined: return "undetermined";
  }
  return "?";
}

double fd_step(double t) { return 1e-5 * std::max(1.0, t); }

double partial_t1(const DistributionModel& m, Window w, const EntropyOrder& ord) {
  const double lo = std::max(0.0, m.support().lo);
  const double h = std::min(fd_step(w.t1), 0.25 * w.width());
  if (w.t1 - h >= lo) {
    return (H(m, {w.t1 + h, w.t2}, ord) - H(m, {w.t1 - h, w.t2}, ord)) / (2.0 * h);
  }
  const double f0 = H(m, w, ord);
  const double f1 = H(m, {w.t1 + h, w.t2}, ord);
  const double f2 = H(m, {w.t1 + 2.0 * h, w.t2}, ord);
  return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
}

double partial_t2(const DistributionModel& m, Window w, const EntropyOrder& ord) {
  if (std::isinf(w.t2)) return 0.0;
  const double hi = m.support().hi;
  const double h = std::min(fd_step(w.t2), 0.25 * w.width());
  if (w.t2 + h <= hi) {
    return (H(m, {w.t1, w.t2 + h}, ord) - H(m, {w.t1, w.t2 - h}, ord)) / (2.0 * h);
  }
  const double f0 = H(m, w, ord);
  const double f1 = H(m, {w.t1, w.t2 - h}, ord);
  const double f2 = H(m, {w.t1, w.t2 - 2.0 * h}, ord);
  return (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * h);
}

namespace {

Direction classify(double d) {
  if (!std::isfinite(d) || std::abs(d) <= kDirectionDeadZone) return Direction::undetermined;
  return d > 0.0 ? Direction::increasing : Direction::decreasing;
}

}  // namespace

Direction detect_direction_t1(const DistributionModel& m, Window w, const EntropyOrder& ord) {
  return classify(partial_t1(m, w, ord));
}

Direction detect_direction_t2(const DistributionModel& m, Window w, const EntropyOrder& ord) {
  return classify(partial_t2(m, w, ord));
}

namespace {

// (1/(b-a)) log[t^e h^{e-1} / e]
double monotone_rhs(double t, double h, const EntropyOrder& ord) {
  const double e = ord.exponent();
  return (e * std::log(t) + (e - 1.0) * std::log(h) - std::log(e)) / ord.spread();
}

}  // namespace

BoundReport bound_t1_monotone(const DistributionModel& m, Window w, const EntropyOrder& ord,
                              Direction direction) {
  const GfrPair g = gfr(m, w);
  require_finite_gfr(g.h1, "h1");
  const double lhs = H(m, w, ord);
  const double rhs = monotone_rhs(w.t1, g.h1, ord);
  return make_report(TheoremId::monotone_t1, direction != Direction::undetermined, lhs, rhs,
                     direction != Direction::decreasing, w);
}

BoundReport bound_t2_monotone(const DistributionModel& m, Window w, const EntropyOrder& ord,
                              Direction direction) {
  if (std::isinf(w.t2)) throw DomainError("bound_t2_monotone: needs a finite t2");
  const GfrPair g = gfr(m, w);
  require_finite_gfr(g.h2, "h2");
  const double lhs = H(m, w, ord);
  const double rhs = monotone_rhs(w.t2, g.h2, ord);
  return make_report(TheoremId::monotone_t2, direction != Direction::undetermined, lhs, rhs,
                     direction == Direction::decreasing, w);
}

std::pair<BoundReport, BoundReport> bound_gfr_monotone(const DistributionModel& m, Window w,
                                                       const EntropyOrder& ord) {
  if (std::isinf(w.t2)) throw DomainError("bound_gfr_monotone: needs a finite t2");
  const GfrPair g = gfr(m, w);
  require_finite_gfr(g.h1, "h1");
  require_finite_gfr(g.h2, "h2");
  const double lhs = H(m, w, ord);
  const double k = ord.exponent() / ord.spread();

  // h1(x, t2) nondecreasing and h2(t1, y) nonincreasing over the window,
  // sampled at interior points; the endpoints themselves are excluded where
  // the partner window would collapse.
  constexpr int probes = 16;
  bool h1_up = ord.regime() != 0;
  bool h2_down = ord.regime() != 0;
  double prev1 = g.h1;
  double prev2 = g.h2;
  for (int i = 1; i < probes; ++i) {
    const double frac = static_cast<double>(i) / probes;
    const double x = w.t1 + frac * w.width();
    const double y = w.t2 - frac * w.width();
    const double a = gfr(m, {x, w.t2}).h1;
    const double b = gfr(m, {w.t1, y}).h2;
    if (!(a >= prev1 * (1.0 - 1e-12))) h1_up = false;
    if (!(b >= prev2 * (1.0 - 1e-12))) h2_down = false;
    prev1 = a;
    prev2 = b;
  }
  return {make_report(TheoremId::gfr_monotone_1, h1_up, lhs, k * std::log(w.t1 * g.h1), true, w),
          make_report(TheoremId::gfr_monotone_2, h2_down, lhs, k * std::log(w.t2 * g.h2), true, w)};
}

std::pair<BoundReport, BoundReport> bound_density_monotone(const DistributionModel& m, Window w,
                                                           const EntropyOrder& ord) {
  const GfrPair g = gfr(m, w);
  const double e = ord.exponent();
  const double lhs = H(m, w, ord);
  const double log_moment = std::log(conditional_moment(m, w, e));
  const double upper = (log_moment + (e - 1.0) * std::log(g.h2)) / ord.spread();
  const double lower = (log_moment + (e - 1.0) * std::log(g.h1)) / ord.spread();

  const DensityShape shape = structure_flags(m).density;
  const bool monotone = shape != DensityShape::non_monotone;
  const bool hypothesis = monotone && ord.regime() != 0;
  // sign +1: H <= upper and H >= lower. A constant density gives equality,
  // so either orientation applies.
  int sign = ord.regime() >= 0 ? 1 : -1;
  if (shape == DensityShape::decreasing) sign = -sign;
  return {make_report(TheoremId::density_monotone_upper, hypothesis, lhs, upper, sign < 0, w),
          make_report(TheoremId::density_monotone_lower, hypothesis, lhs, lower, sign > 0, w)};
}

BoundReport bound_exp_inequality(const DistributionModel& m, Window w, const EntropyOrder& ord) {
  const double lhs = H(m, w, ord);
  const double integral = std::exp(lhs * ord.spread());
  const double rhs = (integral - 1.0) / ord.spread();
  return make_report(TheoremId::exp_inequality, true, lhs, rhs, false, w);
}

BoundReport bound_logsum(const DistributionModel& m, Window w, const EntropyOrder& ord) {
  const double lhs = H(m, w, ord);
  const double e = ord.exponent();
  const double rhs = (e * conditional_log_mean(m, w) + (1.0 - e) * interval_shannon(m, w)) /
                     ord.spread();
  return make_report(TheoremId::logsum, true, lhs, rhs, true, w);
}

MonotonicityReport check_interval_monotonicity(const DistributionModel& m,
                                               const MonotonicityGrid& grid,
                                               const EntropyOrder& ord) {
  if (grid.t1_values.size() < 2 || grid.t2_values.size() < 2) {
    throw DomainError("check_interval_monotonicity: each axis needs at least 2 points");
  }
  if (!std::is_sorted(grid.t1_values.begin(), grid.t1_values.end()) ||
      !std::is_sorted(grid.t2_values.begin(), grid.t2_values.end())) {
    throw DomainError("check_interval_monotonicity: axis values must be ascending");
  }
  MonotonicityReport rep{};
  rep.hypothesis_holds =
      structure_flags(m).cdf_log_concave == Tri::yes && ord.regime() < 0;

  const std::size_t n1 = grid.t1_values.size();
  const std::size_t n2 = grid.t2_values.size();
  std::vector<double> hv(n1 * n2, kNaN);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const Window w{grid.t1_values[i], grid.t2_values[j]};
      if (!(w.t1 < w.t2)) continue;
      try {
        hv[i * n2 + j] = H(m, w, ord);
        ++rep.windows_evaluated;
      } catch (const DegenerateWindowError&) {
      }
    }
  }
  auto tol = [](double a, double b) { return 1e-10 + 1e-9 * std::max(std::abs(a), std::abs(b)); };
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j + 1 < n2; ++j) {
      const double a = hv[i * n2 + j];
      const double b = hv[i * n2 + j + 1];
      if (std::isnan(a) || std::isnan(b)) continue;
      ++rep.steps_t2;
      if (b < a - tol(a, b)) {
        rep.t2_violations.push_back({Axis::t2, i, j, grid.t1_values[i], grid.t2_values[j],
                                     grid.t2_values[j + 1], a, b, a - b});
      }
    }
  }
  for (std::size_t i = 0; i + 1 < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const double a = hv[i * n2 + j];
      const double b = hv[(i + 1) * n2 + j];
      if (std::isnan(a) || std::isnan(b)) continue;
      ++rep.steps_t1;
      if (b > a + tol(a, b)) {
        rep.t1_violations.push_back({Axis::t1, i, j, grid.t2_values[j], grid.t1_values[i],
                                     grid.t1_values[i + 1], a, b, b - a});
      }
    }
  }
  return rep;
}

CharacteristicContext characteristic_context(const DistributionModel& m, Window w,
                                             const EntropyOrder& ord) {
  CharacteristicContext c{};
  c.w = w;
  c.exponent = ord.exponent();
  c.spread = ord.spread();
  c.h = H(m, w, ord);
  c.dh_dt1 = partial_t1(m, w, ord);
  c.dh_dt2 = partial_t2(m, w, ord);
  c.gfr = gfr(m, w);
  return c;
}

namespace {

// (t x)^e e^{-(b-a)H}, evaluated in logs.
double scaled_power(double t, double x, const CharacteristicContext& c) {
  if (t == 0.0 || x == 0.0) return 0.0;
  return std::exp(c.exponent * (std::log(t) + std::log(x)) - c.spread * c.h);
}

}  // namespace

double eta(double x, const CharacteristicContext& c) {
  return -scaled_power(c.w.t1, x, c) + c.exponent * x - c.spread * c.dh_dt1;
}

double zeta(double y, const CharacteristicContext& c) {
  return -scaled_power(c.w.t2, y, c) + c.exponent * y + c.spread * c.dh_dt2;
}

double eta(double x, const DistributionModel& m, Window w, const EntropyOrder& ord,
           double dh_dt1) {
  CharacteristicContext c{w, ord.exponent(), ord.spread(), H(m, w, ord), dh_dt1, 0.0, {}};
  return eta(x, c);
}

double zeta(double y, const DistributionModel& m, Window w, const EntropyOrder& ord,
            double dh_dt2) {
  CharacteristicContext c{w, ord.exponent(), ord.spread(), H(m, w, ord), 0.0, dh_dt2, {}};
  return zeta(y, c);
}

double stationary_point(Side side, const CharacteristicContext& c) {
  const double d = c.exponent - 1.0;
  if (std::abs(d) <= 1e-12) {
    throw RegimeError("stationary_point: undefined at alpha + beta = 2");
  }
  const double t = side == Side::t1 ? c.w.t1 : c.w.t2;
  return std::exp((-c.exponent * std::log(t) + c.spread * c.h) / d);
}

double stationary_point(Side side, const DistributionModel& m, Window w, const EntropyOrder& ord) {
  return stationary_point(side, characteristic_context(m, w, ord));
}

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

SideDiagnostic diagnose_side(Side side, const CharacteristicContext& c, int regime) {
  const ScalarFunction f = side == Side::t1
                               ? ScalarFunction([&c](double x) { return eta(x, c); })
                               : ScalarFunction([&c](double y) { return zeta(y, c); });
  SideDiagnostic d{};
  d.side = side;
  d.regime = regime;
  d.gfr_value = side == Side::t1 ? c.gfr.h1 : c.gfr.h2;
  d.stationary_point = kNaN;
  d.value_at_stationary = kNaN;

  const double hmax = std::max(c.gfr.h1, c.gfr.h2);
  const double hmin = std::min(c.gfr.h1, c.gfr.h2);
  double x0 = kNaN;
  if (regime != 0) {
    x0 = stationary_point(side, c);
    if (std::isfinite(x0) && x0 > 0.0) {
      d.stationary_point = x0;
      d.value_at_stationary = f(x0);
    } else {
      x0 = kNaN;
    }
  }

  // Sign as x -> inf: the power term dominates when a + b > 2.
  const int far_sign = regime > 0 ? -1 : 1;
  double hi = kRootSearchFactor * hmax;
  if (std::isfinite(x0)) hi = std::max(hi, 4.0 * x0);
  const double lo_ref = std::isfinite(x0) ? std::min(x0, hmin > 0.0 ? hmin : x0) : hmin;
  const double lo = 1e-12 * (lo_ref > 0.0 ? lo_ref : 1.0);

  try {
    if (regime != 0) {
      for (int k = 0; k < 200 && sign_of(f(hi)) != far_sign; ++k) hi *= 2.0;
    }
    std::vector<double> roots;
    if (std::isfinite(x0)) {
      // Each branch is monotone, so it holds at most one root.
      const double tol = 1e-12 * (1.0 + c.exponent * x0);
      if (std::abs(d.value_at_stationary) <= tol) {
        roots.push_back(x0);
      } else {
        const double fx0 = d.value_at_stationary;
        const double flo = f(lo);
        const double fhi = f(hi);
        if (flo == 0.0) roots.push_back(lo);
        if (sign_of(flo) * sign_of(fx0) < 0) roots.push_back(bisect_root(f, lo, x0));
        if (sign_of(fx0) * sign_of(fhi) < 0) roots.push_back(bisect_root(f, x0, hi));
        if (fhi == 0.0) roots.push_back(hi);
      }
    } else {
      roots = find_roots(f, RootBracket{lo, hi});
    }
    d.roots = std::move(roots);
  } catch (const Error&) {
    d.roots.clear();
    d.search_failed = true;
  }
  for (double r : d.roots) {
    if (std::abs(r - d.gfr_value) <= 1e-3 * std::max(d.gfr_value, 1e-300)) d.gfr_is_root = true;
  }
  return d;
}

}  // namespace

UniquenessDiagnostic uniqueness_diagnostic(const DistributionModel& m, Window w,
                                           const EntropyOrder& ord) {
  UniquenessDiagnostic u{};
  const CharacteristicContext c = characteristic_context(m, w, ord);
  u.direction_t1 = classify(c.dh_dt1);
  u.direction_t2 = classify(c.dh_dt2);
  u.hypothesis_holds =
      (u.direction_t1 == Direction::increasing && u.direction_t2 == Direction::decreasing) ||
      (u.direction_t1 == Direction::decreasing && u.direction_t2 == Direction::increasing);
  u.eta_side = diagnose_side(Side::t1, c, ord.regime());
  u.zeta_side = diagnose_side(Side::t2, c, ord.regime());
  return u;
}

}  // namespace wgie
