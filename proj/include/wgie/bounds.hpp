#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "wgie/distributions.hpp"
#include "wgie/entropy.hpp"

namespace wgie {

enum class TheoremId {
  monotone_t1,
  monotone_t2,
  gfr_monotone_1,
  gfr_monotone_2,
  density_monotone_upper,
  density_monotone_lower,
  exp_inequality,
  logsum,
};
/// Stable identifiers: "T_monotone_t1", ..., "P_exp_inequality", "T_logsum".
std::string_view to_string(TheoremId id);

/// One bound evaluated at one (model, window, order).
/// margin >= 0 means the inequality holds; satisfied == (margin >= -1e-8).
/// informative is false when either side is infinite or the window is too
/// narrow for the margin to mean anything.
struct BoundReport {
  TheoremId theorem_id;
  bool hypothesis_holds;
  double lhs;
  double rhs;
  bool satisfied;
  double margin;
  bool informative;
};

inline constexpr double kBoundMarginTolerance = 1e-8;

enum class Direction { increasing, decreasing, undetermined };
std::string_view to_string(Direction d);

/// Step used for every finite difference of H in t1 or t2.
double fd_step(double t);

/// dH/dt1 and dH/dt2 by central differences (one-sided second-order at a
/// support boundary; dH/dt2 = 0 for an unbounded window).
double partial_t1(const DistributionModel& model, Window w, const EntropyOrder& ord);
double partial_t2(const DistributionModel& model, Window w, const EntropyOrder& ord);

/// Sign of the finite-difference partial; |dH/dt| <= 1e-7 is undetermined.
Direction detect_direction_t1(const DistributionModel& model, Window w, const EntropyOrder& ord);
Direction detect_direction_t2(const DistributionModel& model, Window w, const EntropyOrder& ord);

/// H >= (<=) (1/(b-a)) log[t1^{a+b-1} h1^{a+b-2} / (a+b-1)] when H is
/// increasing (decreasing) in t1.
BoundReport bound_t1_monotone(const DistributionModel& model, Window w, const EntropyOrder& ord,
                              Direction direction);
/// H <= (>=) the same expression in t2, h2 when H is increasing (decreasing) in t2.
BoundReport bound_t2_monotone(const DistributionModel& model, Window w, const EntropyOrder& ord,
                              Direction direction);

/// H >= ((a+b-1)/(b-a)) log(t_i h_i), under h1(., t2) nondecreasing on the
/// window (first) and h2(t1, .) nonincreasing on the window (second).
std::pair<BoundReport, BoundReport> bound_gfr_monotone(const DistributionModel& model, Window w,
                                                       const EntropyOrder& ord);

/// Bounds through E(X^{a+b-1} | window) and h2 (upper) or h1 (lower).
/// Increasing density with a+b > 2: H <= upper-rhs and H >= lower-rhs; each
/// of a+b < 2 and a decreasing density flips both. A constant density meets
/// both hypotheses.
std::pair<BoundReport, BoundReport> bound_density_monotone(const DistributionModel& model,
                                                           Window w, const EntropyOrder& ord);

/// H <= (I - 1)/(b - a) with I the WGIE integral.
BoundReport bound_exp_inequality(const DistributionModel& model, Window w, const EntropyOrder& ord);

/// H >= ((a+b-1)/(b-a)) E[log X | window] + ((2-a-b)/(b-a)) interval_shannon.
BoundReport bound_logsum(const DistributionModel& model, Window w, const EntropyOrder& ord);

/// Grid for the interval-monotonicity check: every (t1, t2) with t1 < t2.
struct MonotonicityGrid {
  std::vector<double> t1_values;
  std::vector<double> t2_values;
};

enum class Axis { t1, t2 };

/// A step along one axis where H moved in the wrong direction.
/// For axis t2, H must not decrease as t2 grows; for t1, H must not increase as t1 grows.
struct MonotonicityViolation {
  Axis axis;
  std::size_t i;  // index into t1_values
  std::size_t j;  // index into t2_values
  double fixed;
  double from;
  double to;
  double h_from;
  double h_to;
  double magnitude;
};

struct MonotonicityReport {
  bool hypothesis_holds;  // cdf log-concave and a + b < 2
  std::size_t windows_evaluated;
  std::size_t steps_t1;
  std::size_t steps_t2;
  std::vector<MonotonicityViolation> t1_violations;
  std::vector<MonotonicityViolation> t2_violations;
};

/// Throws DomainError if either axis has fewer than 2 points.
MonotonicityReport check_interval_monotonicity(const DistributionModel& model,
                                               const MonotonicityGrid& grid,
                                               const EntropyOrder& ord);

/// Everything eta/zeta need at one window, computed once.
struct CharacteristicContext {
  Window w;
  double exponent;  // a + b - 1
  double spread;    // b - a
  double h;         // H(t1, t2)
  double dh_dt1;
  double dh_dt2;
  GfrPair gfr;
};
CharacteristicContext characteristic_context(const DistributionModel& model, Window w,
                                             const EntropyOrder& ord);

/// eta(x) = -(t1 x)^{a+b-1} e^{-(b-a)H} + (a+b-1) x - (b-a) dH/dt1; eta(h1) = 0.
double eta(double x, const CharacteristicContext& ctx);
/// zeta(y) = -(t2 y)^{a+b-1} e^{-(b-a)H} + (a+b-1) y + (b-a) dH/dt2; zeta(h2) = 0.
double zeta(double y, const CharacteristicContext& ctx);
double eta(double x, const DistributionModel& model, Window w, const EntropyOrder& ord,
           double dh_dt1);
double zeta(double y, const DistributionModel& model, Window w, const EntropyOrder& ord,
            double dh_dt2);

enum class Side { t1, t2 };

/// Turning point of eta (side t1) or zeta (side t2):
/// [t_i^{-(a+b-1)} e^{(b-a)H}]^{1/(a+b-2)}. RegimeError when a + b == 2.
double stationary_point(Side side, const CharacteristicContext& ctx);
double stationary_point(Side side, const DistributionModel& model, Window w,
                        const EntropyOrder& ord);

struct SideDiagnostic {
  Side side;
  double stationary_point;  // NaN when a + b == 2 or t_i == 0
  double value_at_stationary;
  std::vector<double> roots;
  double gfr_value;
  bool gfr_is_root;
  int regime;
  bool search_failed;
};

struct UniquenessDiagnostic {
  Direction direction_t1;
  Direction direction_t2;
  /// Increasing in t1 and decreasing in t2, or the mirrored pattern.
  bool hypothesis_holds;
  SideDiagnostic eta_side;
  SideDiagnostic zeta_side;
};

/// Roots of eta and zeta on (0, max(50 max(h1, h2), 4 x0)], the upper end
/// doubled until the function shows its sign at infinity. Each monotone
/// branch on either side of the turning point is searched separately.
UniquenessDiagnostic uniqueness_diagnostic(const DistributionModel& model, Window w,
                                           const EntropyOrder& ord);

}  // namespace wgie
