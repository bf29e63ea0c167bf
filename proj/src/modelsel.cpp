#include "wgie/modelsel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wgie/csv.hpp"
#include "wgie/errors.hpp"
#include "wgie/parallel.hpp"

namespace wgie {

double kappa_gap(const DistributionModel& m, Window w, const EntropyOrder& ord) {
  return wgie(m, w, ord).value - interval_shannon(m, w);
}

double eta_gap(const DistributionModel& m, Window w, const EntropyOrder& ord) {
  return wgie(m, w, ord).value - weighted_interval_entropy(m, w);
}

UvGrid uv_grid(std::size_t n, double lo, double hi) {
  if (n < 2) throw DomainError("uv_grid: need at least 2 points per axis");
  if (!(lo > 0.0 && hi < 1.0 && lo < hi)) throw DomainError("uv_grid: need 0 < lo < hi < 1");
  UvGrid g;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    g.u.push_back(x);
    g.v.push_back(x);
  }
  return g;
}

EntropyGapGrid evaluate_grid(const UvGrid& grid, const EntropyOrder& ord,
                             const std::function<double(Window)>& fn, unsigned workers) {
  EntropyGapGrid out{ord, {}};
  for (double u : grid.u) {
    for (double v : grid.v) {
      if (!(u > v) || !(u > 0.0) || !(v > 0.0) || !(u < 1.0)) continue;
      out.points.push_back(GridPoint{u, v, -std::log(u), -std::log(v),
                                     std::numeric_limits<double>::quiet_NaN()});
    }
  }
  parallel_for(out.points.size(), resolve_workers(workers), [&](std::size_t i) {
    GridPoint& p = out.points[i];
    p.value = fn(Window{p.t1, p.t2});
  });
  return out;
}

EntropyGapGrid kappa_grid(const DistributionModel& m, const EntropyOrder& ord, const UvGrid& grid,
                          unsigned workers) {
  return evaluate_grid(grid, ord, [&](Window w) { return kappa_gap(m, w, ord); }, workers);
}

EntropyGapGrid eta_grid(const DistributionModel& m, const EntropyOrder& ord, const UvGrid& grid,
                        unsigned workers) {
  return evaluate_grid(grid, ord, [&](Window w) { return eta_gap(m, w, ord); }, workers);
}

EntropyGapGrid wgie_grid(const DistributionModel& m, const EntropyOrder& ord, const UvGrid& grid,
                         unsigned workers) {
  return evaluate_grid(grid, ord, [&](Window w) { return wgie(m, w, ord).value; }, workers);
}

EntropyGapGrid wgie_difference_grid(const DistributionModel& a, const DistributionModel& b,
                                    const EntropyOrder& ord, const UvGrid& grid,
                                    unsigned workers) {
  return evaluate_grid(
      grid, ord, [&](Window w) { return wgie(a, w, ord).value - wgie(b, w, ord).value; },
      workers);
}

double grid_mean(const EntropyGapGrid& g) {
  if (g.points.empty()) return std::numeric_limits<double>::quiet_NaN();
  CompensatedSum s;
  for (const auto& p : g.points) s.add(p.value);
  return s.value() / static_cast<double>(g.points.size());
}

double grid_min(const EntropyGapGrid& g) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : g.points) m = std::min(m, p.value);
  return m;
}

std::string to_csv(const EntropyGapGrid& g) {
  std::ostringstream out;
  out << "u,v,t1,t2,value\n";
  for (const auto& p : g.points) {
    out << format_number(p.u) << ',' << format_number(p.v) << ',' << format_number(p.t1) << ','
        << format_number(p.t2) << ',' << format_number(p.value) << '\n';
  }
  return out.str();
}

ModelRanking rank_models(const Sample& s, const std::vector<Family>& families,
                         const EntropyOrder& ord, const UvGrid& grid, unsigned workers) {
  if (families.empty()) throw DomainError("rank_models: no families given");
  ModelRanking out;
  for (Family f : families) {
    try {
      FitResult fit = fit_family(s, f);
      if (!fit.converged) {
        out.warnings.push_back(std::string(family_name(f)) + ": fit did not converge");
      }
      const double summary = grid_mean(wgie_grid(fit.model, ord, grid, workers));
      if (!std::isfinite(summary)) {
        out.warnings.push_back(std::string(family_name(f)) + ": grid summary is not finite");
        continue;
      }
      out.rows.push_back(RankedModel{f, std::move(fit), summary, 0});
    } catch (const Error& e) {
      out.warnings.push_back(std::string(family_name(f)) + ": excluded (" + e.what() + ")");
    }
  }
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const RankedModel& a, const RankedModel& b) { return a.summary > b.summary; });
  for (std::size_t i = 0; i < out.rows.size(); ++i) out.rows[i].rank = static_cast<int>(i + 1);
  return out;
}

}  // namespace wgie
