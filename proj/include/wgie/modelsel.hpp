#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wgie/distributions.hpp"
#include "wgie/entropy.hpp"
#include "wgie/estimation.hpp"

namespace wgie {

/// wgie - interval_shannon.
double kappa_gap(const DistributionModel& model, Window w, const EntropyOrder& ord);
/// wgie - weighted_interval_entropy.
double eta_gap(const DistributionModel& model, Window w, const EntropyOrder& ord);

/// Axes of the (u, v) grid with t1 = -log u and t2 = -log v. Only points with
/// u > v (so t1 < t2) are evaluated.
struct UvGrid {
  std::vector<double> u;
  std::vector<double> v;
};
/// n x n equally spaced points on [lo, hi]^2; default 30 over (0.05, 0.95).
UvGrid uv_grid(std::size_t n = 30, double lo = 0.05, double hi = 0.95);

struct GridPoint {
  double u;
  double v;
  double t1;
  double t2;
  double value;
};

struct EntropyGapGrid {
  EntropyOrder order;
  std::vector<GridPoint> points;  // u-major, then v, valid points only
};

/// Evaluates fn at every valid grid window; deterministic for any worker count.
EntropyGapGrid evaluate_grid(const UvGrid& grid, const EntropyOrder& ord,
                             const std::function<double(Window)>& fn, unsigned workers = 1);

EntropyGapGrid kappa_grid(const DistributionModel& model, const EntropyOrder& ord,
                          const UvGrid& grid, unsigned workers = 1);
EntropyGapGrid eta_grid(const DistributionModel& model, const EntropyOrder& ord,
                        const UvGrid& grid, unsigned workers = 1);
EntropyGapGrid wgie_grid(const DistributionModel& model, const EntropyOrder& ord,
                         const UvGrid& grid, unsigned workers = 1);
/// wgie(a) - wgie(b) per point; identically zero when a and b are the same model.
EntropyGapGrid wgie_difference_grid(const DistributionModel& a, const DistributionModel& b,
                                    const EntropyOrder& ord, const UvGrid& grid,
                                    unsigned workers = 1);

double grid_mean(const EntropyGapGrid& g);
double grid_min(const EntropyGapGrid& g);

/// Header: u,v,t1,t2,value
std::string to_csv(const EntropyGapGrid& g);

struct RankedModel {
  Family family;
  FitResult fit;
  double summary;  // mean WGIE over the valid grid points
  int rank;        // 1 = largest summary
};

struct ModelRanking {
  std::vector<RankedModel> rows;  // sorted by rank
  std::vector<std::string> warnings;
};

/// Fits each family and ranks by mean WGIE over the grid, largest first.
/// A family whose fit or grid evaluation fails is left out with a warning.
ModelRanking rank_models(const Sample& s, const std::vector<Family>& families,
                         const EntropyOrder& ord, const UvGrid& grid, unsigned workers = 1);

}  // namespace wgie
