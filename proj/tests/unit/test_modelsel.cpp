#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "wgie/datasets.hpp"
#include "wgie/modelsel.hpp"

using namespace wgie;

namespace {

Sample bearings() {
  const auto& v = datasets::bearings;
  return Sample(std::vector<double>(v.begin(), v.end()), "bearings");
}

}  // namespace

TEST_CASE("uv grid keeps t1 < t2 only") {
  const auto g = uv_grid(5, 0.1, 0.9);
  REQUIRE(g.u.size() == 5);
  CHECK(g.u.front() == doctest::Approx(0.1));
  CHECK(g.u.back() == doctest::Approx(0.9));
  const auto grid = evaluate_grid(g, EntropyOrder(1.5, 2.0), [](Window w) { return w.width(); });
  CHECK(grid.points.size() == 10);  // strictly u > v
  for (const auto& p : grid.points) {
    CHECK(p.t1 < p.t2);
    CHECK(p.t1 == doctest::Approx(-std::log(p.u)));
    CHECK(p.value == doctest::Approx(p.t2 - p.t1));
  }
  CHECK(grid_min(grid) > 0.0);
  CHECK(grid_mean(grid) >= grid_min(grid));
}

TEST_CASE("self-difference is identically zero") {
  const auto m = DistributionModel::gamma(4.0, 0.05);
  const auto d = wgie_difference_grid(m, m, EntropyOrder(1.5, 2.0), uv_grid(10));
  for (const auto& p : d.points) CHECK(p.value == 0.0);
}

TEST_CASE("gap grids agree with the pointwise definitions") {
  const auto m = DistributionModel::weibull(2.0, 0.8);
  const EntropyOrder ord(1.5, 2.0);
  const auto k = kappa_grid(m, ord, uv_grid(6), 2);
  const auto e = eta_grid(m, ord, uv_grid(6), 2);
  REQUIRE(k.points.size() == e.points.size());
  for (std::size_t i = 0; i < k.points.size(); ++i) {
    const Window w{k.points[i].t1, k.points[i].t2};
    CHECK(k.points[i].value == kappa_gap(m, w, ord));
    CHECK(e.points[i].value == eta_gap(m, w, ord));
  }
}

TEST_CASE("grids are identical for every worker count") {
  const auto m = DistributionModel::exp_exponential(5.0, 0.03);
  const EntropyOrder ord(1.5, 2.0);
  const std::string one = to_csv(wgie_grid(m, ord, uv_grid(12), 1));
  CHECK(to_csv(wgie_grid(m, ord, uv_grid(12), 4)) == one);
  CHECK(one.rfind("u,v,t1,t2,value\n", 0) == 0);
}

TEST_CASE("ranking") {
  const auto s = bearings();
  const EntropyOrder ord(1.5, 2.0);
  const std::vector<Family> fam{Family::exp_exponential, Family::gamma, Family::weibull};
  const auto r = rank_models(s, fam, ord, uv_grid(10), 1);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.warnings.empty());
  for (std::size_t i = 0; i < 3; ++i) CHECK(r.rows[i].rank == static_cast<int>(i) + 1);
  CHECK(r.rows[0].summary >= r.rows[1].summary);
  CHECK(r.rows[1].summary >= r.rows[2].summary);
  // Invariant to family order and to parallel evaluation.
  const std::vector<Family> reversed{Family::weibull, Family::gamma, Family::exp_exponential};
  const auto r2 = rank_models(s, reversed, ord, uv_grid(10), 4);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r2.rows[i].family == r.rows[i].family);
    CHECK(r2.rows[i].summary == r.rows[i].summary);
  }
  const auto single = rank_models(s, {Family::weibull}, ord, uv_grid(10));
  REQUIRE(single.rows.size() == 1);
  CHECK(single.rows[0].rank == 1);
}

TEST_CASE("a failing family is dropped with a warning") {
  const auto r = rank_models(bearings(), {Family::uniform, Family::gamma}, EntropyOrder(1.5, 2.0),
                             uv_grid(5));
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].family == Family::gamma);
  CHECK(r.warnings.size() == 1);
}
