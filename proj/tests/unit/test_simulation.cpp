#include <doctest.h>

#include <cmath>

#include "wgie/errors.hpp"
#include "wgie/simulation.hpp"

using namespace wgie;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.windows = {{0.5, 1.0}, {1.0, 3.0}};
  cfg.sample_sizes = {50, 400};
  cfg.replications = 60;
  cfg.seed = 42;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  SimConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.windows.clear();
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = small_config();
  cfg.replications = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = small_config();
  cfg.model = DistributionModel::gamma(2.0, 1.0);
  CHECK_THROWS_AS(cfg.validate(), DomainError);  // truncated protocol is exponential-only
  cfg.protocol = EstimationProtocol::full_sample;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("replication seeds are distinct across cells") {
  CHECK(replication_seed(1, 0, 50, 0) != replication_seed(1, 0, 50, 1));
  CHECK(replication_seed(1, 0, 50, 0) != replication_seed(1, 1, 50, 0));
  CHECK(replication_seed(1, 0, 50, 0) != replication_seed(1, 0, 100, 0));
  CHECK(replication_seed(1, 0, 50, 0) != replication_seed(2, 0, 50, 0));
  CHECK(replication_seed(1, 0, 50, 0) == replication_seed(1, 0, 50, 0));
}

TEST_CASE("a single replication has mse = bias^2") {
  SimConfig cfg = small_config();
  cfg.replications = 1;
  for (const auto& row : run_monte_carlo(cfg).rows) {
    CHECK(row.mse == doctest::Approx(row.bias * row.bias).epsilon(1e-12));
    CHECK(row.bias == doctest::Approx(row.mean_estimate - row.true_value));
  }
}

TEST_CASE("report layout and invariants") {
  const SimConfig cfg = small_config();
  const auto rep = run_monte_carlo(cfg);
  REQUIRE(rep.rows.size() == 4);
  const auto truth = true_wgie_reference(cfg);
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const auto& row = rep.rows[k];
    CHECK(row.window.t1 == cfg.windows[k / 2].t1);
    CHECK(row.n == cfg.sample_sizes[k % 2]);
    CHECK(row.true_value == truth[k / 2]);
    CHECK(row.mse >= row.bias * row.bias * (1.0 - 1e-12));
    CHECK(row.failures == 0);
  }
  // MSE shrinks with n.
  CHECK(rep.rows[1].mse < rep.rows[0].mse);
  CHECK(rep.rows[3].mse < rep.rows[2].mse);
}

TEST_CASE("property: report is identical across runs and worker counts") {
  const SimConfig cfg = small_config();
  const std::string serial = to_csv(run_monte_carlo(cfg, 1));
  CHECK(to_csv(run_monte_carlo(cfg, 1)) == serial);
  CHECK(to_csv(run_monte_carlo(cfg, 3)) == serial);
  CHECK(to_csv(run_monte_carlo(cfg, 8)) == serial);
  SimConfig other = cfg;
  other.seed = 43;
  CHECK(to_csv(run_monte_carlo(other, 2)) != serial);
  CHECK(serial.rfind("window_t1,window_t2,n,mean_estimate,bias,mse,true_value,failures\n", 0) == 0);
}

TEST_CASE("full-sample protocol with a non-exponential model") {
  SimConfig cfg = small_config();
  cfg.model = DistributionModel::gamma(2.0, 1.5);
  cfg.protocol = EstimationProtocol::full_sample;
  cfg.replications = 20;
  const auto rep = run_monte_carlo(cfg, 2);
  for (const auto& row : rep.rows) {
    CHECK(std::isfinite(row.mean_estimate));
    CHECK(std::abs(row.bias) < 0.2);
  }
}
