#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wgie/distributions.hpp"
#include "wgie/entropy.hpp"
#include "wgie/estimation.hpp"

namespace wgie {

struct SimConfig {
  DistributionModel model = DistributionModel::exponential(2.0);
  std::vector<Window> windows;
  std::vector<std::size_t> sample_sizes{50, 100, 500, 1000};
  std::size_t replications = 1000;
  EntropyOrder ord{0.5, 1.2};
  std::uint64_t seed = 0;
  EstimationProtocol protocol = EstimationProtocol::truncated;

  /// replications >= 1, sample sizes > 0, at least one window, and every
  /// window carries mass under the model. Throws DomainError.
  void validate() const;
};

struct SimRow {
  Window window;
  std::size_t n;
  double mean_estimate;
  double bias;
  double mse;
  double true_value;
  std::size_t failures;
};

struct SimReport {
  std::vector<SimRow> rows;  // window-major, then sample size, in config order
};

/// Seed of replication r for window index k and sample size n.
std::uint64_t replication_seed(std::uint64_t base, std::size_t window_index, std::size_t n,
                               std::size_t replication);

/// Monte-Carlo study. Estimates are reduced in replication order with
/// compensated sums, so the report is identical for every worker count
/// (0 means hardware concurrency). A replication whose fit throws is
/// counted in `failures` and left out of the averages.
SimReport run_monte_carlo(const SimConfig& cfg, unsigned workers = 1);

/// wgie at the true model for every window in the config.
std::vector<double> true_wgie_reference(const SimConfig& cfg);

/// Header: window_t1,window_t2,n,mean_estimate,bias,mse,true_value,failures
std::string to_csv(const SimReport& report);

}  // namespace wgie
