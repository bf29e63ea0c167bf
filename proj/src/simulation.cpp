#include "wgie/simulation.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "wgie/csv.hpp"
#include "wgie/errors.hpp"
#include "wgie/parallel.hpp"
#include "wgie/rng.hpp"

namespace wgie {

void SimConfig::validate() const {
  if (replications < 1) throw DomainError("simulation: replications must be >= 1");
  if (sample_sizes.empty()) throw DomainError("simulation: no sample sizes");
  for (std::size_t n : sample_sizes) {
    if (n == 0) throw DomainError("simulation: sample sizes must be > 0");
  }
  if (windows.empty()) throw DomainError("simulation: no windows");
  for (const Window& w : windows) validate_window(model, w);
  if (protocol == EstimationProtocol::truncated && model.family() != Family::exponential) {
    throw DomainError("simulation: the truncated protocol needs an exponential truth model");
  }
}

std::uint64_t replication_seed(std::uint64_t base, std::size_t window_index, std::size_t n,
                               std::size_t replication) {
  return derive_seed(base, {window_index, n, replication});
}

std::vector<double> true_wgie_reference(const SimConfig& cfg) {
  std::vector<double> out;
  out.reserve(cfg.windows.size());
  for (const Window& w : cfg.windows) out.push_back(wgie(cfg.model, w, cfg.ord).value);
  return out;
}

SimReport run_monte_carlo(const SimConfig& cfg, unsigned workers) {
  cfg.validate();
  workers = resolve_workers(workers);
  const std::vector<double> truth = true_wgie_reference(cfg);
  SimReport report;
  std::vector<std::optional<double>> estimates(cfg.replications);

  for (std::size_t k = 0; k < cfg.windows.size(); ++k) {
    const Window w = cfg.windows[k];
    for (std::size_t n : cfg.sample_sizes) {
      parallel_for(cfg.replications, workers, [&](std::size_t r) {
        const auto xs = sample_truncated(cfg.model, w, n, replication_seed(cfg.seed, k, n, r));
        try {
          const Sample s(xs, "replication");
          estimates[r] = estimate_wgie(s, cfg.model.family(), w, cfg.ord, cfg.protocol);
          if (!std::isfinite(*estimates[r])) estimates[r].reset();
        } catch (const Error&) {
          estimates[r].reset();
        }
      });
      CompensatedSum sum;
      CompensatedSum sq;
      std::size_t ok = 0;
      for (const auto& e : estimates) {
        if (!e) continue;
        ++ok;
        sum.add(*e);
        const double d = *e - truth[k];
        sq.add(d * d);
      }
      SimRow row{w, n, std::numeric_limits<double>::quiet_NaN(),
                 std::numeric_limits<double>::quiet_NaN(),
                 std::numeric_limits<double>::quiet_NaN(), truth[k], cfg.replications - ok};
      if (ok > 0) {
        row.mean_estimate = sum.value() / static_cast<double>(ok);
        row.bias = row.mean_estimate - truth[k];
        row.mse = sq.value() / static_cast<double>(ok);
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string to_csv(const SimReport& report) {
  std::ostringstream out;
  out << "window_t1,window_t2,n,mean_estimate,bias,mse,true_value,failures\n";
  for (const SimRow& r : report.rows) {
    out << format_number(r.window.t1) << ',' << format_number(r.window.t2) << ',' << r.n << ','
        << format_number(r.mean_estimate) << ',' << format_number(r.bias) << ','
        << format_number(r.mse) << ',' << format_number(r.true_value) << ',' << r.failures
        << '\n';
  }
  return out.str();
}

}  // namespace wgie
