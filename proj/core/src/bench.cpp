#include "tdoa/bench.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "tdoa/errors.hpp"

namespace tdoa {
namespace {

void validate(const Scenario& scenario) {
  if (scenario.trials < 1) throw std::invalid_argument("Scenario: trials must be >= 1");
  if (scenario.sigmas.empty()) throw std::invalid_argument("Scenario: need at least one sigma");
  if (scenario.methods.empty()) throw std::invalid_argument("Scenario: need at least one method");
  if (scenario.source.size() != static_cast<std::size_t>(scenario.array.dim()))
    throw std::invalid_argument("Scenario: source dimension mismatch");
  double prev = 0.0;
  for (double s : scenario.sigmas) {
    if (!(s > prev)) throw std::invalid_argument("Scenario: sigmas must be positive and ascending");
    prev = s;
  }
}

double squared_error(const Vector& estimate, const Vector& truth) {
  double s = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = estimate[i] - truth[i];
    s += d * d;
  }
  return s;
}

std::string format_fp(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::size_t sigma_index, std::size_t trial) {
  return seed ^ (static_cast<std::uint64_t>(sigma_index) << 32) ^ static_cast<std::uint64_t>(trial);
}

RmseTable run_monte_carlo(const Scenario& scenario, const SolveOptions& opts) {
  validate(scenario);

  RmseTable table;
  for (std::size_t si = 0; si < scenario.sigmas.size(); ++si) {
    const double sigma = scenario.sigmas[si];
    std::vector<double> sums(scenario.methods.size(), 0.0);
    std::vector<int> failures(scenario.methods.size(), 0);

    for (int trial = 0; trial < scenario.trials; ++trial) {
      const RangeDiffSet meas = simulate_measurements(
          scenario.array, scenario.source, sigma,
          trial_seed(scenario.seed, si, static_cast<std::size_t>(trial)));
      for (std::size_t mi = 0; mi < scenario.methods.size(); ++mi) {
        try {
          const Estimate est = scenario.methods[mi] == EstimatorMethod::Cls
                                   ? estimate_cls(scenario.array, meas, opts)
                                   : estimate_uls(scenario.array, meas);
          sums[mi] += squared_error(est.x_hat, scenario.source);
        } catch (const SolverError&) {
          ++failures[mi];
        }
      }
    }

    for (std::size_t mi = 0; mi < scenario.methods.size(); ++mi) {
      RmseRow row;
      row.sigma = sigma;
      row.ten_log_inv_sigma2 = 10.0 * std::log10(1.0 / (sigma * sigma));
      row.method = scenario.methods[mi];
      row.trials = scenario.trials;
      row.failed = failures[mi];
      const int used = scenario.trials - failures[mi];
      row.mse = used > 0 ? sums[mi] / used : std::numeric_limits<double>::quiet_NaN();
      row.rmse = std::sqrt(row.mse);
      table.rows.push_back(row);
    }
  }
  return table;
}

void write_csv(const RmseTable& table, std::ostream& out) {
  out << "sigma,ten_log_inv_sigma2,method,rmse,mse,trials,failed\n";
  for (const RmseRow& row : table.rows) {
    out << format_fp(row.sigma) << ',' << format_fp(row.ten_log_inv_sigma2) << ','
        << method_name(row.method) << ',' << format_fp(row.rmse) << ',' << format_fp(row.mse)
        << ',' << row.trials << ',' << row.failed << '\n';
  }
}

namespace {

Scenario planar_scenario(std::vector<Vector> sensors, int trials, std::uint64_t seed,
                         std::vector<double> sigmas) {
  Scenario scenario{SensorArray({0.0, 0.0}, std::move(sensors)),
                    {-5.0, 2.0},
                    std::move(sigmas),
                    trials,
                    seed};
  return scenario;
}

}  // namespace

Scenario example6_scenario(int trials, std::uint64_t seed, std::vector<double> sigmas) {
  return planar_scenario({{-1.0, 1.0}, {-1.0, 4.0}, {-4.0, 6.0}, {-6.0, 7.0}}, trials, seed,
                         std::move(sigmas));
}

Scenario example7_scenario(int trials, std::uint64_t seed, std::vector<double> sigmas) {
  // Same geometry with the non-reference sensors pushed far from the origin.
  return planar_scenario({{-101.0, -99.0}, {-101.0, -96.0}, {-104.0, -94.0}, {-106.0, -93.0}},
                         trials, seed, std::move(sigmas));
}

}  // namespace tdoa
