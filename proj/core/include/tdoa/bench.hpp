#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tdoa/estimators.hpp"
#include "tdoa/geometry.hpp"

namespace tdoa {

// A seeded noise sweep: for every noise level, `trials` independent
// simulations are run and each requested estimator is scored against the
// true source position.
struct Scenario {
  SensorArray array;
  Vector source;
  std::vector<double> sigmas;  // strictly positive, ascending
  int trials = 1;
  std::uint64_t seed = 0;
  std::vector<EstimatorMethod> methods = {EstimatorMethod::Cls, EstimatorMethod::Uls};
};

struct RmseRow {
  double sigma = 0.0;
  double ten_log_inv_sigma2 = 0.0;  // 10 log10(1 / sigma^2), the usual noise axis
  EstimatorMethod method = EstimatorMethod::Cls;
  double rmse = 0.0;
  double mse = 0.0;
  int trials = 0;
  int failed = 0;  // solver errors, excluded from the mean
};

struct RmseTable {
  std::vector<RmseRow> rows;  // one per (sigma, method), sigma-major order
};

// Sub-seed for one trial: the scenario seed XOR the sigma index shifted into
// the high half XOR the trial index. Every trial is reproducible on its own,
// so how trials are partitioned across workers cannot change the table.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t sigma_index, std::size_t trial);

// Runs the sweep serially in trial order. Per-trial simulation is shared by
// all methods (each estimator sees the same noisy measurements). Failures are
// counted and excluded; an all-failed cell reports NaN.
RmseTable run_monte_carlo(const Scenario& scenario, const SolveOptions& opts = {});

// CSV with the exact header
// sigma,ten_log_inv_sigma2,method,rmse,mse,trials,failed
// and floating point values printed with 17 significant digits.
void write_csv(const RmseTable& table, std::ostream& out);

// Built-in scenarios: a five-sensor planar array watching a source at
// (-5, 2), and the same array with the four non-reference sensors moved far
// from the origin, which ill-conditions the design matrix.
Scenario example6_scenario(int trials, std::uint64_t seed, std::vector<double> sigmas);
Scenario example7_scenario(int trials, std::uint64_t seed, std::vector<double> sigmas);

}  // namespace tdoa
