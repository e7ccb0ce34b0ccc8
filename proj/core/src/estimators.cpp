#include "tdoa/estimators.hpp"

#include <cmath>

#include "tdoa/errors.hpp"
#include "tdoa/numerics.hpp"

namespace tdoa {
namespace {

double gram_condition(const LinearizedSystem& system) {
  const EigenDecomposition eig = sym_eig(system.gram());
  double lo = std::abs(eig.eigenvalues.front()), hi = lo;
  for (double e : eig.eigenvalues) {
    lo = std::min(lo, std::abs(e));
    hi = std::max(hi, std::abs(e));
  }
  return lo == 0.0 ? std::numeric_limits<double>::infinity() : hi / lo;
}

Vector translate_back(const Vector& x, const Vector& reference) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + reference[i];
  return out;
}

}  // namespace

const char* method_name(EstimatorMethod method) {
  return method == EstimatorMethod::Cls ? "CLS" : "ULS";
}

Estimate estimate_cls(const SensorArray& array, const RangeDiffSet& meas,
                      const SolveOptions& opts) {
  const LinearizedSystem system = build_system(array, meas);
  ClsSolution solution = solve_cls(system, opts);

  Estimate est;
  est.method = EstimatorMethod::Cls;
  est.x_hat = translate_back(solution.x_hat, array.reference());
  est.objective = solution.objective;
  est.gram_condition = gram_condition(system);
  est.branch = solution.branch;
  est.lambda = solution.lambda;
  est.classification = solution.classification;
  est.solution = std::move(solution);
  return est;
}

Estimate estimate_uls(const SensorArray& array, const RangeDiffSet& meas) {
  const LinearizedSystem system = build_system(array, meas);

  Estimate est;
  est.method = EstimatorMethod::Uls;
  Vector y;
  try {
    y = solve_linear(system.gram(), system.normal_rhs());
  } catch (const SingularMatrixError&) {
    y = minnorm_solve(system.gram(), system.normal_rhs());
    est.minnorm_fallback = true;
  }
  est.objective = system.objective(y);
  est.gram_condition = gram_condition(system);
  est.negative_first_component = y[0] < 0.0;
  est.x_hat = translate_back(Vector(y.begin() + 1, y.end()), array.reference());
  return est;
}

}  // namespace tdoa
