#pragma once

#include <optional>
#include <string>

#include "tdoa/cls_solver.hpp"
#include "tdoa/geometry.hpp"

namespace tdoa {

enum class EstimatorMethod { Cls, Uls };

const char* method_name(EstimatorMethod method);  // "CLS" / "ULS"

struct Estimate {
  Vector x_hat;  // original coordinate frame
  EstimatorMethod method = EstimatorMethod::Cls;
  double objective = 0.0;       // residual value at the estimate
  double gram_condition = 0.0;  // eigenvalue magnitude ratio of A^T A
  std::optional<SolveBranch> branch;          // constrained solver only
  std::optional<double> lambda;               // constrained solver only
  std::optional<Uniqueness> classification;   // constrained solver only
  bool minnorm_fallback = false;              // unconstrained path hit a singular A^T A
  bool negative_first_component = false;      // unconstrained estimate left the feasible cone
  std::optional<ClsSolution> solution;        // full solver detail when available
};

// Constrained estimate: builds the linearized system in the reference frame,
// solves it exactly, and translates the position back to the caller's frame.
Estimate estimate_cls(const SensorArray& array, const RangeDiffSet& meas,
                      const SolveOptions& opts = {});

// Baseline that drops both quadratic constraints and solves the normal
// equations; a singular A^T A falls back to the minimum-norm solution and is
// flagged rather than thrown. Sign violations pass through untouched.
Estimate estimate_uls(const SensorArray& array, const RangeDiffSet& meas);

}  // namespace tdoa
