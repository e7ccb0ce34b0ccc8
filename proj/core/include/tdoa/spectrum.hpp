#pragma once

#include <utility>
#include <vector>

#include "tdoa/geometry.hpp"
#include "tdoa/matrix.hpp"

namespace tdoa {

struct SpectrumOptions {
  // Bisection stops when the bracket width drops below
  // max(tol_abs, tol_rel * initial width), or when the midpoint stalls.
  double tol_abs = 1e-10;
  double tol_rel = 1e-12;
  // Eigenvalues below rank_tol times the spectral radius count as zero when
  // extracting endpoint null spaces.
  double rank_tol = 1e-9;
  // Independent verification: the singular points must reappear among the
  // real roots of the pencil determinant polynomial within 1e-6.
  bool cross_check = false;
};

// The open interval of multipliers on which A^T A + lambda * diag(1, -I_n)
// is positive definite, together with the null directions and multiplicities
// at its two singular endpoints.
struct SpectrumInfo {
  double lambda_lower = 0.0;  // left singular point
  double lambda_upper = 0.0;  // right singular point
  std::vector<Vector> null_lower;
  std::vector<Vector> null_upper;
  int multiplicity_lower = 0;
  int multiplicity_upper = 0;
};

// Locates the positive-definite interval by sign bisection on the smallest
// eigenvalue of the pencil, which is concave in lambda, so the feasible set
// is an interval. Brackets come from two necessary conditions: the (0,0)
// entry bounds the left endpoint below by -gram(0,0), and test vectors with
// zero first component bound the right endpoint by the smallest eigenvalue
// of the trailing block. Throws DegenerateSpectrumError when no multiplier
// makes the pencil positive definite.
SpectrumInfo pd_interval(const LinearizedSystem& system, const SpectrumOptions& opts = {});

// Orthonormal basis (deterministic sign convention) of the pencil null space
// at a singular endpoint, with its multiplicity. Throws std::invalid_argument
// if the pencil is not singular there within tolerance.
std::pair<std::vector<Vector>, int> null_direction(const LinearizedSystem& system,
                                                   double lambda_endpoint, double tol = 1e-9);

}  // namespace tdoa
