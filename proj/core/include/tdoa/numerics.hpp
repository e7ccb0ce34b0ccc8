#pragma once

#include "tdoa/matrix.hpp"

namespace tdoa {

struct EigenDecomposition {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal; column k pairs with eigenvalues[k]
};

// Full symmetric eigendecomposition by cyclic Jacobi rotations. Sweeps run
// until the off-diagonal norm drops below 1e-14 times the input norm, capped
// at 100 sweeps; matrices here are at most 4x4 so this always converges.
// Eigenvector signs are normalized so the largest-magnitude component of
// each column is positive, which makes the output deterministic.
// Throws std::invalid_argument if the input is not symmetric within 1e-12
// relative.
EigenDecomposition sym_eig(const Matrix& s);

// Smallest algebraic eigenvalue.
double min_eigenvalue(const Matrix& s);

// Solves s*y = rhs. Symmetric inputs go through the eigendecomposition with
// the condition number estimated as the eigenvalue magnitude ratio; general
// square inputs fall back to partially pivoted elimination. Throws
// SingularMatrixError when the condition estimate exceeds 1e12.
Vector solve_linear(const Matrix& s, const Vector& rhs);

// Minimum-norm least-squares solve of a symmetric system: eigenvalues with
// |value| <= tol * max|value| are truncated and the solve is carried out on
// the remaining eigenspace.
Vector minnorm_solve(const Matrix& s, const Vector& rhs, double tol = 1e-9);

}  // namespace tdoa
