#pragma once

#include <stdexcept>
#include <string>

namespace tdoa {

// Base class for failures raised while solving; callers that sweep many
// problems (the Monte Carlo runner) catch this and count the trial as failed.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linear solve rejected because the matrix is numerically singular
// (condition estimate beyond 1e12).
class SingularMatrixError : public SolverError {
 public:
  using SolverError::SolverError;
};

// No multiplier makes the shifted Gram matrix positive definite, so the
// positive-definite interval is empty and the solve cannot proceed.
class DegenerateSpectrumError : public SolverError {
 public:
  using SolverError::SolverError;
};

// The endpoint completion quadratic has no real roots.
class NoRealCandidateError : public SolverError {
 public:
  using SolverError::SolverError;
};

// Scenario file missing, malformed, or violating the schema. Kept separate
// from SolverError so the CLI can map it to a usage error.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tdoa
