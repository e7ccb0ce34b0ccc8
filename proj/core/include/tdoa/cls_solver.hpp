#pragma once

#include <optional>
#include <vector>

#include "tdoa/geometry.hpp"
#include "tdoa/spectrum.hpp"

namespace tdoa {

enum class SolveBranch {
  CollinearB0,    // zero right-hand side shortcut: origin is optimal
  InteriorRoot,   // constraint root inside the positive-definite interval
  LeftEndpoint,   // multiplier pinned at the left singular point
  RightEndpoint,  // multiplier pinned at the right singular point
  IdiRoot,        // constraint root left of the positive-definite interval
  Origin,         // no feasible stationary point anywhere
};

enum class Uniqueness { Unique, TwoPoint, Continuum, OriginOnly };

struct SolveOptions {
  // Zero-valued entries are derived from the problem scale at solve time:
  //   tol_h    -> 1e-12 * (1 + ||b||^2)
  //   tol_sign -> factor 1e-9, applied as factor * (1 + ||y||)
  double tol_h = 0.0;
  double tol_sign = 0.0;
  double kkt_tol = 1e-8;       // stationarity, scaled by 1 + ||A^T b||
  double feas_tol = 1e-8;      // |g(y)|, scaled by 1 + ||y||^2
  double b_zero_tol = 1e-12;   // ||b|| threshold for the zero-rhs shortcut
  double endpoint_margin = 1e-6;   // h sampled at the endpoints +- margin * width
  double width_floor = 1e-14;      // bisection bracket floor, relative to the interval width
  int polish_steps = 2;            // Newton corrections after bisection
  double dedupe_tol = 1e-8;        // candidate merge distance, scaled by 1 + ||y||
  double initial_idi_step = 0.0;   // 0 -> max(1, |lambda_lower|)
  int idi_max_expansions = 60;
  SpectrumOptions spectrum;
};

// Residual witnesses for the optimality conditions: stationarity of the
// shifted normal equations, constraint feasibility, the sign of the first
// component, and multiplier membership in (-inf, lambda_upper].
struct KktCertificate {
  double stationarity_residual = 0.0;
  double feasibility_residual = 0.0;
  bool sign_ok = false;
  double lambda = 0.0;
  bool lambda_in_interval = false;
  bool valid = false;
};

struct CandidatePoint {
  double alpha = 0.0;
  Vector y;
};

struct GtrsResult {
  SolveBranch branch = SolveBranch::InteriorRoot;
  double lambda = 0.0;
  // Interior branch: the stationary point at lambda. Endpoint branches: the
  // limit point of the stationary path.
  Vector y;
  // Endpoint branches only: completions along the null direction.
  std::vector<CandidatePoint> candidates;
  bool no_real_candidates = false;
};

struct ClsSolution {
  Vector y;       // optimizer in homogeneous form [range, position]
  Vector x_hat;   // trailing components of y (the system's coordinate frame)
  double lambda = 0.0;
  double objective = 0.0;
  Uniqueness classification = Uniqueness::Unique;
  SolveBranch branch = SolveBranch::InteriorRoot;
  KktCertificate certificate;
  std::optional<Vector> second_y;          // TwoPoint: the other optimizer
  std::optional<Vector> continuum_base;    // Continuum: limit point
  std::vector<Vector> continuum_basis;     // Continuum: null directions at the right endpoint
};

// Stationary point of the shifted normal equations at a fixed multiplier.
// Throws SingularMatrixError where the pencil is numerically singular.
Vector y_of_lambda(const LinearizedSystem& system, double lambda);

// Constraint value along the stationary path; strictly decreasing on the
// positive-definite interval when b != 0.
double h_of_lambda(const LinearizedSystem& system, double lambda);

// Minimizes the objective subject to the quadratic constraint alone, over
// the closed positive-definite interval: samples the constraint path near
// both endpoints, bisects to the interior root when the signs straddle zero,
// otherwise forms the limit point at the pinned endpoint and completes it
// along the null direction.
GtrsResult gtrs_solve(const LinearizedSystem& system, const SpectrumInfo& spectrum,
                      const SolveOptions& opts = {});

// Roots of the scalar quadratic g(z) a^2 + 2 y*^T D z a + g(y*) = 0, returned
// as completions y* + a z, alpha descending. Throws NoRealCandidateError when
// the discriminant is negative beyond tolerance.
std::vector<CandidatePoint> endpoint_candidates(const LinearizedSystem& system,
                                                double lambda_endpoint, const Vector& y_star,
                                                const Vector& z, double tol = 1e-8);

// Scans the indefinite interval left of the positive-definite one on a
// doubling grid and bisects every sign change of the constraint path.
// Returns all roots found (possibly none) with their stationary points.
std::vector<std::pair<double, Vector>> idi_roots(const LinearizedSystem& system,
                                                 const SpectrumInfo& spectrum,
                                                 const SolveOptions& opts = {});

// Recomputes every certificate field from scratch for a proposed
// (y, multiplier) pair.
KktCertificate verify_kkt(const LinearizedSystem& system, const Vector& y, double lambda,
                          const SpectrumInfo& spectrum, const SolveOptions& opts = {});

// Multiplicity classification given the feasible candidates and the optimal
// multiplier: strictly inside the interval means a unique optimizer; at the
// right endpoint the null multiplicity separates a two-point set from a
// continuum; no candidates means the origin alone.
Uniqueness classify_uniqueness(const LinearizedSystem& system, const SpectrumInfo& spectrum,
                               const std::vector<Vector>& feasible_candidates, double lambda,
                               const SolveOptions& opts = {});

// Full pipeline: zero-rhs shortcut, interval computation, constrained
// minimization over the closed interval, fallback scan of the indefinite
// interval, sign filtering, global certification, and classification.
ClsSolution solve_cls(const LinearizedSystem& system, const SolveOptions& opts = {});

}  // namespace tdoa
