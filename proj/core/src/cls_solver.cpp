#include "tdoa/cls_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tdoa/errors.hpp"
#include "tdoa/numerics.hpp"

namespace tdoa {
namespace {

double derived_tol_h(const LinearizedSystem& system, const SolveOptions& opts) {
  if (opts.tol_h > 0.0) return opts.tol_h;
  const double bn = norm(system.b());
  return 1e-12 * (1.0 + bn * bn);
}

double sign_threshold(const Vector& y, const SolveOptions& opts) {
  const double factor = opts.tol_sign > 0.0 ? opts.tol_sign : 1e-9;
  return factor * (1.0 + norm(y));
}

double lambda_tolerance(const SpectrumInfo& spectrum) {
  return 1e-8 * (1.0 + std::abs(spectrum.lambda_upper));
}

struct PathPoint {
  double lambda = 0.0;
  double h = 0.0;
};

// Constraint path sampled a safe distance inside an endpoint; ill-conditioned
// pencils push the sample further inward.
PathPoint sample_inside(const LinearizedSystem& system, double endpoint, double inward,
                        double width, double margin) {
  double eps = margin * width;
  for (int attempt = 0; attempt < 4; ++attempt, eps *= 10.0) {
    const double lambda = endpoint + inward * eps;
    try {
      return {lambda, h_of_lambda(system, lambda)};
    } catch (const SingularMatrixError&) {
    }
  }
  throw SolverError("gtrs_solve: constraint path not evaluable near an interval endpoint");
}

// Sign bisection on the constraint path, then a few guarded Newton
// corrections with a centered-difference slope.
double refine_constraint_root(const LinearizedSystem& system, PathPoint a, PathPoint b,
                              double tol_h, double floor_width, int polish_steps) {
  const double lo = std::min(a.lambda, b.lambda);
  const double hi = std::max(a.lambda, b.lambda);
  PathPoint best = std::abs(a.h) < std::abs(b.h) ? a : b;

  while (std::abs(b.lambda - a.lambda) > floor_width) {
    const double mid = 0.5 * (a.lambda + b.lambda);
    if (mid == a.lambda || mid == b.lambda) break;
    double hm;
    try {
      hm = h_of_lambda(system, mid);
    } catch (const SingularMatrixError&) {
      break;
    }
    if (std::abs(hm) < std::abs(best.h)) best = {mid, hm};
    if (std::abs(hm) <= tol_h) break;
    ((hm > 0.0) == (a.h > 0.0) ? a : b) = {mid, hm};
  }

  for (int step = 0; step < polish_steps; ++step) {
    const double delta = 1e-8 * (1.0 + std::abs(best.lambda));
    if (best.lambda - delta <= lo || best.lambda + delta >= hi) break;
    double hl, hr;
    try {
      hl = h_of_lambda(system, best.lambda - delta);
      hr = h_of_lambda(system, best.lambda + delta);
    } catch (const SingularMatrixError&) {
      break;
    }
    const double slope = (hr - hl) / (2.0 * delta);
    if (slope == 0.0) break;
    const double next = best.lambda - best.h / slope;
    if (!(next > lo && next < hi)) break;
    double hn;
    try {
      hn = h_of_lambda(system, next);
    } catch (const SingularMatrixError&) {
      break;
    }
    if (std::abs(hn) >= std::abs(best.h)) break;
    best = {next, hn};
  }
  return best.lambda;
}

// Endpoint completions run along one null direction. Multiplicity one leaves
// no choice; otherwise prefer a direction with strictly negative signature
// so the completion quadratic keeps real roots.
const Vector& pick_null_direction(const std::vector<Vector>& basis) {
  for (const Vector& z : basis)
    if (signature_quadratic(z) < -1e-12) return z;
  return basis.front();
}

}  // namespace

Vector y_of_lambda(const LinearizedSystem& system, double lambda) {
  return solve_linear(system.pencil(lambda), system.normal_rhs());
}

double h_of_lambda(const LinearizedSystem& system, double lambda) {
  return system.constraint(y_of_lambda(system, lambda));
}

std::vector<CandidatePoint> endpoint_candidates(const LinearizedSystem& system,
                                                double lambda_endpoint, const Vector& y_star,
                                                const Vector& z, double tol) {
  (void)system;
  (void)lambda_endpoint;
  if (z.size() != y_star.size())
    throw std::invalid_argument("endpoint_candidates: direction length mismatch");
  if (std::abs(norm(z) - 1.0) > 1e-8)
    throw std::invalid_argument("endpoint_candidates: null direction must be a unit vector");

  const double qa = signature_quadratic(z);
  const double qb = 2.0 * dot(y_star, apply_signature(z));
  const double qc = signature_quadratic(y_star);
  const double magnitude = std::abs(qa) + std::abs(qb) + std::abs(qc);

  std::vector<double> alphas;
  if (std::abs(qa) <= 1e-14 * std::max(magnitude, 1e-300)) {
    if (std::abs(qb) <= 1e-14 * std::max(magnitude, 1e-300))
      throw NoRealCandidateError("endpoint_candidates: completion quadratic is degenerate");
    alphas.push_back(-qc / qb);
  } else {
    double disc = qb * qb - 4.0 * qa * qc;
    const double disc_scale = qb * qb + std::abs(4.0 * qa * qc);
    if (disc < 0.0) {
      if (disc < -tol * std::max(disc_scale, 1e-300))
        throw NoRealCandidateError("endpoint_candidates: completion quadratic has complex roots");
      disc = 0.0;
    }
    const double root = std::sqrt(disc);
    const double q = -0.5 * (qb + std::copysign(root, qb));
    if (q == 0.0) {
      alphas.push_back(0.0);  // double root at zero
    } else {
      alphas.push_back(q / qa);
      alphas.push_back(qc / q);
    }
  }

  std::sort(alphas.begin(), alphas.end(), std::greater<>());
  std::vector<CandidatePoint> out;
  for (double alpha : alphas) {
    // A double root yields one candidate.
    if (!out.empty() && std::abs(out.back().alpha - alpha) <= tol * (1.0 + norm(y_star))) continue;
    out.push_back({alpha, y_star + alpha * z});
  }
  return out;
}

GtrsResult gtrs_solve(const LinearizedSystem& system, const SpectrumInfo& spectrum,
                      const SolveOptions& opts) {
  const double width = spectrum.lambda_upper - spectrum.lambda_lower;
  const double tol_h = derived_tol_h(system, opts);
  const double floor_width = opts.width_floor * width;

  const PathPoint near_lower =
      sample_inside(system, spectrum.lambda_lower, +1.0, width, opts.endpoint_margin);
  const PathPoint near_upper =
      sample_inside(system, spectrum.lambda_upper, -1.0, width, opts.endpoint_margin);

  GtrsResult result;
  if (std::abs(near_lower.h) <= tol_h || std::abs(near_upper.h) <= tol_h ||
      (near_lower.h > 0.0 && near_upper.h < 0.0)) {
    double lambda;
    if (std::abs(near_lower.h) <= tol_h)
      lambda = near_lower.lambda;
    else if (std::abs(near_upper.h) <= tol_h)
      lambda = near_upper.lambda;
    else
      lambda = refine_constraint_root(system, near_lower, near_upper, tol_h, floor_width,
                                      opts.polish_steps);
    result.branch = SolveBranch::InteriorRoot;
    result.lambda = lambda;
    result.y = y_of_lambda(system, lambda);
    return result;
  }

  // With no interior sign change the optimal multiplier is pinned at an
  // endpoint: nonpositive values push it left, positive values push it right.
  const bool left = near_lower.h <= 0.0;
  result.branch = left ? SolveBranch::LeftEndpoint : SolveBranch::RightEndpoint;
  result.lambda = left ? spectrum.lambda_lower : spectrum.lambda_upper;
  result.y = minnorm_solve(system.pencil(result.lambda), system.normal_rhs(),
                           opts.spectrum.rank_tol);

  const auto& basis = left ? spectrum.null_lower : spectrum.null_upper;
  if (basis.empty()) throw std::logic_error("gtrs_solve: singular endpoint without a null basis");
  try {
    result.candidates = endpoint_candidates(system, result.lambda, result.y,
                                            pick_null_direction(basis), opts.dedupe_tol);
  } catch (const NoRealCandidateError&) {
    result.no_real_candidates = true;
  }
  return result;
}

std::vector<std::pair<double, Vector>> idi_roots(const LinearizedSystem& system,
                                                 const SpectrumInfo& spectrum,
                                                 const SolveOptions& opts) {
  const double tol_h = derived_tol_h(system, opts);
  const double floor_width = opts.width_floor * (spectrum.lambda_upper - spectrum.lambda_lower);
  const double lambda_l = spectrum.lambda_lower;

  std::vector<std::pair<double, Vector>> roots;
  auto add_root = [&](double lambda) { roots.emplace_back(lambda, y_of_lambda(system, lambda)); };

  double delta = std::max(1e-6, 1e-6 * std::abs(lambda_l));
  PathPoint prev{};
  bool have_start = false;
  for (int attempt = 0; attempt < 4 && !have_start; ++attempt, delta *= 10.0) {
    try {
      prev = {lambda_l - delta, h_of_lambda(system, lambda_l - delta)};
      have_start = true;
    } catch (const SingularMatrixError&) {
    }
  }
  if (!have_start) return roots;
  if (std::abs(prev.h) <= tol_h) add_root(prev.lambda);

  double step = opts.initial_idi_step > 0.0 ? opts.initial_idi_step
                                            : std::max(1.0, std::abs(lambda_l));
  for (int k = 0; k < opts.idi_max_expansions; ++k, step *= 2.0) {
    const double lambda = prev.lambda - step;
    double h;
    try {
      h = h_of_lambda(system, lambda);
    } catch (const SingularMatrixError&) {
      prev.lambda = lambda;
      continue;
    }
    if (std::abs(h) <= tol_h) {
      add_root(lambda);
    } else if (std::abs(prev.h) > tol_h && prev.h * h < 0.0) {
      add_root(refine_constraint_root(system, {lambda, h}, prev, tol_h, floor_width,
                                      opts.polish_steps));
    }
    prev = {lambda, h};
  }
  return roots;
}

KktCertificate verify_kkt(const LinearizedSystem& system, const Vector& y, double lambda,
                          const SpectrumInfo& spectrum, const SolveOptions& opts) {
  KktCertificate cert;
  cert.lambda = lambda;
  cert.stationarity_residual = norm(system.pencil(lambda) * y - system.normal_rhs());
  cert.feasibility_residual = std::abs(system.constraint(y));
  cert.sign_ok = y[0] >= -sign_threshold(y, opts);
  cert.lambda_in_interval = lambda <= spectrum.lambda_upper + lambda_tolerance(spectrum);

  const double yn = norm(y);
  cert.valid = cert.stationarity_residual <= opts.kkt_tol * (1.0 + norm(system.normal_rhs())) &&
               cert.feasibility_residual <= opts.feas_tol * (1.0 + yn * yn) && cert.sign_ok &&
               cert.lambda_in_interval;
  return cert;
}

Uniqueness classify_uniqueness(const LinearizedSystem& system, const SpectrumInfo& spectrum,
                               const std::vector<Vector>& feasible_candidates, double lambda,
                               const SolveOptions& opts) {
  (void)system;
  (void)opts;
  if (feasible_candidates.empty()) return Uniqueness::OriginOnly;
  if (lambda < spectrum.lambda_upper - lambda_tolerance(spectrum)) return Uniqueness::Unique;
  if (spectrum.multiplicity_upper >= 2) return Uniqueness::Continuum;
  return feasible_candidates.size() >= 2 ? Uniqueness::TwoPoint : Uniqueness::Unique;
}

ClsSolution solve_cls(const LinearizedSystem& system, const SolveOptions& opts) {
  const std::size_t width = system.gram().rows();

  // Zero right-hand side: the measurements place the source on the reference
  // sensor, and the origin is the unique optimizer.
  const double matrix_scale = max_abs(system.a());
  if (norm(system.b()) <= opts.b_zero_tol * (1.0 + matrix_scale * matrix_scale)) {
    ClsSolution out;
    out.y = Vector(width, 0.0);
    out.x_hat = Vector(width - 1, 0.0);
    out.lambda = 0.0;
    out.objective = system.objective(out.y);
    out.branch = SolveBranch::CollinearB0;
    out.classification = Uniqueness::Unique;
    out.certificate.stationarity_residual = norm(system.normal_rhs());
    out.certificate.feasibility_residual = 0.0;
    out.certificate.sign_ok = true;
    out.certificate.lambda = 0.0;
    out.certificate.lambda_in_interval = true;  // zero always belongs to the interval
    out.certificate.valid = out.certificate.stationarity_residual <=
                            opts.kkt_tol * (1.0 + norm(system.normal_rhs()));
    return out;
  }

  const SpectrumInfo spectrum = pd_interval(system, opts.spectrum);
  const GtrsResult gtrs = gtrs_solve(system, spectrum, opts);

  struct Scored {
    Vector y;
    double lambda;
    SolveBranch branch;
    double objective;
  };
  std::vector<Scored> feasible;
  auto consider = [&](const Vector& y, double lambda, SolveBranch branch) {
    if (y[0] <= sign_threshold(y, opts)) return;
    for (const Scored& seen : feasible)
      if (max_abs_diff(seen.y, y) <= opts.dedupe_tol * (1.0 + norm(y))) return;
    feasible.push_back({y, lambda, branch, system.objective(y)});
  };

  if (gtrs.branch == SolveBranch::InteriorRoot) {
    consider(gtrs.y, gtrs.lambda, SolveBranch::InteriorRoot);
  } else {
    for (const CandidatePoint& c : gtrs.candidates) consider(c.y, gtrs.lambda, gtrs.branch);
  }

  if (feasible.empty())
    for (const auto& [lambda, y] : idi_roots(system, spectrum, opts))
      consider(y, lambda, SolveBranch::IdiRoot);

  // A sign-infeasible interior root with an empty scan can still leave
  // stationary points at the endpoints when the shifted normal equations
  // stay consistent there.
  if (feasible.empty() && gtrs.branch == SolveBranch::InteriorRoot) {
    const double consistency = opts.kkt_tol * (1.0 + norm(system.normal_rhs()));
    for (int side = 0; side < 2; ++side) {
      const double lambda = side == 0 ? spectrum.lambda_lower : spectrum.lambda_upper;
      const auto& basis = side == 0 ? spectrum.null_lower : spectrum.null_upper;
      if (basis.empty()) continue;
      const Vector y_star =
          minnorm_solve(system.pencil(lambda), system.normal_rhs(), opts.spectrum.rank_tol);
      if (norm(system.pencil(lambda) * y_star - system.normal_rhs()) > consistency) continue;
      try {
        for (const CandidatePoint& c : endpoint_candidates(
                 system, lambda, y_star, pick_null_direction(basis), opts.dedupe_tol))
          consider(c.y, lambda,
                   side == 0 ? SolveBranch::LeftEndpoint : SolveBranch::RightEndpoint);
      } catch (const NoRealCandidateError&) {
      }
    }
  }

  ClsSolution out;
  if (feasible.empty()) {
    out.y = Vector(width, 0.0);
    out.x_hat = Vector(width - 1, 0.0);
    out.lambda = 0.0;
    out.objective = system.objective(out.y);
    out.branch = SolveBranch::Origin;
    out.classification = Uniqueness::OriginOnly;
    out.certificate = verify_kkt(system, out.y, out.lambda, spectrum, opts);
    return out;
  }

  std::stable_sort(feasible.begin(), feasible.end(),
                   [](const Scored& a, const Scored& b) { return a.objective < b.objective; });
  const Scored* chosen = &feasible.front();

  std::vector<Vector> candidate_ys;
  candidate_ys.reserve(feasible.size());
  for (const Scored& s : feasible) candidate_ys.push_back(s.y);
  out.classification =
      classify_uniqueness(system, spectrum, candidate_ys, chosen->lambda, opts);

  if (out.classification == Uniqueness::TwoPoint) out.second_y = feasible[1].y;
  if (out.classification == Uniqueness::Continuum) {
    // Report the family: limit point plus the null directions that generate
    // it, and pick the representative with the largest first component among
    // the equally optimal completions.
    out.continuum_base = gtrs.y;
    out.continuum_basis = spectrum.null_upper;
    const double f_tol = 1e-9 * (1.0 + chosen->objective);
    for (const Scored& s : feasible)
      if (s.objective <= chosen->objective + f_tol && s.y[0] > chosen->y[0]) chosen = &s;
  }

  out.y = chosen->y;
  out.x_hat = Vector(chosen->y.begin() + 1, chosen->y.end());
  out.lambda = chosen->lambda;
  out.objective = chosen->objective;
  out.branch = chosen->branch;
  out.certificate = verify_kkt(system, out.y, out.lambda, spectrum, opts);
  return out;
}

}  // namespace tdoa
