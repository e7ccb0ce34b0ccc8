#include "tdoa/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "tdoa/errors.hpp"
#include "tdoa/numerics.hpp"

namespace tdoa {
namespace {

// Smallest pencil eigenvalue as a function of the multiplier: a pointwise
// infimum of affine functions, hence concave, nonnegative exactly on the
// closed positive-definite interval.
double pencil_floor(const LinearizedSystem& system, double lambda) {
  return min_eigenvalue(system.pencil(lambda));
}

// Bisection between a point where the pencil floor is nonpositive and one
// where it is positive. Returns the bracket midpoint after convergence.
double bisect_boundary(const std::function<double(double)>& phi, double outside, double inside,
                       const SpectrumOptions& opts) {
  const double initial_width = std::abs(inside - outside);
  const double stop = std::max(opts.tol_abs, opts.tol_rel * initial_width);
  while (std::abs(inside - outside) > stop) {
    const double mid = 0.5 * (outside + inside);
    if (mid == outside || mid == inside) break;  // hit floating point resolution
    (phi(mid) > 0.0 ? inside : outside) = mid;
  }
  return 0.5 * (outside + inside);
}

// Faddeev-LeVerrier coefficients of det(t*I - M), leading coefficient last.
std::vector<double> characteristic_polynomial(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<double> coeffs(n + 1, 0.0);
  coeffs[n] = 1.0;
  Matrix power = Matrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    power = m * power;
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += power(i, i);
    const double c = -trace / static_cast<double>(k);
    coeffs[n - k] = c;
    for (std::size_t i = 0; i < n; ++i) power(i, i) += c;
  }
  return coeffs;
}

double poly_eval(const std::vector<double>& coeffs, double t) {
  double v = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) v = v * t + coeffs[k];
  return v;
}

std::vector<double> poly_derivative(const std::vector<double>& coeffs) {
  std::vector<double> d(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k) d[k - 1] = coeffs[k] * static_cast<double>(k);
  return d;
}

// All real roots of a polynomial whose roots are known to be real: the roots
// of the derivative partition the line into monotone pieces, each holding at
// most one sign change; even-multiplicity roots are picked up at critical
// points where the polynomial nearly vanishes.
std::vector<double> real_roots(const std::vector<double>& coeffs) {
  const std::size_t degree = coeffs.size() - 1;
  if (degree == 0) return {};
  if (degree == 1) return {-coeffs[0] / coeffs[1]};

  double coeff_scale = 0.0;
  for (double c : coeffs) coeff_scale = std::max(coeff_scale, std::abs(c));
  const double bound = 1.0 + coeff_scale / std::abs(coeffs.back());  // Cauchy bound

  const std::vector<double> critical = real_roots(poly_derivative(coeffs));
  std::vector<double> edges = {-bound};
  edges.insert(edges.end(), critical.begin(), critical.end());
  edges.push_back(bound);
  std::sort(edges.begin(), edges.end());

  std::vector<double> roots;
  auto push_unique = [&](double r) {
    for (double seen : roots)
      if (std::abs(seen - r) <= 1e-9 * bound) return;
    roots.push_back(r);
  };

  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double lo = edges[i], hi = edges[i + 1];
    double flo = poly_eval(coeffs, lo), fhi = poly_eval(coeffs, hi);
    if (flo == 0.0) push_unique(lo);
    if (fhi == 0.0) push_unique(hi);
    if (flo * fhi >= 0.0) continue;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * bound; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const double fmid = poly_eval(coeffs, mid);
      if (fmid == 0.0) break;
      if ((fmid > 0.0) == (flo > 0.0)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
    }
    push_unique(0.5 * (lo + hi));
  }
  // Even-multiplicity roots sit at critical points without a sign change.
  for (double t : critical)
    if (std::abs(poly_eval(coeffs, t)) <= 1e-8 * coeff_scale * std::pow(std::max(1.0, std::abs(t)), degree))
      push_unique(t);
  std::sort(roots.begin(), roots.end());
  return roots;
}

// The pencil determinant vanishes exactly at the eigenvalues of
// -D * A^T A (the signature is involutive), which are all real whenever the
// pencil is positive definite somewhere. Verifies both singular points show
// up among those roots.
void cross_check_endpoints(const LinearizedSystem& system, double lambda_lower,
                           double lambda_upper) {
  const Matrix& g = system.gram();
  Matrix negated(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) negated(i, j) = (i == 0 ? -g(i, j) : g(i, j));

  const std::vector<double> roots = real_roots(characteristic_polynomial(negated));
  const double tol = 1e-6 * (1.0 + std::max(std::abs(lambda_lower), std::abs(lambda_upper)));
  for (double target : {lambda_lower, lambda_upper}) {
    bool found = false;
    for (double r : roots) found = found || std::abs(r - target) <= tol;
    if (!found)
      throw DegenerateSpectrumError(
          "pd_interval: determinant cross-check failed to confirm a singular point");
  }
}

}  // namespace

std::pair<std::vector<Vector>, int> null_direction(const LinearizedSystem& system,
                                                   double lambda_endpoint, double tol) {
  const EigenDecomposition eig = sym_eig(system.pencil(lambda_endpoint));
  const std::size_t n = eig.eigenvalues.size();
  const double scale =
      std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
  const double threshold = tol * std::max(scale, 1e-300);
  if (std::abs(eig.eigenvalues.front()) > threshold)
    throw std::invalid_argument("null_direction: pencil is not singular at this multiplier");

  std::vector<Vector> basis;
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(eig.eigenvalues[k]) <= threshold) basis.push_back(eig.eigenvectors.column(k));
  return {basis, static_cast<int>(basis.size())};
}

SpectrumInfo pd_interval(const LinearizedSystem& system, const SpectrumOptions& opts) {
  const Matrix& g = system.gram();
  const std::size_t n1 = g.rows();

  // Necessary-condition brackets for the two endpoints.
  const double bracket_lo = -g(0, 0);
  Matrix trailing(n1 - 1, n1 - 1);
  for (std::size_t i = 1; i < n1; ++i)
    for (std::size_t j = 1; j < n1; ++j) trailing(i - 1, j - 1) = g(i, j);
  const double bracket_hi = min_eigenvalue(trailing);
  if (!(bracket_lo < bracket_hi))
    throw DegenerateSpectrumError("pd_interval: endpoint brackets cross; no positive-definite multiplier");

  const auto phi = [&](double lambda) { return pencil_floor(system, lambda); };

  // A strictly feasible multiplier: zero when the Gram matrix is positive
  // definite, otherwise the concave maximum located by ternary search.
  double inside = 0.0;
  if (!(bracket_lo < 0.0 && 0.0 < bracket_hi && phi(0.0) > 0.0)) {
    double lo = bracket_lo, hi = bracket_hi;
    double best = lo, best_value = phi(lo);
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      const double f1 = phi(m1), f2 = phi(m2);
      if (f1 >= f2) {
        hi = m2;
        if (f1 > best_value) { best = m1; best_value = f1; }
      } else {
        lo = m1;
        if (f2 > best_value) { best = m2; best_value = f2; }
      }
      if (best_value > 0.0 || hi - lo < 1e-15 * (1.0 + std::abs(lo) + std::abs(hi))) break;
    }
    if (!(best_value > 0.0))
      throw DegenerateSpectrumError("pd_interval: pencil is never positive definite");
    inside = best;
  }

  SpectrumInfo info;
  info.lambda_lower = bisect_boundary(phi, bracket_lo, inside, opts);
  info.lambda_upper = bisect_boundary(phi, bracket_hi, inside, opts);

  const double slack = 1e-9 * (1.0 + std::abs(bracket_lo) + std::abs(bracket_hi));
  if (info.lambda_lower < bracket_lo - slack || info.lambda_upper > bracket_hi + slack)
    throw std::logic_error("pd_interval: endpoint escaped its derived bracket");
  if (!(info.lambda_lower < info.lambda_upper))
    throw DegenerateSpectrumError("pd_interval: interval collapsed");
  if (info.lambda_lower > slack || info.lambda_upper < -slack)
    throw std::logic_error("pd_interval: endpoints violate the sign layout (lower <= 0 <= upper)");
  if (!(phi(0.5 * (info.lambda_lower + info.lambda_upper)) > 0.0))
    throw DegenerateSpectrumError("pd_interval: midpoint is not positive definite");

  auto [null_lower, mult_lower] = null_direction(system, info.lambda_lower, opts.rank_tol);
  auto [null_upper, mult_upper] = null_direction(system, info.lambda_upper, opts.rank_tol);
  info.null_lower = std::move(null_lower);
  info.null_upper = std::move(null_upper);
  info.multiplicity_lower = mult_lower;
  info.multiplicity_upper = mult_upper;

  if (opts.cross_check) cross_check_endpoints(system, info.lambda_lower, info.lambda_upper);
  return info;
}

}  // namespace tdoa
