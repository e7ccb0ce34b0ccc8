#include "tdoa/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tdoa/errors.hpp"

namespace tdoa {
namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kSweepTol = 1e-14;
constexpr int kMaxSweeps = 100;
constexpr double kConditionLimit = 1e12;

double frobenius(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

void require_symmetric(const Matrix& s, const char* who) {
  if (s.rows() != s.cols()) throw std::invalid_argument(std::string(who) + ": matrix not square");
  const double scale = std::max(1.0, max_abs(s));
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = i + 1; j < s.cols(); ++j)
      if (std::abs(s(i, j) - s(j, i)) > kSymmetryTol * scale)
        throw std::invalid_argument(std::string(who) + ": matrix not symmetric");
}

bool is_symmetric(const Matrix& s) {
  if (s.rows() != s.cols()) return false;
  const double scale = std::max(1.0, max_abs(s));
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = i + 1; j < s.cols(); ++j)
      if (std::abs(s(i, j) - s(j, i)) > kSymmetryTol * scale) return false;
  return true;
}

// Fixes the sign of each eigenvector column: largest-magnitude component
// positive, first index winning ties.
void normalize_column_signs(Matrix& v) {
  for (std::size_t j = 0; j < v.cols(); ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.rows(); ++i)
      if (std::abs(v(i, j)) > std::abs(v(best, j))) best = i;
    if (v(best, j) < 0.0)
      for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
  }
}

Vector solve_general(const Matrix& s, const Vector& rhs) {
  const std::size_t n = s.rows();
  Matrix a = s;
  Vector x = rhs;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  double max_pivot = 0.0, min_pivot = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(x[k], x[p]);
    }
    const double pivot = a(k, k);
    const double mag = std::abs(pivot);
    max_pivot = std::max(max_pivot, mag);
    min_pivot = (k == 0) ? mag : std::min(min_pivot, mag);
    if (mag == 0.0 || max_pivot / mag > kConditionLimit)
      throw SingularMatrixError("solve_linear: matrix numerically singular");
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / pivot;
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      x[i] -= f * x[k];
    }
  }
  (void)min_pivot;
  for (std::size_t k = n; k-- > 0;) {
    double s2 = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s2 -= a(k, j) * x[j];
    x[k] = s2 / a(k, k);
  }
  return x;
}

}  // namespace

EigenDecomposition sym_eig(const Matrix& s) {
  require_symmetric(s, "sym_eig");
  const std::size_t n = s.rows();

  // Work on the symmetrized copy so sub-tolerance asymmetry cannot leak in.
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (s(i, j) + s(j, i));
  Matrix v = Matrix::identity(n);

  const double stop = kSweepTol * frobenius(a);
  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) > stop; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 1.0 / (2.0 * theta);
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        const double tau = sn / (1.0 + c);

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p), arq = a(r, q);
            a(r, p) = a(p, r) = arp - sn * (arq + tau * arp);
            a(r, q) = a(q, r) = arq + sn * (arp - tau * arq);
          }
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - sn * (vrq + tau * vrp);
          v(r, q) = vrq + sn * (vrp - tau * vrq);
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  normalize_column_signs(out.eigenvectors);
  return out;
}

double min_eigenvalue(const Matrix& s) { return sym_eig(s).eigenvalues.front(); }

Vector solve_linear(const Matrix& s, const Vector& rhs) {
  if (s.rows() != s.cols()) throw std::invalid_argument("solve_linear: matrix not square");
  if (s.rows() != rhs.size()) throw std::invalid_argument("solve_linear: rhs length mismatch");
  if (!is_symmetric(s)) return solve_general(s, rhs);

  const EigenDecomposition eig = sym_eig(s);
  double lo = std::abs(eig.eigenvalues[0]), hi = lo;
  for (double e : eig.eigenvalues) {
    lo = std::min(lo, std::abs(e));
    hi = std::max(hi, std::abs(e));
  }
  if (lo == 0.0 || hi / lo > kConditionLimit)
    throw SingularMatrixError("solve_linear: matrix numerically singular");

  const Vector projected = transpose_times(eig.eigenvectors, rhs);
  Vector scaled(projected.size());
  for (std::size_t k = 0; k < projected.size(); ++k) scaled[k] = projected[k] / eig.eigenvalues[k];
  return eig.eigenvectors * scaled;
}

Vector minnorm_solve(const Matrix& s, const Vector& rhs, double tol) {
  if (s.rows() != rhs.size()) throw std::invalid_argument("minnorm_solve: rhs length mismatch");
  const EigenDecomposition eig = sym_eig(s);
  double hi = 0.0;
  for (double e : eig.eigenvalues) hi = std::max(hi, std::abs(e));

  const Vector projected = transpose_times(eig.eigenvectors, rhs);
  Vector scaled(projected.size(), 0.0);
  for (std::size_t k = 0; k < projected.size(); ++k)
    if (std::abs(eig.eigenvalues[k]) > tol * hi) scaled[k] = projected[k] / eig.eigenvalues[k];
  return eig.eigenvectors * scaled;
}

}  // namespace tdoa
