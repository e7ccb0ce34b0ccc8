#include "tdoa/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "tdoa/numerics.hpp"
#include "tdoa/rng.hpp"

namespace tdoa {
namespace {

constexpr double kRankTol = 1e-9;        // singular values below this fraction of the largest are noise
constexpr double kDegenerateTol = 1e-12;

double distance(const Vector& a, const Vector& b) { return norm(a - b); }

// Numerical rank and smallest singular value of a (rows x n) matrix via the
// eigenvalues of its Gram matrix.
std::pair<int, double> rank_and_min_singular(const Matrix& m) {
  const EigenDecomposition eig = sym_eig(gram(m));
  const std::size_t n = eig.eigenvalues.size();
  const double top = std::sqrt(std::max(eig.eigenvalues[n - 1], 0.0));
  int rank = 0;
  for (double e : eig.eigenvalues)
    if (std::sqrt(std::max(e, 0.0)) > kRankTol * top) ++rank;
  const double smallest = std::sqrt(std::max(eig.eigenvalues[0], 0.0));
  return {rank, smallest};
}

}  // namespace

SensorArray::SensorArray(Vector reference, std::vector<Vector> sensors)
    : reference_(std::move(reference)), sensors_(std::move(sensors)) {
  if (reference_.size() != 2 && reference_.size() != 3)
    throw std::invalid_argument("SensorArray: dimension must be 2 or 3");
  if (sensors_.empty()) throw std::invalid_argument("SensorArray: need at least one sensor");
  dim_ = static_cast<int>(reference_.size());

  double scale = norm(reference_);
  offsets_.reserve(sensors_.size());
  for (const Vector& s : sensors_) {
    if (s.size() != reference_.size())
      throw std::invalid_argument("SensorArray: sensor dimension mismatch");
    offsets_.push_back(s - reference_);
    scale = std::max(scale, norm(s));
  }
  for (const Vector& o : offsets_)
    if (norm(o) <= kDegenerateTol * std::max(1.0, scale)) coincident_ = true;
}

LinearizedSystem::LinearizedSystem(Matrix a, Vector b, int dim)
    : a_(std::move(a)), b_(std::move(b)), dim_(dim) {
  if (a_.cols() != static_cast<std::size_t>(dim_) + 1)
    throw std::invalid_argument("LinearizedSystem: matrix must have dim + 1 columns");
  if (a_.rows() != b_.size())
    throw std::invalid_argument("LinearizedSystem: row count and rhs length differ");
  gram_ = gram(a_);
  normal_rhs_ = transpose_times(a_, b_);
}

Matrix LinearizedSystem::pencil(double lambda) const {
  Matrix m = gram_;
  m(0, 0) += lambda;
  for (std::size_t i = 1; i < m.rows(); ++i) m(i, i) -= lambda;
  return m;
}

double LinearizedSystem::objective(const Vector& y) const {
  const Vector r = a_ * y - b_;
  return dot(r, r);
}

double LinearizedSystem::constraint(const Vector& y) const { return signature_quadratic(y); }

Vector apply_signature(Vector y) {
  for (std::size_t i = 1; i < y.size(); ++i) y[i] = -y[i];
  return y;
}

double signature_quadratic(const Vector& y) {
  double s = y[0] * y[0];
  for (std::size_t i = 1; i < y.size(); ++i) s -= y[i] * y[i];
  return s;
}

RangeDiffSet simulate_measurements(const SensorArray& array, const Vector& source, double sigma,
                                   std::uint64_t seed) {
  if (source.size() != static_cast<std::size_t>(array.dim()))
    throw std::invalid_argument("simulate_measurements: source dimension mismatch");
  if (sigma < 0.0) throw std::invalid_argument("simulate_measurements: sigma must be nonnegative");

  const double reference_range = distance(source, array.reference());
  RangeDiffSet out;
  out.values.resize(array.count());
  out.provenance = RangeDiffSet::Provenance::Simulated;
  out.sigma = sigma;
  out.seed = seed;

  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < array.count(); ++i) {
    double d = distance(array.sensor(i), source) - reference_range;
    if (sigma > 0.0) d += sigma * rng.next_gaussian();
    out.values[i] = d;
  }
  return out;
}

LinearizedSystem build_system(const SensorArray& array, const RangeDiffSet& meas) {
  if (meas.values.size() != array.count())
    throw std::invalid_argument("build_system: measurement count does not match sensor count");

  const std::size_t m = array.count();
  const std::size_t n = static_cast<std::size_t>(array.dim());
  Matrix a(m, n + 1);
  Vector b(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vector& s = array.offset(i);
    const double d = meas.values[i];
    a(i, 0) = d;
    for (std::size_t j = 0; j < n; ++j) a(i, j + 1) = s[j];
    b[i] = 0.5 * (dot(s, s) - d * d);
  }
  return LinearizedSystem(std::move(a), std::move(b), array.dim());
}

namespace {

// Shared precondition for both Jacobians: the probe must not sit at the
// reference or at any sensor.
void require_regular_probe(const SensorArray& array, const Vector& x) {
  if (x.size() != static_cast<std::size_t>(array.dim()))
    throw std::invalid_argument("jacobian: probe dimension mismatch");
  double scale = 1.0 + norm(x);
  for (std::size_t i = 0; i < array.count(); ++i) scale = std::max(scale, 1.0 + norm(array.offset(i)));
  if (norm(x) <= kDegenerateTol * scale)
    throw std::domain_error("jacobian: probe position at the reference sensor");
  for (std::size_t i = 0; i < array.count(); ++i)
    if (distance(array.offset(i), x) <= kDegenerateTol * scale)
      throw std::domain_error("jacobian: probe position at a sensor");
}

bool probe_is_regular(const SensorArray& array, const Vector& x) {
  try {
    require_regular_probe(array, x);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace

Matrix jacobian_j0(const SensorArray& array, const Vector& x) {
  require_regular_probe(array, x);
  const std::size_t m = array.count();
  const std::size_t n = x.size();
  const double xn = norm(x);

  Matrix j(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const Vector to_sensor = array.offset(i) - x;
    const double dn = norm(to_sensor);
    for (std::size_t k = 0; k < n; ++k) j(i, k) = -(x[k] / xn + to_sensor[k] / dn);
  }
  return j;
}

Matrix jacobian_j(const SensorArray& array, const Vector& x) {
  require_regular_probe(array, x);
  const std::size_t m = array.count();
  const std::size_t n = x.size();
  const double xn = norm(x);

  Matrix j(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const Vector& s = array.offset(i);
    const double w = distance(s, x) - xn;
    for (std::size_t k = 0; k < n; ++k) j(i, k) = w * x[k] / xn + s[k];
  }
  return j;
}

PeReport check_local_pe(const SensorArray& array, const std::optional<Vector>& x) {
  const std::size_t m = array.count();
  const std::size_t n = static_cast<std::size_t>(array.dim());

  Matrix offsets(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k) offsets(i, k) = array.offset(i)[k];
  const auto [span_rank, span_min_sv] = rank_and_min_singular(offsets);
  (void)span_min_sv;

  PeReport report;
  report.collinear_or_coplanar = span_rank < static_cast<int>(n);

  if (!x) {
    report.pe_holds = !report.collinear_or_coplanar;
    return report;
  }
  if (!probe_is_regular(array, *x)) {
    report.jacobian_rank = 0;
    report.jacobian_min_singular_value = 0.0;
    report.pe_holds = false;
    return report;
  }
  const auto [rank, min_sv] = rank_and_min_singular(jacobian_j(array, *x));
  report.jacobian_rank = rank;
  report.jacobian_min_singular_value = min_sv;
  report.pe_holds = rank == static_cast<int>(n);
  return report;
}

Assumption1Report check_assumption1(const LinearizedSystem& system, const SensorArray& array,
                                    int num_samples, std::uint64_t seed) {
  if (num_samples < 1) throw std::invalid_argument("check_assumption1: need num_samples >= 1");

  double scale = 1.0;
  for (std::size_t i = 0; i < array.count(); ++i) scale = std::max(scale, norm(array.offset(i)));
  const double pass_threshold = 1e-9 * scale;

  Assumption1Report report;
  report.a_gram_min_eig = min_eigenvalue(system.gram());
  report.min_norm_seen = std::numeric_limits<double>::infinity();

  SplitMix64 rng(seed);
  const std::size_t n = static_cast<std::size_t>(array.dim());
  for (int s = 0; s < num_samples; ++s) {
    Vector x(n);
    double xn = 0.0;
    do {
      for (std::size_t k = 0; k < n; ++k) x[k] = rng.next_gaussian();
      xn = norm(x);
    } while (xn < 1e-3);
    for (std::size_t k = 0; k < n; ++k) x[k] /= xn;

    // (J(x) x)_i = w_i ||x|| + a_i^T x, free of divisions, so degenerate
    // probes need no special casing.
    double sq = 0.0;
    for (std::size_t i = 0; i < array.count(); ++i) {
      const Vector& a = array.offset(i);
      const double entry = (distance(a, x) - 1.0) + dot(a, x);
      sq += entry * entry;
    }
    const double value = std::sqrt(sq);
    report.min_norm_seen = std::min(report.min_norm_seen, value);
    if (value > pass_threshold) ++report.passed_samples;
  }
  return report;
}

}  // namespace tdoa
