#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tdoa/matrix.hpp"

namespace tdoa {

// A reference sensor plus m auxiliary sensors in n dimensions (n = 2 or 3).
// The reference may sit anywhere; all internal computations run in the frame
// translated so the reference is the origin, and position estimates are
// translated back before they are returned to the caller.
class SensorArray {
 public:
  SensorArray(Vector reference, std::vector<Vector> sensors);

  int dim() const { return dim_; }
  std::size_t count() const { return sensors_.size(); }  // m
  const Vector& reference() const { return reference_; }
  const Vector& sensor(std::size_t i) const { return sensors_[i]; }

  // Sensor position in the reference-at-origin frame.
  const Vector& offset(std::size_t i) const { return offsets_[i]; }

  // True when some sensor coincides with the reference. Such arrays are
  // accepted (synthetic fixtures use them) but the coincident rows carry no
  // geometric information beyond their range difference.
  bool has_coincident_sensor() const { return coincident_; }

 private:
  int dim_;
  Vector reference_;
  std::vector<Vector> sensors_;
  std::vector<Vector> offsets_;
  bool coincident_ = false;
};

struct RangeDiffSet {
  enum class Provenance { Measured, Simulated };

  Vector values;  // d_i, meters
  Provenance provenance = Provenance::Measured;
  double sigma = 0.0;       // simulated only
  std::uint64_t seed = 0;   // simulated only
};

// The least squares data assembled from an array and its measurements:
// row i of the design matrix is [d_i, a_i^T], the right-hand side is
// b_i = (||a_i||^2 - d_i^2) / 2, and the constraint carries the signature
// diag(1, -I_n), stored implicitly.
class LinearizedSystem {
 public:
  LinearizedSystem(Matrix a, Vector b, int dim);

  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  int dim() const { return dim_; }
  std::size_t count() const { return a_.rows(); }

  const Matrix& gram() const { return gram_; }            // A^T A
  const Vector& normal_rhs() const { return normal_rhs_; }  // A^T b

  // A^T A + lambda * diag(1, -I_n).
  Matrix pencil(double lambda) const;

  double objective(const Vector& y) const;   // ||A y - b||^2
  double constraint(const Vector& y) const;  // y^T diag(1, -I_n) y

 private:
  Matrix a_;
  Vector b_;
  int dim_;
  Matrix gram_;
  Vector normal_rhs_;
};

// diag(1, -I_n) * y.
Vector apply_signature(Vector y);
// y^T diag(1, -I_n) y = y_0^2 - ||y_1..n||^2.
double signature_quadratic(const Vector& y);

struct PeReport {
  bool collinear_or_coplanar = false;
  // Only set when a probe position was supplied; rank 0 with a zero singular
  // value marks a degenerate probe (at the reference or at a sensor).
  std::optional<int> jacobian_rank;
  std::optional<double> jacobian_min_singular_value;
  bool pe_holds = false;
};

struct Assumption1Report {
  int passed_samples = 0;
  double min_norm_seen = 0.0;
  double a_gram_min_eig = 0.0;
};

// Simulates range differences d_i = ||a_i - x|| - ||x - a_0|| + r_i with
// r_i i.i.d. Gaussian of standard deviation sigma drawn from the seeded
// SplitMix64 stream. sigma = 0 produces exact differences.
RangeDiffSet simulate_measurements(const SensorArray& array, const Vector& source, double sigma,
                                   std::uint64_t seed);

LinearizedSystem build_system(const SensorArray& array, const RangeDiffSet& meas);

// Jacobian of the range-difference map at x (reference-at-origin frame for
// both input and output): row i is -(x^T/||x|| + (a_i - x)^T/||a_i - x||).
// Throws std::domain_error when x sits at the reference or at a sensor.
Matrix jacobian_j0(const SensorArray& array, const Vector& x);

// Jacobian of the squared-distance error map: row i is
// w_i x^T/||x|| + a_i^T with w_i = ||a_i - x|| - ||x||. Same preconditions.
Matrix jacobian_j(const SensorArray& array, const Vector& x);

// Identifiability check. Without a probe position, reports the generic
// verdict (sensors not collinear for n = 2, not coplanar for n = 3); with
// one, additionally evaluates the Jacobian rank at that position.
PeReport check_local_pe(const SensorArray& array, const std::optional<Vector>& x = std::nullopt);

// Sampled heuristic for the boundedness condition: evaluates ||J(x) x|| at
// seeded pseudo-random unit directions and reports the smallest eigenvalue
// of A^T A alongside. A passing report is evidence, not proof.
Assumption1Report check_assumption1(const LinearizedSystem& system, const SensorArray& array,
                                    int num_samples, std::uint64_t seed);

}  // namespace tdoa
