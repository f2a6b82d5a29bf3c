#pragma once

// Quantum-state value types (density matrices, qubit Bloch vectors,
// Hermitian observables) and the scalar quantifiers built on them.

#include <cstddef>

#include <Eigen/Dense>

#include "qsl/matnum.hpp"

namespace qsl::qstate {

using matnum::Complex;
using matnum::ComplexMatrix;
using matnum::ComplexVector;
using matnum::SchattenOrder;

/// Validation tolerance for Hermiticity, positivity and unit trace.
inline constexpr double kStateTolerance = 1e-10;
/// rho is treated as pure iff Tr(rho^2) > 1 - kPurityTolerance.
inline constexpr double kPurityTolerance = 1e-10;

/// Hermitian, positive semi-definite, unit-trace d x d matrix. Construction
/// validates to kStateTolerance and throws kNonphysicalState otherwise; the
/// stored matrix is the exactly Hermitian part of the input.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& mat);

  /// |psi><psi| for a normalised state vector (norm 1 +- 1e-10).
  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  const ComplexMatrix& mat() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(mat_.rows()); }

 private:
  ComplexMatrix mat_;
};

/// Real 3-vector with norm <= 1 + 1e-10; the qubit state (I + n.sigma)/2.
class BlochVector {
 public:
  BlochVector(double x, double y, double z);
  explicit BlochVector(const Eigen::Vector3d& n);

  const Eigen::Vector3d& vec() const noexcept { return n_; }
  double x() const noexcept { return n_.x(); }
  double y() const noexcept { return n_.y(); }
  double z() const noexcept { return n_.z(); }
  double norm() const noexcept { return n_.norm(); }

 private:
  Eigen::Vector3d n_;
};

/// Hermitian matrix (to 1e-10) in energy units with hbar = 1.
class HermitianObservable {
 public:
  explicit HermitianObservable(const ComplexMatrix& mat);

  const ComplexMatrix& mat() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(mat_.rows()); }

 private:
  ComplexMatrix mat_;
};

const ComplexMatrix& pauli_x();
const ComplexMatrix& pauli_y();
const ComplexMatrix& pauli_z();

/// rho = (I + n.sigma)/2.
DensityMatrix from_bloch(const BlochVector& n);
/// n_j = Tr(rho sigma_j). Throws kQubitOnly unless dim = 2.
BlochVector to_bloch(const DensityMatrix& rho);
/// Tr(A sigma_j) for any 2x2 matrix, e.g. a state derivative, whose real
/// parts are the Bloch components (or their rates).
Eigen::Vector3d bloch_components(const ComplexMatrix& a);

double purity(const DensityMatrix& rho);
/// Tr(rho sigma), real for Hermitian inputs.
double overlap(const DensityMatrix& rho, const DensityMatrix& sigma);
bool is_pure(const DensityMatrix& rho);

/// Dominant eigenvector of rho; for a pure state this is |psi0> up to phase.
ComplexVector principal_vector(const DensityMatrix& rho);

double euclidean_distance(const BlochVector& n, const BlochVector& m);

/// (1/2)[(1 - |n|)^alpha + (1 + |n|)^alpha]^(1/alpha); (1 + |n|)/2 at alpha = inf.
double qubit_norm_closed_form(const BlochVector& n, SchattenOrder order);

/// Principal square root of a PSD matrix via eigendecomposition, with
/// negative round-off eigenvalues clamped to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& rho);

/// -(1/4) Tr([rho0, H]^2).
double coherence_il(const DensityMatrix& rho0, const HermitianObservable& h);
/// Wigner-Yanase skew information -(1/2) Tr([sqrt(rho0), H]^2).
double wy_skew(const DensityMatrix& rho0, const HermitianObservable& h);
/// <H^2> - <H>^2 in rho0.
double energy_variance(const DensityMatrix& rho0, const HermitianObservable& h);
/// Tr(rho H).
double expectation(const DensityMatrix& rho, const HermitianObservable& h);

}  // namespace qsl::qstate
