#include "qsl/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qsl/error.hpp"

namespace qsl::qstate {
namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void require_same_dim(std::size_t a, std::size_t b, const char* context) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(context) + ": dimensions " + std::to_string(a) + " and " +
                    std::to_string(b));
  }
}

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& mat) {
  matnum::require_square_finite(mat, "DensityMatrix");
  const double asym = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kStateTolerance) {
    throw Error(ErrorCode::kNonphysicalState, "density matrix is not Hermitian (deviation " +
                                                  fmt(asym) + ")");
  }
  mat_ = 0.5 * (mat + mat.adjoint());
  const double trace = mat_.trace().real();
  if (std::abs(trace - 1.0) > kStateTolerance) {
    throw Error(ErrorCode::kNonphysicalState, "density matrix trace is " + fmt(trace));
  }
  const double min_eig = matnum::hermitian_eigen(mat_).values.minCoeff();
  if (min_eig < -kStateTolerance) {
    throw Error(ErrorCode::kNonphysicalState,
                "density matrix has negative eigenvalue " + fmt(min_eig));
  }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > kStateTolerance) {
    throw Error(ErrorCode::kNonphysicalState, "state vector norm is " + fmt(norm));
  }
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(dim));
}

BlochVector::BlochVector(double x, double y, double z) : BlochVector(Eigen::Vector3d(x, y, z)) {}

BlochVector::BlochVector(const Eigen::Vector3d& n) : n_(n) {
  if (!n.allFinite()) throw Error(ErrorCode::kInvalidInput, "Bloch vector has non-finite entries");
  if (n.norm() > 1.0 + kStateTolerance) {
    throw Error(ErrorCode::kNonphysicalState, "Bloch vector norm " + fmt(n.norm()) + " exceeds 1");
  }
}

HermitianObservable::HermitianObservable(const ComplexMatrix& mat) {
  matnum::require_square_finite(mat, "HermitianObservable");
  if (!matnum::is_hermitian(mat, kStateTolerance)) {
    throw Error(ErrorCode::kInvalidInput, "observable is not Hermitian");
  }
  mat_ = 0.5 * (mat + mat.adjoint());
}

const ComplexMatrix& pauli_x() {
  static const ComplexMatrix m = (ComplexMatrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished();
  return m;
}

const ComplexMatrix& pauli_y() {
  static const ComplexMatrix m =
      (ComplexMatrix(2, 2) << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0).finished();
  return m;
}

const ComplexMatrix& pauli_z() {
  static const ComplexMatrix m = (ComplexMatrix(2, 2) << 1.0, 0.0, 0.0, -1.0).finished();
  return m;
}

DensityMatrix from_bloch(const BlochVector& n) {
  ComplexMatrix rho(2, 2);
  rho << 0.5 * (1.0 + n.z()), 0.5 * Complex(n.x(), -n.y()), 0.5 * Complex(n.x(), n.y()),
      0.5 * (1.0 - n.z());
  return DensityMatrix(rho);
}

Eigen::Vector3d bloch_components(const ComplexMatrix& a) {
  if (a.rows() != 2 || a.cols() != 2) {
    throw Error(ErrorCode::kQubitOnly, "Bloch components need a 2x2 matrix, got dimension " +
                                           std::to_string(a.rows()));
  }
  // Tr(A sigma_x) = A01 + A10, Tr(A sigma_y) = i(A01 - A10), Tr(A sigma_z) = A00 - A11
  const Complex x = a(0, 1) + a(1, 0);
  const Complex y = Complex(0.0, 1.0) * (a(0, 1) - a(1, 0));
  const Complex z = a(0, 0) - a(1, 1);
  return {x.real(), y.real(), z.real()};
}

BlochVector to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw Error(ErrorCode::kQubitOnly,
                "to_bloch needs a qubit state, got dimension " + std::to_string(rho.dim()));
  }
  Eigen::Vector3d n = bloch_components(rho.mat());
  // Round-off can push a pure state a hair outside the ball.
  if (n.norm() > 1.0) n /= n.norm();
  return BlochVector(n);
}

double purity(const DensityMatrix& rho) {
  return overlap(rho, rho);
}

double overlap(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "overlap");
  return matnum::trace_inner(rho.mat(), sigma.mat()).real();
}

bool is_pure(const DensityMatrix& rho) {
  return purity(rho) > 1.0 - kPurityTolerance;
}

ComplexVector principal_vector(const DensityMatrix& rho) {
  const auto eig = matnum::hermitian_eigen(rho.mat());
  return eig.vectors.col(eig.vectors.cols() - 1);
}

double euclidean_distance(const BlochVector& n, const BlochVector& m) {
  return (n.vec() - m.vec()).norm();
}

double qubit_norm_closed_form(const BlochVector& n, SchattenOrder order) {
  const double r = std::min(1.0, n.norm());
  if (order.is_infinite()) return 0.5 * (1.0 + r);
  const double alpha = order.value();
  return 0.5 * std::pow(std::pow(1.0 - r, alpha) + std::pow(1.0 + r, alpha), 1.0 / alpha);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& rho) {
  const auto eig = matnum::hermitian_eigen(rho);
  const double floor = 8.0 * static_cast<double>(rho.rows()) * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  const Eigen::VectorXd roots =
      eig.values.unaryExpr([floor](double v) { return v > floor ? std::sqrt(v) : 0.0; });
  return eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

double coherence_il(const DensityMatrix& rho0, const HermitianObservable& h) {
  require_same_dim(rho0.dim(), h.dim(), "coherence_il");
  const ComplexMatrix c = matnum::commutator(rho0.mat(), h.mat());
  return -0.25 * (c * c).trace().real();
}

double wy_skew(const DensityMatrix& rho0, const HermitianObservable& h) {
  require_same_dim(rho0.dim(), h.dim(), "wy_skew");
  const ComplexMatrix c = matnum::commutator(psd_sqrt(rho0.mat()), h.mat());
  return -0.5 * (c * c).trace().real();
}

double expectation(const DensityMatrix& rho, const HermitianObservable& h) {
  require_same_dim(rho.dim(), h.dim(), "expectation");
  return (rho.mat() * h.mat()).trace().real();
}

double energy_variance(const DensityMatrix& rho0, const HermitianObservable& h) {
  require_same_dim(rho0.dim(), h.dim(), "energy_variance");
  const double mean = expectation(rho0, h);
  const double second = (rho0.mat() * h.mat() * h.mat()).trace().real();
  return std::max(0.0, second - mean * mean);
}

}  // namespace qsl::qstate
