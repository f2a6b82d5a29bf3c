#include "qsl/channels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "qsl/error.hpp"

namespace qsl::channels {
namespace {

using matnum::Complex;
using qstate::pauli_x;
using qstate::pauli_y;
using qstate::pauli_z;

void require_rate(double rate, const char* channel) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(channel) + " rate must be finite and >= 0, got " + std::to_string(rate));
  }
}

ComplexMatrix identity(Eigen::Index d) { return ComplexMatrix::Identity(d, d); }

// d/dt sqrt(u(t)) = u'/(2 sqrt(u)); infinite when u = 0 and u' != 0.
double sqrt_rate(double u, double du) {
  if (du == 0.0) return 0.0;
  if (u <= 0.0) return std::copysign(std::numeric_limits<double>::infinity(), du);
  return du / (2.0 * std::sqrt(u));
}

}  // namespace

ComplexMatrix sigma_minus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

KrausSchedule dephasing(double rate) {
  require_rate(rate, "dephasing");
  auto coefficients = [rate](double t) {
    const double e = std::exp(-rate * t);
    const double keep = 0.5 * (1.0 + e);
    const double flip = -0.5 * std::expm1(-rate * t);
    return std::array<double, 4>{keep, flip, -0.5 * rate * e, 0.5 * rate * e};
  };
  KrausSchedule k;
  k.label = "dephasing";
  k.operators = [coefficients](double t) {
    const auto c = coefficients(t);
    return std::vector<ComplexMatrix>{std::sqrt(c[0]) * identity(2), std::sqrt(c[1]) * pauli_z()};
  };
  k.derivatives = [coefficients](double t) {
    const auto c = coefficients(t);
    return std::vector<ComplexMatrix>{sqrt_rate(c[0], c[2]) * identity(2),
                                      sqrt_rate(c[1], c[3]) * pauli_z()};
  };
  return k;
}

KrausSchedule amplitude_damping(double rate) {
  require_rate(rate, "amplitude-damping");
  KrausSchedule k;
  k.label = "amplitude-damping";
  k.operators = [rate](double t) {
    const double e = std::exp(-rate * t);
    ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(e);
    ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
    k1(0, 1) = std::sqrt(-std::expm1(-rate * t));
    return std::vector<ComplexMatrix>{k0, k1};
  };
  k.derivatives = [rate](double t) {
    const double e = std::exp(-rate * t);
    ComplexMatrix d0 = ComplexMatrix::Zero(2, 2);
    d0(1, 1) = -0.5 * rate * std::sqrt(e);
    ComplexMatrix d1 = ComplexMatrix::Zero(2, 2);
    d1(0, 1) = sqrt_rate(-std::expm1(-rate * t), rate * e);
    return std::vector<ComplexMatrix>{d0, d1};
  };
  return k;
}

KrausSchedule depolarizing(double rate) {
  require_rate(rate, "depolarizing");
  KrausSchedule k;
  k.label = "depolarizing";
  k.operators = [rate](double t) {
    const double e = std::exp(-rate * t);
    const double side = std::sqrt(-0.25 * std::expm1(-rate * t));
    return std::vector<ComplexMatrix>{std::sqrt(0.25 * (1.0 + 3.0 * e)) * identity(2),
                                      side * pauli_x(), side * pauli_y(), side * pauli_z()};
  };
  k.derivatives = [rate](double t) {
    const double e = std::exp(-rate * t);
    const double side = sqrt_rate(-0.25 * std::expm1(-rate * t), 0.25 * rate * e);
    return std::vector<ComplexMatrix>{
        sqrt_rate(0.25 * (1.0 + 3.0 * e), -0.75 * rate * e) * identity(2), side * pauli_x(),
        side * pauli_y(), side * pauli_z()};
  };
  return k;
}

dynamics::HamiltonianEvolution precession(double omega, const Eigen::Vector3d& axis) {
  if (!std::isfinite(omega)) throw Error(ErrorCode::kInvalidInput, "precession frequency is not finite");
  if (!axis.allFinite() || axis.norm() < 1e-12) {
    throw Error(ErrorCode::kInvalidInput, "precession axis must be a nonzero finite vector");
  }
  const Eigen::Vector3d a = axis.normalized();
  const ComplexMatrix h = 0.5 * omega * (a.x() * pauli_x() + a.y() * pauli_y() + a.z() * pauli_z());
  return {HermitianObservable(h)};
}

KrausSchedule custom_kraus(const std::vector<ComplexMatrix>& channel, double rate) {
  require_rate(rate, "custom-kraus");
  if (channel.empty()) throw Error(ErrorCode::kInvalidInput, "custom-kraus needs at least one operator");
  const Eigen::Index d = channel.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& e : channel) {
    if (e.rows() != d || e.cols() != d) {
      throw Error(ErrorCode::kDimensionMismatch, "custom-kraus operators must share one square shape");
    }
    if (!e.allFinite()) throw Error(ErrorCode::kInvalidInput, "custom-kraus operator is not finite");
    sum += e.adjoint() * e;
  }
  const double dev = (sum - identity(d)).cwiseAbs().maxCoeff();
  if (dev > dynamics::kCompletenessTolerance) {
    throw Error(ErrorCode::kInvalidInput,
                "custom-kraus operators are not trace preserving (deviation " + std::to_string(dev) + ")");
  }
  KrausSchedule k;
  k.label = "custom-kraus";
  k.operators = [channel, rate, d](double t) {
    const double mix = std::sqrt(-std::expm1(-rate * t));
    std::vector<ComplexMatrix> out{std::sqrt(std::exp(-rate * t)) * identity(d)};
    for (const auto& e : channel) out.push_back(mix * e);
    return out;
  };
  k.derivatives = [channel, rate, d](double t) {
    const double e = std::exp(-rate * t);
    const double mix = sqrt_rate(-std::expm1(-rate * t), rate * e);
    std::vector<ComplexMatrix> out{-0.5 * rate * std::sqrt(e) * identity(d)};
    for (const auto& op : channel) out.push_back(mix * op);
    return out;
  };
  return k;
}

KrausSchedule unitary(const HermitianObservable& hamiltonian) {
  const auto eig = matnum::hermitian_eigen(hamiltonian.mat());
  const ComplexMatrix h = hamiltonian.mat();
  auto propagator = [eig](double t) {
    const Eigen::VectorXcd phases =
        (eig.values.cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
    return ComplexMatrix(eig.vectors * phases.asDiagonal() * eig.vectors.adjoint());
  };
  KrausSchedule k;
  k.label = "unitary";
  k.operators = [propagator](double t) { return std::vector<ComplexMatrix>{propagator(t)}; };
  k.derivatives = [propagator, h](double t) {
    return std::vector<ComplexMatrix>{Complex(0.0, -1.0) * h * propagator(t)};
  };
  return k;
}

KrausSchedule replacement(const DensityMatrix& target, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::kInvalidInput, "replacement horizon must be positive and finite");
  }
  const auto eig = matnum::hermitian_eigen(target.mat());
  const Eigen::Index d = target.mat().rows();
  // Rank-one pieces sqrt(p_i)|phi_i><j|, skipping empty eigenvalues.
  std::vector<ComplexMatrix> pieces;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double p = std::max(0.0, eig.values(i));
    if (p <= 0.0) continue;
    for (Eigen::Index j = 0; j < d; ++j) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m.col(j) = std::sqrt(p) * eig.vectors.col(i);
      pieces.push_back(std::move(m));
    }
  }
  // Renormalise so that sum_i p_i = 1 exactly after clamping.
  double total = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) total += std::max(0.0, eig.values(i));
  for (auto& m : pieces) m /= std::sqrt(total);

  KrausSchedule k;
  k.label = "replacement";
  k.operators = [pieces, tau, d](double t) {
    const double lambda = std::clamp(t / tau, 0.0, 1.0);
    std::vector<ComplexMatrix> out{std::sqrt(1.0 - lambda) * identity(d)};
    for (const auto& m : pieces) out.push_back(std::sqrt(lambda) * m);
    return out;
  };
  k.derivatives = [pieces, tau, d](double t) {
    const double lambda = std::clamp(t / tau, 0.0, 1.0);
    std::vector<ComplexMatrix> out{sqrt_rate(1.0 - lambda, -1.0 / tau) * identity(d)};
    const double grow = sqrt_rate(lambda, 1.0 / tau);
    for (const auto& m : pieces) out.push_back(grow * m);
    return out;
  };
  return k;
}

KrausSchedule without_derivatives(KrausSchedule schedule) {
  schedule.derivatives = nullptr;
  schedule.label += " (finite differences)";
  return schedule;
}

}  // namespace qsl::channels
