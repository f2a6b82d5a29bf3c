#include "qsl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qsl/error.hpp"

namespace qsl::bounds {
namespace {

using matnum::Complex;
using matnum::ComplexVector;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Finite-difference speeds carry ~1e-10 relative noise; do not chase below it.
constexpr double kFiniteDifferenceRelTol = 1e-9;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void require_qubit(const Trajectory& traj, const char* what) {
  if (traj.dim() != 2) {
    throw Error(ErrorCode::kQubitOnly, std::string(what) + " needs a qubit trajectory, got dimension " +
                                           std::to_string(traj.dim()));
  }
}

void require_pure(const DensityMatrix& rho0, const char* what) {
  const double p = qstate::purity(rho0);
  if (!qstate::is_pure(rho0)) {
    throw Error(ErrorCode::kPrecondition,
                std::string(what) + " requires a pure initial state, purity is " + fmt(p));
  }
}

quad::Options options_for(const Trajectory& traj, quad::Options options) {
  if (traj.state_derivative(0.0).finite_difference) {
    options.rel_tol = std::max(options.rel_tol, kFiniteDifferenceRelTol);
  }
  return options;
}

// tau * numerator / denominator with the 0/0 convention and the overshoot check.
void finish(BoundEntry& e, double tau, double numerator, double denominator) {
  if (numerator < kDegenerateTolerance && denominator < kDegenerateTolerance) {
    e.degenerate = true;
    e.value = 0.0;
  } else if (!(denominator > 0.0)) {
    throw Error(ErrorCode::kInternalConsistency,
                e.name + ": nonzero numerator " + fmt(numerator) + " over zero path length");
  } else {
    e.value = tau * numerator / denominator;
  }
  e.ratio = e.value / tau;
  if (e.value > tau * (1.0 + kOvershootTolerance)) {
    throw Error(ErrorCode::kInternalConsistency,
                e.name + " = " + fmt(e.value) + " exceeds the evolution time " + fmt(tau) +
                    " (ratio " + fmt(e.ratio) + ")");
  }
}

void attach(BoundEntry& e, const PathLength& pl) {
  e.nodes = pl.evaluations;
  e.quad_error = pl.error_estimate;
  e.finite_difference = pl.finite_difference;
}

Eigen::Vector3d bloch_at(const Trajectory& traj, double t) {
  return qstate::bloch_components(traj.raw_state(t));
}

}  // namespace

PathLength path_length(const Trajectory& trajectory, SchattenOrder order,
                       const quad::Options& options) {
  PathLength out;
  auto speed = [&](double t) {
    const auto d = trajectory.state_derivative(t);
    out.finite_difference = out.finite_difference || d.finite_difference;
    return matnum::schatten_norm(d.value, order);
  };
  const auto r = quad::integrate(speed, 0.0, trajectory.horizon(), trajectory.breakpoints(),
                                 options_for(trajectory, options));
  out.value = r.value;
  out.error_estimate = r.error_estimate;
  out.evaluations = r.evaluations;
  return out;
}

PathLength bloch_path_length(const Trajectory& trajectory, const quad::Options& options) {
  require_qubit(trajectory, "bloch_path_length");
  PathLength out;
  auto speed = [&](double t) {
    const auto d = trajectory.state_derivative(t);
    out.finite_difference = out.finite_difference || d.finite_difference;
    return qstate::bloch_components(d.value).norm();
  };
  const auto r = quad::integrate(speed, 0.0, trajectory.horizon(), trajectory.breakpoints(),
                                 options_for(trajectory, options));
  out.value = r.value;
  out.error_estimate = r.error_estimate;
  out.evaluations = r.evaluations;
  return out;
}

BoundEntry error_entry(std::string name, std::optional<SchattenOrder> alpha,
                       std::optional<SchattenOrder> beta, std::string message) {
  BoundEntry e;
  e.name = std::move(name);
  e.alpha = alpha;
  e.beta = beta;
  e.value = kNaN;
  e.ratio = kNaN;
  e.error = std::move(message);
  return e;
}

BoundEntry alpha_qsl(const Trajectory& trajectory, SchattenOrder order) {
  return alpha_qsl(trajectory, order, path_length(trajectory, order));
}

BoundEntry alpha_qsl(const Trajectory& trajectory, SchattenOrder order, const PathLength& pl) {
  BoundEntry e;
  e.name = "alpha";
  e.alpha = order;
  const ComplexMatrix& rho0 = trajectory.initial_state().mat();
  const ComplexMatrix rho_tau = trajectory.evolve(trajectory.horizon()).mat();
  attach(e, pl);
  finish(e, trajectory.horizon(), matnum::schatten_norm(rho_tau - rho0, order), pl.value);
  return e;
}

BoundEntry alpha_qsl_bloch(const Trajectory& trajectory) {
  require_qubit(trajectory, "alpha_qsl_bloch");
  BoundEntry e;
  e.name = "alpha_bloch";
  const double tau = trajectory.horizon();
  const double chord = (bloch_at(trajectory, tau) - bloch_at(trajectory, 0.0)).norm();
  const PathLength pl = bloch_path_length(trajectory);
  attach(e, pl);
  finish(e, tau, chord, pl.value);
  return e;
}

BoundEntry alpha_qsl_closed(const HermitianObservable& hamiltonian, const DensityMatrix& rho0,
                            double tau, SchattenOrder order) {
  BoundEntry e;
  e.name = "alpha_closed";
  e.alpha = order;
  const Trajectory traj(dynamics::HamiltonianEvolution{hamiltonian}, rho0, tau);
  const double speed =
      matnum::schatten_norm(matnum::commutator(hamiltonian.mat(), rho0.mat()), order);
  if (speed < kDegenerateTolerance) {
    e.frozen = true;
    e.value = 0.0;
    e.ratio = 0.0;
    return e;
  }
  const double chord = matnum::schatten_norm(traj.evolve(tau).mat() - rho0.mat(), order);
  finish(e, tau, chord, tau * speed);
  return e;
}

BoundEntry alpha_beta_qsl(const Trajectory& trajectory, SchattenOrder order) {
  return alpha_beta_qsl(trajectory, order, path_length(trajectory, order));
}

BoundEntry alpha_beta_qsl(const Trajectory& trajectory, SchattenOrder order, const PathLength& pl) {
  BoundEntry e;
  e.name = "alpha_beta";
  e.alpha = order;
  e.beta = order.dual();
  const ComplexMatrix& rho0 = trajectory.initial_state().mat();
  const ComplexMatrix rho_tau = trajectory.evolve(trajectory.horizon()).mat();
  const double numerator = std::abs(matnum::trace_inner(rho_tau - rho0, rho0).real());
  const double rho0_norm = matnum::schatten_norm(rho0, order.dual());
  attach(e, pl);
  finish(e, trajectory.horizon(), numerator, rho0_norm * pl.value);
  return e;
}

BoundEntry alpha_beta_qsl_bloch(const Trajectory& trajectory, SchattenOrder order) {
  require_qubit(trajectory, "alpha_beta_qsl_bloch");
  BoundEntry e;
  e.name = "alpha_beta_bloch";
  e.alpha = order;
  e.beta = order.dual();
  const double tau = trajectory.horizon();
  const Eigen::Vector3d n0 = bloch_at(trajectory, 0.0);
  const Eigen::Vector3d nt = bloch_at(trajectory, tau);
  // [(1 + r)^b + (1 - r)^b]^{1/b} = 2 ||rho_0||_b.
  const Eigen::Vector3d n0_ball = n0.norm() > 1.0 ? Eigen::Vector3d(n0.normalized()) : n0;
  const double beta_term =
      2.0 * qstate::qubit_norm_closed_form(qstate::BlochVector(n0_ball), order.dual());
  const double numerator = std::pow(2.0, 1.0 - order.reciprocal()) * std::abs((nt - n0).dot(n0));
  const PathLength pl = bloch_path_length(trajectory);
  attach(e, pl);
  finish(e, tau, numerator, beta_term * pl.value);
  return e;
}

BoundEntry dl_qsl(const Trajectory& trajectory) {
  require_pure(trajectory.initial_state(), "dl");
  return dl_qsl(trajectory, path_length(trajectory, SchattenOrder::infinity()));
}

BoundEntry dl_qsl(const Trajectory& trajectory, const PathLength& pl) {
  require_pure(trajectory.initial_state(), "dl");
  BoundEntry e;
  e.name = "dl";
  e.alpha = SchattenOrder::infinity();
  const DensityMatrix& rho0 = trajectory.initial_state();
  const DensityMatrix rho_tau = trajectory.evolve(trajectory.horizon());
  const double numerator = std::max(0.0, 1.0 - qstate::overlap(rho0, rho_tau));
  attach(e, pl);
  finish(e, trajectory.horizon(), numerator, pl.value);
  return e;
}

BoundEntry dl_qsl_bloch(const Trajectory& trajectory) {
  require_qubit(trajectory, "dl_qsl_bloch");
  require_pure(trajectory.initial_state(), "dl");
  BoundEntry e;
  e.name = "dl_bloch";
  const double tau = trajectory.horizon();
  const Eigen::Vector3d n0 = bloch_at(trajectory, 0.0);
  const Eigen::Vector3d nt = bloch_at(trajectory, tau);
  const PathLength pl = bloch_path_length(trajectory);
  attach(e, pl);
  finish(e, tau, std::max(0.0, 1.0 - nt.dot(n0)), pl.value);
  return e;
}

BoundEntry cpm_qsl(const Trajectory& trajectory) {
  BoundEntry e = alpha_qsl(trajectory, SchattenOrder::finite(2.0));
  e.name = "cpm";
  return e;
}

BoundEntry ceph_qsl(const Trajectory& trajectory) {
  return ceph_qsl(trajectory, path_length(trajectory, SchattenOrder::finite(2.0)));
}

BoundEntry ceph_qsl(const Trajectory& trajectory, const PathLength& pl) {
  BoundEntry e;
  e.name = "ceph";
  e.alpha = SchattenOrder::finite(2.0);
  e.beta = SchattenOrder::finite(2.0);
  const DensityMatrix& rho0 = trajectory.initial_state();
  const DensityMatrix rho_tau = trajectory.evolve(trajectory.horizon());
  const double purity = qstate::purity(rho0);
  const double f = qstate::overlap(rho0, rho_tau) / purity;
  if (f > 1.0 + kRelativePurityTolerance) {
    throw Error(ErrorCode::kRelativePurity,
                "relative purity Tr(rho0 rho_tau)/Tr(rho0^2) = " + fmt(f) + " exceeds 1");
  }
  if (f < -kArccosSlack) {
    throw Error(ErrorCode::kRelativePurity, "relative purity " + fmt(f) + " is negative");
  }
  const double theta = std::acos(std::clamp(f, 0.0, 1.0));
  const double numerator = 4.0 * theta * theta / (std::numbers::pi * std::numbers::pi) * std::sqrt(purity);
  attach(e, pl);
  finish(e, trajectory.horizon(), numerator, pl.value);
  return e;
}

BoundEntry kraus_alpha_qsl(const Trajectory& trajectory, SchattenOrder order) {
  BoundEntry e;
  e.name = "kraus_alpha";
  e.alpha = order;
  const ComplexMatrix& rho0 = trajectory.initial_state().mat();
  const ComplexMatrix rho_tau = trajectory.evolve(trajectory.horizon()).mat();
  const double denominator = dynamics::kraus_denominator(trajectory, order);
  finish(e, trajectory.horizon(), matnum::schatten_norm(rho_tau - rho0, order), denominator);
  return e;
}

TimeBound mt_time(const HermitianObservable& hamiltonian, const ComplexVector& psi0,
                  const ComplexVector& psi_tau) {
  const DensityMatrix rho0 = DensityMatrix::pure(psi0);
  DensityMatrix::pure(psi_tau);
  const double delta_e = std::sqrt(qstate::energy_variance(rho0, hamiltonian));
  if (delta_e < kDegenerateTolerance) return {0.0, true};
  const double fidelity = std::min(1.0, std::abs(psi0.dot(psi_tau)));
  return {std::acos(fidelity) / delta_e, false};
}

TimeBound ml_time(const HermitianObservable& hamiltonian, const ComplexVector& psi0) {
  const DensityMatrix rho0 = DensityMatrix::pure(psi0);
  const double ground = matnum::hermitian_eigen(hamiltonian.mat()).values.minCoeff();
  const double gap = qstate::expectation(rho0, hamiltonian) - ground;
  if (gap < kDegenerateTolerance) return {0.0, true};
  return {std::numbers::pi / (2.0 * gap), false};
}

TimeBound lt_time(const HermitianObservable& hamiltonian, const ComplexVector& psi0,
                  const ComplexVector& psi_tau) {
  const double overlap = std::abs(psi0.dot(psi_tau));
  if (overlap > qstate::kStateTolerance) {
    throw Error(ErrorCode::kPrecondition,
                "the combined MT/ML bound needs an orthogonal target, |<psi0|psi_tau>| = " + fmt(overlap));
  }
  const TimeBound mt = mt_time(hamiltonian, psi0, psi_tau);
  const TimeBound ml = ml_time(hamiltonian, psi0);
  if (mt.frozen || ml.frozen) return {0.0, true};
  return {std::max(mt.value, ml.value), false};
}

}  // namespace qsl::bounds
