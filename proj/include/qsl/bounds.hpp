#pragma once

// Speed-limit estimators evaluated along a trajectory.
//
// Every estimator returns a BoundEntry whose value is a time (same units as
// the horizon tau) and whose ratio is value / tau. Matrix-route and
// Bloch-route variants of the qubit estimators are kept separate so the two
// can be cross-checked.

#include <optional>
#include <string>
#include <vector>

#include "qsl/dynamics.hpp"
#include "qsl/quadrature.hpp"

namespace qsl::bounds {

using dynamics::ComplexMatrix;
using dynamics::DensityMatrix;
using dynamics::HermitianObservable;
using dynamics::SchattenOrder;
using dynamics::Trajectory;

/// Numerator and denominator both below this: the 0/0 convention applies.
inline constexpr double kDegenerateTolerance = 1e-12;
/// A value above tau * (1 + kOvershootTolerance) is reported as an error.
inline constexpr double kOvershootTolerance = 1e-6;
/// Relative purity may exceed 1 by this much before it is rejected.
inline constexpr double kRelativePurityTolerance = 1e-9;
/// Slack allowed when clamping arccos arguments into [0, 1].
inline constexpr double kArccosSlack = 1e-12;

struct PathLength {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool finite_difference = false;
};

/// int_0^tau ||d rho_t / dt||_alpha dt.
PathLength path_length(const Trajectory& trajectory, SchattenOrder order,
                       const quad::Options& options = {});
/// int_0^tau ||d n_t / dt|| dt (qubits only).
PathLength bloch_path_length(const Trajectory& trajectory, const quad::Options& options = {});

struct BoundEntry {
  std::string name;
  std::optional<SchattenOrder> alpha;
  std::optional<SchattenOrder> beta;
  double value = 0.0;
  double ratio = 0.0;
  bool degenerate = false;
  bool frozen = false;
  bool finite_difference = false;
  std::size_t nodes = 0;
  double quad_error = 0.0;
  /// Set when the estimator could not be evaluated; value and ratio are NaN.
  std::optional<std::string> error;
};

struct QslReport {
  std::string scenario_id;
  double tau = 0.0;
  std::vector<BoundEntry> entries;
};

/// tau ||rho_tau - rho_0||_alpha / L_alpha.
BoundEntry alpha_qsl(const Trajectory& trajectory, SchattenOrder order);
/// tau |n_tau - n_0| / int |dn/dt|, the alpha-independent qubit form.
BoundEntry alpha_qsl_bloch(const Trajectory& trajectory);
/// ||rho_tau - rho_0||_alpha / ||[H, rho_0]||_alpha for time-independent H;
/// rho_tau is obtained from the exact propagator.
BoundEntry alpha_qsl_closed(const HermitianObservable& hamiltonian, const DensityMatrix& rho0,
                            double tau, SchattenOrder order);

/// tau |Tr[(rho_tau - rho_0) rho_0]| / (||rho_0||_beta L_alpha), beta dual to alpha.
BoundEntry alpha_beta_qsl(const Trajectory& trajectory, SchattenOrder order);
/// Qubit Bloch form of alpha_beta_qsl, valid for mixed rho_0 as well.
BoundEntry alpha_beta_qsl_bloch(const Trajectory& trajectory, SchattenOrder order);

/// tau (1 - <psi0|rho_tau|psi0>) / L_inf. Requires a pure rho_0.
BoundEntry dl_qsl(const Trajectory& trajectory);
/// tau (1 - n_tau.n_0) / int |dn/dt| (qubits, pure rho_0).
BoundEntry dl_qsl_bloch(const Trajectory& trajectory);

/// Identical to alpha_qsl at alpha = 2, relabelled.
BoundEntry cpm_qsl(const Trajectory& trajectory);

/// tau (4 theta^2 / pi^2) ||rho_0||_2 / L_2 with cos(theta) the relative purity
/// Tr(rho_0 rho_tau) / ||rho_0||_2^2.
BoundEntry ceph_qsl(const Trajectory& trajectory);

/// alpha_qsl with the path length replaced by the Kraus denominator
/// (a looser bound). Kraus trajectories with derivative evaluators only.
BoundEntry kraus_alpha_qsl(const Trajectory& trajectory, SchattenOrder order);

/// Overloads reusing a path length already computed for the same trajectory
/// (alpha and alpha_beta: the same order; dl: infinity; ceph: 2).
BoundEntry alpha_qsl(const Trajectory& trajectory, SchattenOrder order, const PathLength& length);
BoundEntry alpha_beta_qsl(const Trajectory& trajectory, SchattenOrder order, const PathLength& length);
BoundEntry dl_qsl(const Trajectory& trajectory, const PathLength& length_inf);
BoundEntry ceph_qsl(const Trajectory& trajectory, const PathLength& length_2);

struct TimeBound {
  double value = 0.0;
  bool frozen = false;
};

/// arccos|<psi0|psi_tau>| / Delta E. Frozen (value 0) when Delta E = 0.
TimeBound mt_time(const HermitianObservable& hamiltonian, const matnum::ComplexVector& psi0,
                  const matnum::ComplexVector& psi_tau);
/// pi / (2 (<H> - E_0)). Frozen when <H> = E_0.
TimeBound ml_time(const HermitianObservable& hamiltonian, const matnum::ComplexVector& psi0);
/// max(MT, ML) for orthogonal targets; throws kPrecondition otherwise.
TimeBound lt_time(const HermitianObservable& hamiltonian, const matnum::ComplexVector& psi0,
                  const matnum::ComplexVector& psi_tau);

/// Fills value/ratio NaN and records the message.
BoundEntry error_entry(std::string name, std::optional<SchattenOrder> alpha,
                       std::optional<SchattenOrder> beta, std::string message);

}  // namespace qsl::bounds
