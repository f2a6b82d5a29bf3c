#pragma once

// Trajectory generators: rho_t and d(rho_t)/dt for time-independent
// Hamiltonians, Lindblad generators, time-dependent Kraus schedules and
// explicit qubit Bloch paths.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qsl/matnum.hpp"
#include "qsl/qstate.hpp"

namespace qsl::dynamics {

using matnum::ComplexMatrix;
using matnum::SchattenOrder;
using qstate::DensityMatrix;
using qstate::HermitianObservable;

/// Sum_j K_j^dagger K_j must equal I to this tolerance wherever evaluated.
inline constexpr double kCompletenessTolerance = 1e-8;
/// Evolved states whose trace drifts further than this are rejected.
inline constexpr double kTraceDriftTolerance = 1e-7;

struct HamiltonianEvolution {
  HermitianObservable hamiltonian;
};

struct JumpOperator {
  ComplexMatrix op;
  double rate = 0.0;  // 1/time, >= 0
};

struct LindbladEvolution {
  HermitianObservable hamiltonian;
  std::vector<JumpOperator> jumps;
};

using KrausFamily = std::function<std::vector<ComplexMatrix>(double)>;

/// Time-parametrised Kraus operators {K_j(t)} with an optional derivative
/// family {dK_j/dt}. Without derivatives the state derivative falls back to
/// finite differences and the Kraus denominator is unavailable.
struct KrausSchedule {
  std::string label;
  KrausFamily operators;
  KrausFamily derivatives;
};

/// Explicit qubit path t -> n_t. `velocity` may be empty (finite differences).
struct BlochPath {
  std::function<Eigen::Vector3d(double)> position;
  std::function<Eigen::Vector3d(double)> velocity;
};

using DynamicsSpec = std::variant<HamiltonianEvolution, LindbladEvolution, KrausSchedule, BlochPath>;

std::string_view variant_name(const DynamicsSpec& spec) noexcept;

struct StateDerivative {
  ComplexMatrix value;
  bool finite_difference = false;
};

namespace detail {
struct Prepared;
}

/// A dynamics specification bound to an initial state and a horizon tau > 0.
/// Construction validates the specification (dimensions, rates, Kraus
/// completeness and Bloch-ball membership on a sample grid) and, for
/// Lindblad generators, integrates the master equation once; afterwards
/// every query is a pure function of t. Copies share the prepared data.
class Trajectory {
 public:
  /// `breakpoints` are times in (0, tau) where the speed may be non-smooth;
  /// quadratures treat them as forced panel boundaries.
  Trajectory(DynamicsSpec spec, DensityMatrix rho0, double tau,
             std::vector<double> breakpoints = {});

  /// Bloch-path trajectory; rho0 is read off the path at t = 0.
  static Trajectory from_bloch_path(BlochPath path, double tau,
                                    std::vector<double> breakpoints = {});

  const DynamicsSpec& spec() const noexcept;
  const DensityMatrix& initial_state() const noexcept;
  double horizon() const noexcept;
  std::size_t dim() const noexcept;
  std::span<const double> breakpoints() const noexcept;

  /// rho_t for 0 <= t <= tau, validated as a density matrix.
  DensityMatrix evolve(double t) const;
  /// d(rho_t)/dt: the analytic generator when one is available, otherwise
  /// a central (one-sided at the ends) finite difference, flagged as such.
  StateDerivative state_derivative(double t) const;

  /// Unvalidated rho_t, for inner loops that validate elsewhere.
  ComplexMatrix raw_state(double t) const;

  /// Step used by the finite-difference fallback.
  double finite_difference_step() const noexcept;

 private:
  std::shared_ptr<const detail::Prepared> prepared_;
};

/// 2 * sum_j int_0^tau ||K_j rho0 dK_j^dagger/dt||_alpha dt, the
/// triangle-inequality upper bound on the path length of a Kraus schedule.
/// Throws kUnsupportedSchedule for other variants or missing derivatives.
double kraus_denominator(const Trajectory& trajectory, SchattenOrder order);

/// Lindblad right-hand side -i[H, rho] + sum_k g_k (L rho L^dag - {L^dag L, rho}/2).
ComplexMatrix lindblad_rhs(const LindbladEvolution& generator, const ComplexMatrix& rho);

}  // namespace qsl::dynamics
