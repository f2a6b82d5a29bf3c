#pragma once

// Saturation diagnostics for qubit trajectories and the paths that saturate
// the bounds: straight segments between states and radial Bloch paths.

#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qsl/dynamics.hpp"

namespace qsl::tightness {

using dynamics::DensityMatrix;
using dynamics::SchattenOrder;
using dynamics::Trajectory;
using qstate::BlochVector;

inline constexpr double kResidualTolerance = 1e-6;
inline constexpr double kSignTolerance = 1e-10;
inline constexpr double kDirectionTolerance = 1e-12;

/// (n_t - n_0) / |n_t - n_0|; throws kUndefinedDirection when they coincide.
Eigen::Vector3d r_hat(const BlochVector& n0, const BlochVector& nt);

/// sqrt(|d rho_11/dt|^2 + |d rho_12/dt|^2), half the Bloch speed.
double omega(double drho11_dt, matnum::Complex drho12_dt);

/// t_k = (tau/2)(1 - cos(pi k / m)), k = 1..m: clustered at both ends, t = 0 excluded.
std::vector<double> clustered_grid(double tau, std::size_t samples);

struct SignDiagnostics {
  double min_value = 0.0;
  double max_value = 0.0;
  std::size_t violations = 0;
};

struct TightnessReport {
  bool satisfied = false;
  double max_residual = 0.0;
  std::vector<double> sampled_times;
  std::vector<double> residuals;
  /// The same condition written through populations and coherences.
  std::vector<double> population_residuals;
  /// Alpha check: z.r_hat (informational). Alpha-beta check: d rho_11/dt in the
  /// initial-state frame, which must stay <= kSignTolerance.
  SignDiagnostics signs;
  /// False when the condition cannot hold on any moving path.
  bool feasible = true;
};

/// Directional condition dn/dt = |dn/dt| r_hat(n_0, n_t). Qubits, samples >= 8.
TightnessReport check_alpha_tight(const Trajectory& trajectory, std::size_t samples);

/// |dn/dt| = 2^{-1/alpha} (-n_0.dn/dt) with d rho_11/dt <= 0 in the frame where
/// n_0 = z. Qubits with a pure initial state, samples >= 8.
TightnessReport check_alpha_beta_tight(const Trajectory& trajectory, SchattenOrder order,
                                       std::size_t samples);

/// rho_lambda = (1 - lambda) rho_0 + lambda rho_1.
struct StateLine {
  DensityMatrix rho0;
  DensityMatrix rho1;

  DensityMatrix at(double lambda) const;
};

/// Radial depth profile g on [0, tau]: n_t = (1 - g(t)) n_0.
struct RadialProfile {
  std::string label;
  std::function<double(double)> depth;
  std::function<double(double)> rate;
};

RadialProfile exponential_profile(double depth, double rate);
RadialProfile linear_profile(double depth, double tau);

struct BlochRadial {
  Eigen::Vector3d n0;
  RadialProfile profile;
};

using GeodesicPath = std::variant<StateLine, BlochRadial>;

GeodesicPath line_geodesic(const DensityMatrix& rho0, const DensityMatrix& rho1);
/// Throws kInvalidInput unless |n_0| = 1 and kProfile unless g(0) = 0,
/// g is nondecreasing and g(tau) <= 2 (checked on a grid).
GeodesicPath radial_path(const BlochVector& n0, RadialProfile profile, double tau);

/// Traversal over [0, tau]: straight lines through the replacement schedule
/// (any dimension), radial paths as Bloch paths.
Trajectory traverse(const GeodesicPath& path, double tau);
/// Qubit paths as explicit Bloch paths with exact velocities.
Trajectory traverse_bloch(const GeodesicPath& path, double tau);

}  // namespace qsl::tightness
