#include "qsl/tightness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qsl/channels.hpp"
#include "qsl/error.hpp"

namespace qsl::tightness {
namespace {

using matnum::Complex;
using matnum::ComplexMatrix;

constexpr std::size_t kMinSamples = 8;
constexpr std::size_t kProfileGrid = 256;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void require_qubit_samples(const Trajectory& traj, std::size_t samples, const char* what) {
  if (traj.dim() != 2) {
    throw Error(ErrorCode::kQubitOnly, std::string(what) + " needs a qubit trajectory, got dimension " +
                                           std::to_string(traj.dim()));
  }
  if (samples < kMinSamples) {
    throw Error(ErrorCode::kInvalidInput, std::string(what) + " needs at least " +
                                              std::to_string(kMinSamples) + " samples");
  }
}

Eigen::Vector3d bloch_at(const Trajectory& traj, double t) {
  return qstate::bloch_components(traj.raw_state(t));
}

void close_report(TightnessReport& report) {
  report.max_residual = 0.0;
  for (double r : report.residuals) report.max_residual = std::max(report.max_residual, r);
  report.satisfied = report.max_residual < kResidualTolerance && report.signs.violations == 0;
}

}  // namespace

Eigen::Vector3d r_hat(const BlochVector& n0, const BlochVector& nt) {
  const Eigen::Vector3d d = nt.vec() - n0.vec();
  const double len = d.norm();
  if (!(len > kDirectionTolerance)) {
    throw Error(ErrorCode::kUndefinedDirection,
                "r_hat is undefined: Bloch vectors coincide (separation " + fmt(len) + ")");
  }
  return d / len;
}

double omega(double drho11_dt, Complex drho12_dt) {
  return std::hypot(drho11_dt, std::abs(drho12_dt));
}

std::vector<double> clustered_grid(double tau, std::size_t samples) {
  std::vector<double> t(samples);
  for (std::size_t k = 1; k <= samples; ++k) {
    t[k - 1] = 0.5 * tau * (1.0 - std::cos(std::numbers::pi * static_cast<double>(k) /
                                           static_cast<double>(samples)));
  }
  t.back() = tau;
  return t;
}

TightnessReport check_alpha_tight(const Trajectory& trajectory, std::size_t samples) {
  require_qubit_samples(trajectory, samples, "check_alpha_tight");
  TightnessReport report;
  report.sampled_times = clustered_grid(trajectory.horizon(), samples);
  const Eigen::Vector3d n0 = bloch_at(trajectory, 0.0);
  report.signs.min_value = std::numeric_limits<double>::infinity();
  report.signs.max_value = -std::numeric_limits<double>::infinity();

  for (double t : report.sampled_times) {
    const ComplexMatrix rate = trajectory.state_derivative(t).value;
    const Eigen::Vector3d dn = qstate::bloch_components(rate);
    const double speed = dn.norm();
    const Eigen::Vector3d chord = bloch_at(trajectory, t) - n0;
    if (chord.norm() <= kDirectionTolerance) {
      // No direction to compare against: only a resting path passes.
      const double r = speed <= kDirectionTolerance ? 0.0 : 1.0;
      report.residuals.push_back(r);
      report.population_residuals.push_back(r);
      continue;
    }
    const Eigen::Vector3d dir = chord.normalized();
    const double scale = std::max(speed, kDirectionTolerance);
    report.residuals.push_back((dn - speed * dir).norm() / scale);

    // (Re rho12', -Im rho12', rho11') = Omega r_hat.
    const double rho11 = rate(0, 0).real();
    const Complex rho12 = rate(0, 1);
    const double om = omega(rho11, rho12);
    const Eigen::Vector3d pc(rho12.real(), -rho12.imag(), rho11);
    report.population_residuals.push_back((pc - om * dir).norm() /
                                          std::max(om, kDirectionTolerance));

    report.signs.min_value = std::min(report.signs.min_value, dir.z());
    report.signs.max_value = std::max(report.signs.max_value, dir.z());
  }
  close_report(report);
  return report;
}

TightnessReport check_alpha_beta_tight(const Trajectory& trajectory, SchattenOrder order,
                                       std::size_t samples) {
  require_qubit_samples(trajectory, samples, "check_alpha_beta_tight");
  const DensityMatrix& rho0 = trajectory.initial_state();
  if (!qstate::is_pure(rho0)) {
    throw Error(ErrorCode::kPrecondition,
                "check_alpha_beta_tight requires a pure initial state, purity is " +
                    fmt(qstate::purity(rho0)));
  }
  TightnessReport report;
  report.sampled_times = clustered_grid(trajectory.horizon(), samples);
  const double factor = std::pow(2.0, -order.reciprocal());

  // Rotate Bloch space so n0 becomes z; the state basis becomes {psi0, psi0_perp}.
  const Eigen::Vector3d n0 = bloch_at(trajectory, 0.0).normalized();
  const Eigen::Matrix3d rotation =
      Eigen::Quaterniond::FromTwoVectors(n0, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  const matnum::ComplexVector psi0 = qstate::principal_vector(rho0);
  matnum::ComplexVector perp(2);
  perp << -std::conj(psi0(1)), std::conj(psi0(0));

  report.signs.min_value = std::numeric_limits<double>::infinity();
  report.signs.max_value = -std::numeric_limits<double>::infinity();
  bool moving = false;
  for (double t : report.sampled_times) {
    const ComplexMatrix rate = trajectory.state_derivative(t).value;
    const Eigen::Vector3d dn = rotation * qstate::bloch_components(rate);
    const double speed = dn.norm();
    moving = moving || speed > kDirectionTolerance;
    report.residuals.push_back(std::abs(speed - factor * (-dn.z())) /
                               std::max(speed, kDirectionTolerance));

    const double rho11 = psi0.dot(rate * psi0).real();
    const Complex rho12 = psi0.dot(rate * perp);
    const double om = omega(rho11, rho12);
    report.population_residuals.push_back(std::abs(om - factor * (-rho11)) /
                                          std::max(om, kDirectionTolerance));

    report.signs.min_value = std::min(report.signs.min_value, rho11);
    report.signs.max_value = std::max(report.signs.max_value, rho11);
    if (rho11 > kSignTolerance) ++report.signs.violations;
  }
  // |n_z'| <= |n'| makes the equality impossible for factor < 1 unless nothing moves.
  report.feasible = order.is_infinite() || !moving;
  close_report(report);
  return report;
}

DensityMatrix StateLine::at(double lambda) const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "line parameter " + fmt(lambda) + " is outside [0, 1]");
  }
  return DensityMatrix((1.0 - lambda) * rho0.mat() + lambda * rho1.mat());
}

RadialProfile exponential_profile(double depth, double rate) {
  if (!(depth >= 0.0 && depth <= 2.0) || !(rate >= 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::kProfile, "exponential profile needs depth in [0, 2] and rate >= 0");
  }
  return {"exponential",
          [depth, rate](double t) { return -depth * std::expm1(-rate * t); },
          [depth, rate](double t) { return depth * rate * std::exp(-rate * t); }};
}

RadialProfile linear_profile(double depth, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorCode::kProfile, "linear profile needs tau > 0");
  return {"linear", [depth, tau](double t) { return depth * t / tau; },
          [depth, tau](double) { return depth / tau; }};
}

GeodesicPath line_geodesic(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (rho0.dim() != rho1.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "line_geodesic: dimensions " +
                                                   std::to_string(rho0.dim()) + " and " +
                                                   std::to_string(rho1.dim()));
  }
  return StateLine{rho0, rho1};
}

GeodesicPath radial_path(const BlochVector& n0, RadialProfile profile, double tau) {
  if (std::abs(n0.norm() - 1.0) > qstate::kStateTolerance) {
    throw Error(ErrorCode::kInvalidInput,
                "radial path needs a unit initial Bloch vector, |n0| = " + fmt(n0.norm()));
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::kInvalidInput, "radial path horizon must be positive");
  }
  if (!profile.depth) throw Error(ErrorCode::kProfile, "radial profile has no depth function");
  const double g0 = profile.depth(0.0);
  if (std::abs(g0) > kDirectionTolerance) {
    throw Error(ErrorCode::kProfile, "radial profile must start at 0, g(0) = " + fmt(g0));
  }
  double prev = g0;
  for (std::size_t k = 1; k <= kProfileGrid; ++k) {
    const double t = tau * static_cast<double>(k) / kProfileGrid;
    const double g = profile.depth(t);
    if (!std::isfinite(g) || g < prev - kDirectionTolerance) {
      throw Error(ErrorCode::kProfile,
                  "radial profile '" + profile.label + "' decreases near t = " + fmt(t));
    }
    prev = g;
  }
  if (prev > 2.0 + kDirectionTolerance) {
    throw Error(ErrorCode::kProfile,
                "radial profile leaves the Bloch ball, g(tau) = " + fmt(prev) + " > 2");
  }
  return BlochRadial{n0.vec(), std::move(profile)};
}

Trajectory traverse(const GeodesicPath& path, double tau) {
  if (const auto* line = std::get_if<StateLine>(&path)) {
    return Trajectory(channels::replacement(line->rho1, tau), line->rho0, tau);
  }
  return traverse_bloch(path, tau);
}

Trajectory traverse_bloch(const GeodesicPath& path, double tau) {
  dynamics::BlochPath bp;
  if (const auto* line = std::get_if<StateLine>(&path)) {
    if (line->rho0.dim() != 2) {
      throw Error(ErrorCode::kQubitOnly, "Bloch traversal of a line needs qubit endpoints");
    }
    const Eigen::Vector3d a = qstate::to_bloch(line->rho0).vec();
    const Eigen::Vector3d b = qstate::to_bloch(line->rho1).vec();
    bp.position = [a, b, tau](double t) -> Eigen::Vector3d { return a + (t / tau) * (b - a); };
    bp.velocity = [a, b, tau](double) -> Eigen::Vector3d { return (b - a) / tau; };
  } else {
    const auto& radial = std::get<BlochRadial>(path);
    const Eigen::Vector3d n0 = radial.n0;
    const RadialProfile profile = radial.profile;
    bp.position = [n0, profile](double t) -> Eigen::Vector3d { return (1.0 - profile.depth(t)) * n0; };
    if (profile.rate) {
      bp.velocity = [n0, profile](double t) -> Eigen::Vector3d { return -profile.rate(t) * n0; };
    }
  }
  return Trajectory::from_bloch_path(std::move(bp), tau);
}

}  // namespace qsl::tightness
