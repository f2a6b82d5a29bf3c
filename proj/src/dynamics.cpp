#include "qsl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsl/error.hpp"
#include "qsl/quadrature.hpp"

namespace qsl::dynamics {
namespace {

using matnum::Complex;

constexpr std::size_t kInitialSteps = 2048;
constexpr std::size_t kMaxSteps = std::size_t{1} << 18;
constexpr double kRichardsonTolerance = 1e-9;
// Relative offset used when a Kraus derivative is singular at an endpoint
// (e.g. sqrt(1 - e^{-gt}) at t = 0); the product K rho dK^dag stays finite.
constexpr double kEndpointNudge = 1e-12;
constexpr std::size_t kValidationSamples = 33;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix bloch_matrix(const Eigen::Vector3d& n) {
  ComplexMatrix rho(2, 2);
  rho << 0.5 * (1.0 + n.z()), 0.5 * Complex(n.x(), -n.y()), 0.5 * Complex(n.x(), n.y()),
      0.5 * (1.0 - n.z());
  return rho;
}

ComplexMatrix bloch_rate_matrix(const Eigen::Vector3d& v) {
  ComplexMatrix m(2, 2);
  m << 0.5 * v.z(), 0.5 * Complex(v.x(), -v.y()), 0.5 * Complex(v.x(), v.y()), -0.5 * v.z();
  return m;
}

// Column-major vec(rho) <-> rho.
Eigen::VectorXcd vec(const ComplexMatrix& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

ComplexMatrix unvec(const Eigen::VectorXcd& v, Eigen::Index d) {
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

// Superoperator of the Lindblad generator acting on column-major vec(rho).
ComplexMatrix lindblad_superoperator(const LindbladEvolution& gen, Eigen::Index d) {
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix& h = gen.hamiltonian.mat();
  const Complex i{0.0, 1.0};
  ComplexMatrix sup = -i * (kron(id, h) - kron(h.transpose(), id));
  for (const JumpOperator& jump : gen.jumps) {
    const ComplexMatrix& l = jump.op;
    const ComplexMatrix ldl = l.adjoint() * l;
    sup += jump.rate *
           (kron(l.conjugate(), l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id));
  }
  return sup;
}

// Classical RK4 step map for a constant linear generator: 1 + z + z^2/2 + z^3/6 + z^4/24.
ComplexMatrix rk4_step_map(const ComplexMatrix& generator, double h) {
  const ComplexMatrix z = h * generator;
  const auto n = generator.rows();
  ComplexMatrix term = ComplexMatrix::Identity(n, n);
  ComplexMatrix out = term;
  for (int k = 1; k <= 4; ++k) {
    term = term * z / static_cast<double>(k);
    out += term;
  }
  return out;
}

std::vector<Eigen::VectorXcd> rk4_grid(const ComplexMatrix& step_map, const Eigen::VectorXcd& v0,
                                       std::size_t steps) {
  std::vector<Eigen::VectorXcd> nodes;
  nodes.reserve(steps + 1);
  nodes.push_back(v0);
  for (std::size_t k = 0; k < steps; ++k) nodes.push_back(step_map * nodes.back());
  return nodes;
}

void check_completeness(const std::vector<ComplexMatrix>& ks, Eigen::Index d, double t) {
  if (ks.empty()) throw Error(ErrorCode::kInvalidInput, "Kraus schedule returned no operators");
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& k : ks) {
    if (k.rows() != d || k.cols() != d) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "Kraus operator is " + std::to_string(k.rows()) + "x" +
                      std::to_string(k.cols()) + ", state dimension is " + std::to_string(d));
    }
    sum += k.adjoint() * k;
  }
  const double dev = (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (!(dev <= kCompletenessTolerance)) {
    throw Error(ErrorCode::kInvalidInput, "Kraus operators are not trace preserving at t = " +
                                              fmt(t) + " (deviation " + fmt(dev) + ")");
  }
}

bool all_finite(const std::vector<ComplexMatrix>& ms) {
  return std::all_of(ms.begin(), ms.end(), [](const ComplexMatrix& m) { return m.allFinite(); });
}

struct KrausPair {
  std::vector<ComplexMatrix> ops;
  std::vector<ComplexMatrix> rates;
};

}  // namespace

namespace detail {

struct Prepared {
  DynamicsSpec spec;
  DensityMatrix rho0;
  double tau;
  std::vector<double> breakpoints;
  Eigen::Index dim;

  // Hamiltonian: rho0 in the energy eigenbasis.
  Eigen::VectorXd energies;
  ComplexMatrix eigvecs;
  ComplexMatrix rho0_energy;

  // Lindblad: superoperator, RK4 grid on [0, tau] and its step.
  ComplexMatrix superop;
  double step = 0.0;
  std::vector<Eigen::VectorXcd> nodes;

  // Kraus operators and derivatives at t, moved off a singular endpoint.
  KrausPair kraus_at(const KrausSchedule& k, double t) const {
    KrausPair out{k.operators(t), k.derivatives(t)};
    if (all_finite(out.ops) && all_finite(out.rates)) return out;
    const double nudge = kEndpointNudge * std::max(1.0, tau);
    const double shifted = t < 0.5 * tau ? t + nudge : t - nudge;
    out = {k.operators(shifted), k.derivatives(shifted)};
    if (!all_finite(out.ops) || !all_finite(out.rates)) {
      throw Error(ErrorCode::kUnsupportedSchedule,
                  "Kraus schedule '" + k.label + "' is not finite near t = " + fmt(t));
    }
    return out;
  }

  Prepared(DynamicsSpec s, DensityMatrix r, double t, std::vector<double> b)
      : spec(std::move(s)),
        rho0(std::move(r)),
        tau(t),
        breakpoints(std::move(b)),
        dim(static_cast<Eigen::Index>(rho0.dim())) {}
};

}  // namespace detail

std::string_view variant_name(const DynamicsSpec& spec) noexcept {
  switch (spec.index()) {
    case 0: return "hamiltonian";
    case 1: return "lindblad";
    case 2: return "kraus";
    case 3: return "bloch-path";
  }
  return "unknown";
}

ComplexMatrix lindblad_rhs(const LindbladEvolution& gen, const ComplexMatrix& rho) {
  const Complex i{0.0, 1.0};
  ComplexMatrix out = -i * matnum::commutator(gen.hamiltonian.mat(), rho);
  for (const JumpOperator& jump : gen.jumps) {
    const ComplexMatrix& l = jump.op;
    const ComplexMatrix ldl = l.adjoint() * l;
    out += jump.rate * (l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

Trajectory::Trajectory(DynamicsSpec spec, DensityMatrix rho0, double tau,
                       std::vector<double> breakpoints) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::kInvalidInput, "horizon must be a positive finite time, got " + fmt(tau));
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double b : breakpoints) {
    if (!(b > 0.0 && b < tau)) {
      throw Error(ErrorCode::kInvalidInput, "breakpoint " + fmt(b) + " is outside (0, tau)");
    }
  }
  auto prep = std::make_shared<detail::Prepared>(std::move(spec), std::move(rho0), tau,
                                                 std::move(breakpoints));
  const Eigen::Index d = prep->dim;
  auto require_dim = [d](std::size_t other, const char* what) {
    if (static_cast<Eigen::Index>(other) != d) {
      throw Error(ErrorCode::kDimensionMismatch, std::string(what) + " has dimension " +
                                                     std::to_string(other) + ", state has " +
                                                     std::to_string(d));
    }
  };

  if (auto* ham = std::get_if<HamiltonianEvolution>(&prep->spec)) {
    require_dim(ham->hamiltonian.dim(), "Hamiltonian");
    const auto eig = matnum::hermitian_eigen(ham->hamiltonian.mat());
    prep->energies = eig.values;
    prep->eigvecs = eig.vectors;
    prep->rho0_energy = eig.vectors.adjoint() * prep->rho0.mat() * eig.vectors;
  } else if (auto* lind = std::get_if<LindbladEvolution>(&prep->spec)) {
    require_dim(lind->hamiltonian.dim(), "Hamiltonian");
    for (const JumpOperator& jump : lind->jumps) {
      if (jump.op.rows() != d || jump.op.cols() != d) {
        throw Error(ErrorCode::kDimensionMismatch, "jump operator dimension does not match state");
      }
      if (!jump.op.allFinite()) throw Error(ErrorCode::kInvalidInput, "jump operator is not finite");
      if (!(jump.rate >= 0.0) || !std::isfinite(jump.rate)) {
        throw Error(ErrorCode::kInvalidInput, "Lindblad rate must be finite and >= 0, got " +
                                                  fmt(jump.rate));
      }
    }
    prep->superop = lindblad_superoperator(*lind, d);
    const Eigen::VectorXcd v0 = vec(prep->rho0.mat());

    // Halve the step until the solution at shared nodes stops moving.
    std::size_t steps = kInitialSteps;
    auto coarse = rk4_grid(rk4_step_map(prep->superop, tau / steps), v0, steps);
    while (true) {
      const std::size_t fine_steps = 2 * steps;
      auto fine = rk4_grid(rk4_step_map(prep->superop, tau / fine_steps), v0, fine_steps);
      double change = 0.0;
      for (std::size_t k = 0; k <= steps; ++k) {
        change = std::max(change, (coarse[k] - fine[2 * k]).cwiseAbs().maxCoeff());
      }
      if (change < kRichardsonTolerance) {
        prep->nodes = std::move(fine);
        prep->step = tau / fine_steps;
        break;
      }
      if (fine_steps >= kMaxSteps) {
        throw Error(ErrorCode::kIntegrationFailure,
                    "Lindblad integration did not settle below " + fmt(kRichardsonTolerance) +
                        " with " + std::to_string(fine_steps) + " steps (change " + fmt(change) +
                        ")");
      }
      coarse = std::move(fine);
      steps = fine_steps;
    }
    const Complex final_trace = unvec(prep->nodes.back(), d).trace();
    if (std::abs(final_trace - 1.0) > kTraceDriftTolerance) {
      throw Error(ErrorCode::kIntegrationFailure, "Lindblad trace drifted to " +
                                                      fmt(final_trace.real()));
    }
  } else if (auto* kraus = std::get_if<KrausSchedule>(&prep->spec)) {
    if (!kraus->operators) throw Error(ErrorCode::kInvalidInput, "Kraus schedule has no operators");
    for (std::size_t k = 0; k < kValidationSamples; ++k) {
      const double t = tau * static_cast<double>(k) / (kValidationSamples - 1);
      const auto ops = kraus->operators(t);
      if (!all_finite(ops)) {
        throw Error(ErrorCode::kInvalidInput, "Kraus operators are not finite at t = " + fmt(t));
      }
      check_completeness(ops, d, t);
    }
    // K(0) must act as the identity channel on rho0.
    ComplexMatrix start = ComplexMatrix::Zero(d, d);
    for (const auto& k : kraus->operators(0.0)) start += k * prep->rho0.mat() * k.adjoint();
    if ((start - prep->rho0.mat()).cwiseAbs().maxCoeff() > qstate::kStateTolerance) {
      throw Error(ErrorCode::kInvalidInput, "Kraus schedule does not start at the identity map");
    }
  } else if (auto* path = std::get_if<BlochPath>(&prep->spec)) {
    if (d != 2) throw Error(ErrorCode::kQubitOnly, "Bloch paths describe qubits only");
    if (!path->position) throw Error(ErrorCode::kInvalidInput, "Bloch path has no position");
    for (std::size_t k = 0; k <= 8 * kValidationSamples; ++k) {
      const double t = tau * static_cast<double>(k) / (8 * kValidationSamples);
      const Eigen::Vector3d n = path->position(t);
      if (!n.allFinite() || n.norm() > 1.0 + qstate::kStateTolerance) {
        throw Error(ErrorCode::kNonphysicalState,
                    "Bloch path leaves the unit ball at t = " + fmt(t) + " (|n| = " +
                        fmt(n.norm()) + ")");
      }
    }
    const double mismatch = (bloch_matrix(path->position(0.0)) - prep->rho0.mat()).cwiseAbs().maxCoeff();
    if (mismatch > qstate::kStateTolerance) {
      throw Error(ErrorCode::kInvalidInput, "Bloch path does not start at the initial state");
    }
  }
  prepared_ = std::move(prep);
}

Trajectory Trajectory::from_bloch_path(BlochPath path, double tau,
                                       std::vector<double> breakpoints) {
  if (!path.position) throw Error(ErrorCode::kInvalidInput, "Bloch path has no position");
  DensityMatrix rho0 = qstate::from_bloch(qstate::BlochVector(path.position(0.0)));
  return Trajectory(std::move(path), std::move(rho0), tau, std::move(breakpoints));
}

const DynamicsSpec& Trajectory::spec() const noexcept { return prepared_->spec; }
const DensityMatrix& Trajectory::initial_state() const noexcept { return prepared_->rho0; }
double Trajectory::horizon() const noexcept { return prepared_->tau; }
std::size_t Trajectory::dim() const noexcept { return static_cast<std::size_t>(prepared_->dim); }
std::span<const double> Trajectory::breakpoints() const noexcept { return prepared_->breakpoints; }

double Trajectory::finite_difference_step() const noexcept {
  return 1e-6 * std::max(1.0, prepared_->tau);
}

ComplexMatrix Trajectory::raw_state(double t) const {
  const detail::Prepared& p = *prepared_;
  const Complex i{0.0, 1.0};
  return std::visit(
      [&](const auto& spec) -> ComplexMatrix {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, HamiltonianEvolution>) {
          ComplexMatrix rot = p.rho0_energy;
          for (Eigen::Index j = 0; j < p.dim; ++j) {
            for (Eigen::Index k = 0; k < p.dim; ++k) {
              rot(j, k) *= std::exp(-i * (p.energies(j) - p.energies(k)) * t);
            }
          }
          return p.eigvecs * rot * p.eigvecs.adjoint();
        } else if constexpr (std::is_same_v<T, LindbladEvolution>) {
          const double clamped = std::clamp(t, 0.0, p.tau);
          auto k = static_cast<std::size_t>(std::floor(clamped / p.step));
          k = std::min(k, p.nodes.size() - 1);
          const double rest = clamped - static_cast<double>(k) * p.step;
          if (rest <= 0.0) return unvec(p.nodes[k], p.dim);
          return unvec(rk4_step_map(p.superop, rest) * p.nodes[k], p.dim);
        } else if constexpr (std::is_same_v<T, KrausSchedule>) {
          ComplexMatrix rho = ComplexMatrix::Zero(p.dim, p.dim);
          for (const auto& k : spec.operators(t)) rho += k * p.rho0.mat() * k.adjoint();
          return rho;
        } else {
          return bloch_matrix(spec.position(t));
        }
      },
      p.spec);
}

DensityMatrix Trajectory::evolve(double t) const {
  const detail::Prepared& p = *prepared_;
  if (!(t >= 0.0 && t <= p.tau)) {
    throw Error(ErrorCode::kInvalidInput,
                "time " + fmt(t) + " is outside [0, " + fmt(p.tau) + "]");
  }
  ComplexMatrix rho = raw_state(t);
  const Complex trace = rho.trace();
  if (!rho.allFinite() || std::abs(trace - 1.0) > kTraceDriftTolerance) {
    throw Error(ErrorCode::kIntegrationFailure,
                "evolved state at t = " + fmt(t) + " has trace " + fmt(trace.real()));
  }
  rho /= trace.real();
  return DensityMatrix(rho);
}

StateDerivative Trajectory::state_derivative(double t) const {
  const detail::Prepared& p = *prepared_;
  if (!(t >= 0.0 && t <= p.tau)) {
    throw Error(ErrorCode::kInvalidInput,
                "time " + fmt(t) + " is outside [0, " + fmt(p.tau) + "]");
  }
  const Complex i{0.0, 1.0};

  auto finite_difference = [&]() {
    const double h = finite_difference_step();
    ComplexMatrix d;
    if (t - h >= 0.0 && t + h <= p.tau) {
      d = (raw_state(t + h) - raw_state(t - h)) / (2.0 * h);
    } else if (t - h < 0.0) {
      d = (-3.0 * raw_state(t) + 4.0 * raw_state(t + h) - raw_state(t + 2.0 * h)) / (2.0 * h);
    } else {
      d = (3.0 * raw_state(t) - 4.0 * raw_state(t - h) + raw_state(t - 2.0 * h)) / (2.0 * h);
    }
    return StateDerivative{d, true};
  };

  return std::visit(
      [&](const auto& spec) -> StateDerivative {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, HamiltonianEvolution>) {
          return {-i * matnum::commutator(spec.hamiltonian.mat(), raw_state(t)), false};
        } else if constexpr (std::is_same_v<T, LindbladEvolution>) {
          return {unvec(p.superop * vec(raw_state(t)), p.dim), false};
        } else if constexpr (std::is_same_v<T, KrausSchedule>) {
          if (!spec.derivatives) return finite_difference();
          const KrausPair kp = p.kraus_at(spec, t);
          if (kp.ops.size() != kp.rates.size()) {
            throw Error(ErrorCode::kUnsupportedSchedule,
                        "Kraus schedule '" + spec.label + "' has mismatched derivative count");
          }
          check_completeness(kp.ops, p.dim, t);
          ComplexMatrix d = ComplexMatrix::Zero(p.dim, p.dim);
          for (std::size_t j = 0; j < kp.ops.size(); ++j) {
            const ComplexMatrix half = kp.ops[j] * p.rho0.mat() * kp.rates[j].adjoint();
            d += half + half.adjoint();
          }
          return {d, false};
        } else {
          if (!spec.velocity) return finite_difference();
          return {bloch_rate_matrix(spec.velocity(t)), false};
        }
      },
      p.spec);
}

double kraus_denominator(const Trajectory& trajectory, SchattenOrder order) {
  const auto* kraus = std::get_if<KrausSchedule>(&trajectory.spec());
  if (kraus == nullptr) {
    throw Error(ErrorCode::kUnsupportedSchedule,
                "Kraus denominator needs a Kraus schedule, got " +
                    std::string(variant_name(trajectory.spec())));
  }
  if (!kraus->derivatives) {
    throw Error(ErrorCode::kUnsupportedSchedule,
                "Kraus schedule '" + kraus->label + "' has no derivative evaluator");
  }
  const ComplexMatrix& rho0 = trajectory.initial_state().mat();
  const auto d = static_cast<Eigen::Index>(trajectory.dim());
  const double tau = trajectory.horizon();

  auto integrand = [&](double t) {
    KrausPair kp{kraus->operators(t), kraus->derivatives(t)};
    if (!all_finite(kp.ops) || !all_finite(kp.rates)) {
      const double nudge = kEndpointNudge * std::max(1.0, tau);
      const double shifted = t < 0.5 * tau ? t + nudge : t - nudge;
      kp = {kraus->operators(shifted), kraus->derivatives(shifted)};
    }
    check_completeness(kp.ops, d, t);
    double sum = 0.0;
    for (std::size_t j = 0; j < kp.ops.size(); ++j) {
      sum += matnum::schatten_norm(kp.ops[j] * rho0 * kp.rates[j].adjoint(), order);
    }
    return 2.0 * sum;
  };
  return quad::integrate(integrand, 0.0, tau, trajectory.breakpoints()).value;
}

}  // namespace qsl::dynamics
