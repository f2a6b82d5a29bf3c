#include "qsl/bounds.hpp"

#include <numbers>

#include "qsl/channels.hpp"
#include "qsl/harness/suites.hpp"
#include "qsl/harness/scenario.hpp"
#include "support.hpp"

namespace qsl::testing {
namespace {

using namespace bounds;
using dynamics::HamiltonianEvolution;
using qstate::BlochVector;
using qstate::from_bloch;
using std::numbers::pi;

const DensityMatrix kPlus = from_bloch(BlochVector(1, 0, 0));

double factor(const SchattenOrder& a) { return std::pow(2.0, -1.0 + a.reciprocal()); }

Trajectory precession_by(double theta, double tau = 1.0) {
  return Trajectory(channels::precession(theta / tau, {0, 0, 1}), kPlus, tau);
}

Trajectory dephasing_from_plus(double g, double tau) { return Trajectory(channels::dephasing(g), kPlus, tau); }

std::vector<Trajectory> random_pure_qubits(const std::string& name, std::size_t n) {
  std::vector<Trajectory> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = rng_for(name, i);
    out.push_back(harness::build_trajectory(harness::random_qubit_scenario(rng, true, name)));
  }
  return out;
}

TEST(PathLength, StaticIsZero) {
  const Trajectory traj(HamiltonianEvolution{qstate::HermitianObservable(ComplexMatrix::Zero(2, 2))}, kPlus, 1.0);
  EXPECT_EQ(path_length(traj, kTwo).value, 0.0);
}

TEST(PathLength, PrecessionArc) {
  for (double theta : {0.3, 1.0, pi, 5.0}) {
    const auto traj = precession_by(theta, 1.7);
    for (const auto& a : all_orders()) EXPECT_NEAR(path_length(traj, a).value, factor(a) * theta, 1e-9);
  }
}

TEST(PathLength, DephasingClosedForm) {
  const double g = 1.3, tau = 2.0;
  const auto traj = dephasing_from_plus(g, tau);
  for (const auto& a : all_orders()) {
    EXPECT_NEAR(path_length(traj, a).value, factor(a) * (1.0 - std::exp(-g * tau)), 1e-9);
  }
}

TEST(PathLength, AtLeastTheChord) {
  for (const auto& traj : random_pure_qubits("chord", 30)) {
    const ComplexMatrix delta = traj.evolve(traj.horizon()).mat() - traj.initial_state().mat();
    for (const auto& a : all_orders()) {
      EXPECT_GE(path_length(traj, a).value, matnum::schatten_norm(delta, a) - 1e-8);
    }
  }
}

TEST(AlphaQsl, PrecessionHalfTurn) {
  const auto traj = precession_by(pi, 2.0);
  for (const auto& a : all_orders()) {
    const auto e = alpha_qsl(traj, a);
    EXPECT_NEAR(e.ratio, 2.0 / pi, 1e-9);
    EXPECT_NEAR(e.ratio, 0.63662, 5e-6);
  }
}

TEST(AlphaQsl, DephasingSaturates) {
  for (const auto& a : all_orders()) EXPECT_NEAR(alpha_qsl(dephasing_from_plus(0.6, 1.5), a).ratio, 1.0, 1e-9);
}

TEST(AlphaQsl, CyclicUnitaryIsZeroButNotDegenerate) {
  const auto e = alpha_qsl(precession_by(2.0 * pi), kOne);
  EXPECT_NEAR(e.value, 0.0, 1e-12);
  EXPECT_FALSE(e.degenerate);
}

TEST(AlphaQsl, FrozenDynamicsIsDegenerate) {
  const Trajectory still(HamiltonianEvolution{qstate::HermitianObservable(qstate::pauli_z())},
                         from_bloch(BlochVector(0, 0, 0.5)), 1.0);
  const auto e = alpha_qsl(still, kTwo);
  EXPECT_TRUE(e.degenerate);
  EXPECT_EQ(e.value, 0.0);
  const auto c = cpm_qsl(still);
  EXPECT_TRUE(c.degenerate);
  EXPECT_EQ(c.value, 0.0);
}

TEST(AlphaQsl, MatchesBlochForm) {
  for (std::size_t i = 0; i < 40; ++i) {
    auto rng = rng_for("bloch-form", i);
    const auto traj = harness::build_trajectory(harness::random_qubit_scenario(rng, i % 2 == 0, "b"));
    const double bloch = alpha_qsl_bloch(traj).value;
    for (const auto& a : all_orders()) {
      EXPECT_NEAR(alpha_qsl(traj, a).value, bloch, 1e-9 * std::max(bloch, 1e-3));
    }
  }
}

TEST(AlphaQsl, NeverExceedsTau) {
  for (std::size_t i = 0; i < 30; ++i) {
    auto rng = rng_for("never-exceeds", i);
    const auto traj = harness::build_trajectory(harness::random_qudit_scenario(rng, 2 + i % 3, "q"));
    for (const auto& a : all_orders()) EXPECT_LE(alpha_qsl(traj, a).ratio, 1.0 + 1e-6);
  }
}

TEST(ClosedForm, FrozenWhenCommuting) {
  const qstate::HermitianObservable h(qstate::pauli_z());
  const auto e = alpha_qsl_closed(h, from_bloch(BlochVector(0, 0, 0.3)), 1.0, kTwo);
  EXPECT_TRUE(e.frozen);
  EXPECT_EQ(e.value, 0.0);
}

TEST(ClosedForm, HilbertSchmidtIdentities) {
  for (std::size_t i = 0; i < 50; ++i) {
    auto rng = rng_for("closed-hs", i);
    const auto d = 2 + static_cast<Eigen::Index>(i % 3);
    const qstate::HermitianObservable h(harness::random_hermitian(rng, d));
    const bool pure = i % 2 == 0;
    const auto rho = pure ? DensityMatrix::pure(harness::random_pure_vector(rng, d)) : harness::random_density_matrix(rng, d);
    const double tau = 0.8;
    const Trajectory traj(HamiltonianEvolution{h}, rho, tau);
    const double chord = matnum::schatten_norm(traj.evolve(tau).mat() - rho.mat(), kTwo);
    const auto e = alpha_qsl_closed(h, rho, tau, kTwo);
    EXPECT_NEAR(e.value, chord / std::sqrt(4.0 * qstate::coherence_il(rho, h)), 1e-10);
    if (pure) EXPECT_NEAR(e.value, chord / (std::sqrt(2.0 * qstate::energy_variance(rho, h))), 1e-10);
    for (const auto& a : all_orders()) {
      const double q = alpha_qsl(traj, a).value;
      EXPECT_NEAR(alpha_qsl_closed(h, rho, tau, a).value, q, 1e-8 * std::max(q, 1e-3));
    }
  }
}

TEST(AlphaBeta, DephasingRatio) {
  for (const auto& a : all_orders()) {
    EXPECT_NEAR(alpha_beta_qsl(dephasing_from_plus(0.9, 1.1), a).ratio, std::pow(2.0, -a.reciprocal()), 1e-9);
  }
}

TEST(AlphaBeta, RelationToDl) {
  for (const auto& traj : random_pure_qubits("ab-dl", 60)) {
    const double dl = dl_qsl(traj).value;
    for (const auto& a : all_orders()) {
      const double ab = alpha_beta_qsl(traj, a).value;
      EXPECT_NEAR(ab, std::pow(2.0, -a.reciprocal()) * dl, 1e-10 * std::max(1.0, dl));
    }
    EXPECT_NEAR(alpha_beta_qsl(traj, kInfinity).value, dl, 1e-9);
  }
}

TEST(AlphaBeta, BlochFormForMixedStates) {
  for (std::size_t i = 0; i < 60; ++i) {
    auto rng = rng_for("ab-bloch", i);
    const auto traj = harness::build_trajectory(harness::random_qubit_scenario(rng, false, "m"));
    for (const auto& a : all_orders()) {
      const double m = alpha_beta_qsl(traj, a).value;
      EXPECT_NEAR(alpha_beta_qsl_bloch(traj, a).value, m, 1e-10 * std::max(1.0, m));
    }
  }
}

TEST(AlphaBeta, BetaIsTheDual) {
  const auto e = alpha_beta_qsl(dephasing_from_plus(1.0, 1.0), SchattenOrder::finite(3.0));
  ASSERT_TRUE(e.beta.has_value());
  EXPECT_EQ(*e.beta, SchattenOrder::finite(1.5));
}

TEST(AlphaBeta, MixedStateUsesDualNorm) {
  auto rng = rng_for("ab-mixed");
  const auto rho = harness::random_density_matrix(rng, 3);
  const qstate::HermitianObservable h(harness::random_hermitian(rng, 3));
  const Trajectory traj(HamiltonianEvolution{h}, rho, 1.3);
  const auto a = SchattenOrder::finite(3.0);
  const ComplexMatrix rt = traj.evolve(1.3).mat();
  const double numerator = 1.3 * std::abs(((rt - rho.mat()) * rho.mat()).trace().real());
  const double expected = numerator / (matnum::schatten_norm(rho.mat(), a.dual()) * path_length(traj, a).value);
  EXPECT_NEAR(alpha_beta_qsl(traj, a).value, expected, 1e-12);
}

TEST(Dl, DephasingAndPrecession) {
  EXPECT_NEAR(dl_qsl(dephasing_from_plus(2.0, 0.7)).ratio, 1.0, 1e-9);
  EXPECT_NEAR(dl_qsl(precession_by(pi)).ratio, 2.0 / pi, 1e-9);
  EXPECT_NEAR(dl_qsl_bloch(precession_by(pi)).ratio, 2.0 / pi, 1e-12);
}

TEST(Dl, MixedInitialStateRejected) {
  const Trajectory traj(channels::depolarizing(1.0), from_bloch(BlochVector(0.2, 0, 0.3)), 1.0);
  try {
    dl_qsl(traj);
    FAIL() << "expected a precondition error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
    EXPECT_NE(std::string(e.what()).find("purity"), std::string::npos);
  }
}

TEST(Dl, AlphaIsTighter) {
  for (const auto& traj : random_pure_qubits("alpha-dl", 60)) {
    const double dl = dl_qsl(traj).value;
    EXPECT_NEAR(dl_qsl_bloch(traj).value, dl, 1e-10 * std::max(1.0, dl));
    for (const auto& a : all_orders()) EXPECT_GE(alpha_qsl(traj, a).value - dl, -1e-8);
  }
}

TEST(Cpm, DelegatesToHilbertSchmidt) {
  for (const auto& traj : random_pure_qubits("cpm", 20)) {
    const auto c = cpm_qsl(traj);
    EXPECT_EQ(c.value, alpha_qsl(traj, kTwo).value);
    EXPECT_NEAR(c.value, alpha_qsl(traj, kOne).value, 1e-9);
    EXPECT_NEAR(c.value, alpha_qsl(traj, kInfinity).value, 1e-9);
  }
}

TEST(Ceph, ZeroWhenReturning) {
  const auto e = ceph_qsl(precession_by(2.0 * pi));
  EXPECT_NEAR(e.value, 0.0, 1e-10);
}

TEST(Ceph, BelowAlphaBetaTwo) {
  const auto traj = dephasing_from_plus(0.8, 1.2);
  EXPECT_GE(alpha_beta_qsl(traj, kTwo).value - ceph_qsl(traj).value, -1e-9);
}

TEST(Ceph, ClosedFormOnDephasing) {
  const double g = 0.8, tau = 1.2;
  const double theta = std::acos(0.5 * (1.0 + std::exp(-g * tau)));
  const double length = (1.0 - std::exp(-g * tau)) / std::sqrt(2.0);
  const double expected = tau * 4.0 * theta * theta / (pi * pi) / length;
  EXPECT_NEAR(ceph_qsl(dephasing_from_plus(g, tau)).value, expected, 1e-10);
}

TEST(Ceph, RelativePurityAboveOne) {
  const Trajectory traj(channels::amplitude_damping(2.0), from_bloch(BlochVector(0, 0, 0.5)), 1.0);
  EXPECT_EQ(error_code_of([&] { ceph_qsl(traj); }), ErrorCode::kRelativePurity);
}

TEST(KrausAlpha, LooserThanAlpha) {
  for (std::size_t i = 0; i < 20; ++i) {
    auto rng = rng_for("kraus-alpha", i);
    auto sc = harness::random_qudit_scenario(rng, 3, "k");
    if (sc.channel != "custom-kraus") continue;
    const auto traj = harness::build_trajectory(sc);
    for (const auto& a : all_orders()) EXPECT_LE(kraus_alpha_qsl(traj, a).value, alpha_qsl(traj, a).value + 1e-8);
  }
}

TEST(TimeBounds, MandelstamTammSaturation) {
  for (double w : {0.5, 1.0, 3.0}) {
    const qstate::HermitianObservable h(0.5 * w * qstate::pauli_z());
    ComplexVector plus(2), minus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    EXPECT_NEAR(mt_time(h, plus, minus).value, pi / w, 1e-10);
    const Trajectory traj(HamiltonianEvolution{h}, DensityMatrix::pure(plus), pi / w);
    const auto reached = qstate::principal_vector(traj.evolve(pi / w));
    EXPECT_NEAR(mt_time(h, plus, reached).value, pi / w, 1e-10);
  }
}

TEST(TimeBounds, OrthogonalTargetGivesQuarterPeriod) {
  auto rng = rng_for("mt-orthogonal");
  const qstate::HermitianObservable h(harness::random_hermitian(rng, 3));
  ComplexVector a = ComplexVector::Zero(3), b = ComplexVector::Zero(3);
  a(0) = 1.0;
  b(1) = 1.0;
  const double de = std::sqrt(qstate::energy_variance(DensityMatrix::pure(a), h));
  EXPECT_NEAR(mt_time(h, a, b).value, pi / (2.0 * de), 1e-12);
  const auto lt = lt_time(h, a, b);
  EXPECT_NEAR(lt.value, std::max(pi / (2.0 * de), ml_time(h, a).value), 1e-12);
}

TEST(TimeBounds, GroundStateIsFrozenForMl) {
  const qstate::HermitianObservable h(diag({-1.0, 2.0}));
  ComplexVector g(2);
  g << 1.0, 0.0;
  EXPECT_TRUE(ml_time(h, g).frozen);
  EXPECT_TRUE(mt_time(h, g, g).frozen);
}

TEST(TimeBounds, LtNeedsOrthogonalTarget) {
  const qstate::HermitianObservable h(qstate::pauli_x());
  ComplexVector a(2), b(2);
  a << 1.0, 0.0;
  b << std::cos(0.3), std::sin(0.3);
  EXPECT_EQ(error_code_of([&] { lt_time(h, a, b); }), ErrorCode::kPrecondition);
}

TEST(ErrorEntries, NanValues) {
  const auto e = error_entry("dl", std::nullopt, std::nullopt, "boom");
  EXPECT_TRUE(std::isnan(e.value));
  EXPECT_TRUE(std::isnan(e.ratio));
  EXPECT_EQ(*e.error, "boom");
}

}  // namespace
}  // namespace qsl::testing
