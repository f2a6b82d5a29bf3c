#include "qsl/qstate.hpp"

#include "support.hpp"

namespace qsl::testing {
namespace {

using namespace qstate;

ComplexVector ket(std::initializer_list<Complex> amplitudes) {
  ComplexVector v(static_cast<Eigen::Index>(amplitudes.size()));
  Eigen::Index i = 0;
  for (auto a : amplitudes) v(i++) = a;
  return v;
}

const double kS = 1.0 / std::sqrt(2.0);

TEST(Bloch, OriginIsMaximallyMixed) {
  const auto rho = from_bloch(BlochVector(0, 0, 0));
  EXPECT_LT((rho.mat() - 0.5 * ComplexMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(Bloch, NorthPoleIsGroundProjector) {
  const auto rho = from_bloch(BlochVector(0, 0, 1));
  EXPECT_LT((rho.mat() - diag({1.0, 0.0})).norm(), 1e-15);
}

TEST(Bloch, ToBlochExamples) {
  EXPECT_LT(to_bloch(DensityMatrix::maximally_mixed(2)).vec().norm(), 1e-15);
  const auto plus = to_bloch(DensityMatrix::pure(ket({kS, kS})));
  EXPECT_LT((plus.vec() - Eigen::Vector3d(1, 0, 0)).norm(), 1e-15);
}

TEST(Bloch, Roundtrips) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = rng_for("bloch-roundtrip", i);
    const Eigen::Vector3d n = harness::random_in_ball(rng);
    EXPECT_LT((to_bloch(from_bloch(BlochVector(n))).vec() - n).norm(), 1e-12);

    const auto rho = harness::random_density_matrix(rng, 2);
    const auto back = from_bloch(to_bloch(rho));
    EXPECT_LT((back.mat() - rho.mat()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Bloch, PopulationAndCoherenceMap) {
  auto rng = rng_for("population-map");
  const Eigen::Vector3d n = harness::random_in_ball(rng);
  const auto rho = from_bloch(BlochVector(n));
  EXPECT_NEAR(rho.mat()(0, 0).real(), 0.5 * (1.0 + n.z()), 1e-15);
  EXPECT_LT(std::abs(rho.mat()(0, 1) - 0.5 * Complex(n.x(), -n.y())), 1e-15);
}

TEST(Bloch, EigenvaluesAndPurity) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = rng_for("bloch-eigen", i);
    const Eigen::Vector3d n = harness::random_in_ball(rng);
    const auto rho = from_bloch(BlochVector(n));
    const auto e = matnum::hermitian_eigen(rho.mat());
    EXPECT_NEAR(e.values(0), 0.5 * (1.0 - n.norm()), 1e-12);
    EXPECT_NEAR(e.values(1), 0.5 * (1.0 + n.norm()), 1e-12);
    EXPECT_NEAR(purity(rho), 0.5 * (1.0 + n.squaredNorm()), 1e-12);
  }
}

TEST(Bloch, OutsideBallIsNonphysical) {
  EXPECT_EQ(error_code_of([] { BlochVector(0, 0, 1.2); }), ErrorCode::kNonphysicalState);
  EXPECT_NO_THROW(BlochVector(0, 0, 1.0 + 5e-11));
}

TEST(Bloch, QubitOnly) {
  EXPECT_EQ(error_code_of([] { to_bloch(DensityMatrix::maximally_mixed(3)); }), ErrorCode::kQubitOnly);
}

TEST(Density, ValidatesInvariants) {
  EXPECT_EQ(error_code_of([] { DensityMatrix(diag({0.6, 0.6})); }), ErrorCode::kNonphysicalState);
  EXPECT_EQ(error_code_of([] { DensityMatrix(diag({1.2, -0.2})); }), ErrorCode::kNonphysicalState);
  ComplexMatrix skew = diag({0.5, 0.5});
  skew(0, 1) = 0.1;
  EXPECT_EQ(error_code_of([&] { DensityMatrix{skew}; }), ErrorCode::kNonphysicalState);
}

TEST(PurityOverlap, Examples) {
  EXPECT_DOUBLE_EQ(purity(DensityMatrix::maximally_mixed(2)), 0.5);
  EXPECT_EQ(overlap(DensityMatrix::pure(ket({1, 0})), DensityMatrix::pure(ket({0, 1}))), 0.0);
  EXPECT_NEAR(purity(DensityMatrix::maximally_mixed(5)), 0.2, 1e-15);
}

TEST(PurityOverlap, QubitIdentity) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = rng_for("overlap", i);
    const Eigen::Vector3d n = harness::random_in_ball(rng);
    const Eigen::Vector3d m = harness::random_in_ball(rng);
    EXPECT_NEAR(overlap(from_bloch(BlochVector(n)), from_bloch(BlochVector(m))), 0.5 * (1.0 + n.dot(m)), 1e-12);
  }
}

TEST(PurityOverlap, PurityIsSelfOverlap) {
  auto rng = rng_for("self-overlap");
  const auto rho = harness::random_density_matrix(rng, 4);
  EXPECT_NEAR(purity(rho), overlap(rho, rho), 1e-15);
  EXPECT_THROW(overlap(rho, DensityMatrix::maximally_mixed(3)), Error);
}

TEST(PurityOverlap, PureDetection) {
  EXPECT_TRUE(is_pure(DensityMatrix::pure(ket({kS, Complex(0, kS)}))));
  EXPECT_FALSE(is_pure(from_bloch(BlochVector(0, 0, 0.9999))));
}

TEST(ClosedForm, Examples) {
  EXPECT_NEAR(qubit_norm_closed_form(BlochVector(0, 0, 0), kTwo), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(qubit_norm_closed_form(BlochVector(0, 0, 0), kTwo), 0.70711, 5e-6);
  for (const auto& order : all_orders()) {
    EXPECT_NEAR(qubit_norm_closed_form(BlochVector(0.6, 0, 0.8), order), 1.0, 1e-15);
  }
}

TEST(ClosedForm, MatchesMatrixRoute) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = rng_for("closed-form", i);
    const BlochVector n(harness::random_in_ball(rng));
    for (const auto& order : all_orders()) {
      EXPECT_NEAR(qubit_norm_closed_form(n, order), matnum::schatten_norm(from_bloch(n).mat(), order), 1e-12);
    }
  }
}

TEST(DistanceIdentity, ProportionalToEuclidean) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = rng_for("distance", i);
    const BlochVector n(harness::random_in_ball(rng));
    const BlochVector m(harness::random_in_ball(rng));
    for (const auto& order : all_orders()) {
      const double lhs = matnum::schatten_norm(from_bloch(n).mat() - from_bloch(m).mat(), order);
      EXPECT_NEAR(lhs, std::pow(2.0, -1.0 + order.reciprocal()) * euclidean_distance(n, m), 1e-12);
    }
  }
}

TEST(Coherence, CommutingPairVanishes) {
  const DensityMatrix rho(diag({0.7, 0.3}));
  const HermitianObservable h(diag({1.0, -1.0}));
  EXPECT_NEAR(coherence_il(rho, h), 0.0, 1e-15);
  EXPECT_NEAR(wy_skew(rho, h), 0.0, 1e-15);
}

TEST(Coherence, IdentityHamiltonian) {
  auto rng = rng_for("identity-h");
  const auto rho = harness::random_density_matrix(rng, 3);
  const HermitianObservable h(ComplexMatrix::Identity(3, 3));
  EXPECT_NEAR(coherence_il(rho, h), 0.0, 1e-14);
  EXPECT_NEAR(wy_skew(rho, h), 0.0, 1e-14);
  EXPECT_NEAR(energy_variance(rho, h), 0.0, 1e-14);
}

TEST(Coherence, PureStateIdentities) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = rng_for("pure-coherence", i);
    const auto d = 2 + static_cast<Eigen::Index>(i % 3);
    const auto rho = DensityMatrix::pure(harness::random_pure_vector(rng, d));
    const HermitianObservable h(harness::random_hermitian(rng, d));
    const double var = energy_variance(rho, h);
    EXPECT_NEAR(coherence_il(rho, h), 0.5 * var, 1e-10);
    EXPECT_NEAR(wy_skew(rho, h), var, 1e-10);
  }
}

TEST(Coherence, CommutatorNormAndChain) {
  for (std::uint64_t i = 0; i < 500; ++i) {
    auto rng = rng_for("coherence-chain", i);
    const auto d = 2 + static_cast<Eigen::Index>(i % 3);
    const auto rho = harness::random_density_matrix(rng, d);
    const HermitianObservable h(harness::random_hermitian(rng, d));
    const double il = coherence_il(rho, h);
    const double c = matnum::schatten_norm(matnum::commutator(h.mat(), rho.mat()), kTwo);
    EXPECT_NEAR(c * c, 4.0 * il, 1e-10);
    EXPECT_GE(wy_skew(rho, h) - il, -1e-10);
    EXPECT_GE(energy_variance(rho, h) - wy_skew(rho, h), -1e-10);
  }
}

TEST(Sqrt, SquaresBack) {
  auto rng = rng_for("psd-sqrt");
  const auto rho = harness::random_density_matrix(rng, 4);
  const ComplexMatrix r = psd_sqrt(rho.mat());
  EXPECT_LT((r * r - rho.mat()).norm(), 1e-12);
  const auto pure = DensityMatrix::pure(harness::random_pure_vector(rng, 3));
  EXPECT_LT((psd_sqrt(pure.mat()) - pure.mat()).norm(), 1e-12);
}

TEST(Principal, RecoversKetUpToPhase) {
  auto rng = rng_for("principal");
  const ComplexVector psi = harness::random_pure_vector(rng, 3);
  const ComplexVector back = principal_vector(DensityMatrix::pure(psi));
  EXPECT_NEAR(std::abs(psi.dot(back)), 1.0, 1e-12);
}

}  // namespace
}  // namespace qsl::testing
