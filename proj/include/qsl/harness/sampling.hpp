#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

#include "qsl/qstate.hpp"

namespace qsl::harness {

using Rng = std::mt19937_64;
using matnum::ComplexMatrix;
using matnum::ComplexVector;

/// Seed for instance `index` of a suite: splitmix64 over (seed, FNV-1a(suite), index).
/// Independent of evaluation order, so results do not depend on parallelism.
std::uint64_t instance_seed(std::uint64_t seed, std::string_view suite, std::uint64_t index);

double uniform(Rng& rng, double lo, double hi);
/// exp(uniform(log lo, log hi)).
double log_uniform(Rng& rng, double lo, double hi);
std::size_t uniform_index(Rng& rng, std::size_t n);

Eigen::Vector3d random_unit_vector(Rng& rng);
/// Uniform in the closed unit ball.
Eigen::Vector3d random_in_ball(Rng& rng);

/// Entries i.i.d. complex standard normal.
ComplexMatrix random_ginibre(Rng& rng, Eigen::Index d);
/// G G^dagger / Tr(G G^dagger): full-rank mixed state.
qstate::DensityMatrix random_density_matrix(Rng& rng, Eigen::Index d);
ComplexVector random_pure_vector(Rng& rng, Eigen::Index d);
/// (G + G^dagger) / 2.
ComplexMatrix random_hermitian(Rng& rng, Eigen::Index d);
/// QR of a Ginibre matrix with the phases of R's diagonal removed.
ComplexMatrix haar_unitary(Rng& rng, Eigen::Index d);

}  // namespace qsl::harness
