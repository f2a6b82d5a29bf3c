#include "qsl/harness/sampling.hpp"

#include <cmath>

namespace qsl::harness {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Box-Muller on two uniform draws; std::normal_distribution is not pinned
// down by the standard, and suite output must not depend on the library.
double standard_normal(Rng& rng) {
  constexpr double kTwoPi = 6.283185307179586476925;
  const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace

std::uint64_t instance_seed(std::uint64_t seed, std::string_view suite, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ fnv1a(suite)) + index);
}

double uniform(Rng& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

Eigen::Vector3d random_unit_vector(Rng& rng) {
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(standard_normal(rng), standard_normal(rng), standard_normal(rng));
  } while (v.norm() < 1e-8);
  return v.normalized();
}

Eigen::Vector3d random_in_ball(Rng& rng) {
  return std::cbrt(uniform(rng, 0.0, 1.0)) * random_unit_vector(rng);
}

ComplexMatrix random_ginibre(Rng& rng, Eigen::Index d) {
  ComplexMatrix g(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double re = standard_normal(rng);
      const double im = standard_normal(rng);
      g(i, j) = {re, im};
    }
  }
  return g;
}

qstate::DensityMatrix random_density_matrix(Rng& rng, Eigen::Index d) {
  const ComplexMatrix g = random_ginibre(rng, d);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return qstate::DensityMatrix(rho);
}

ComplexVector random_pure_vector(Rng& rng, Eigen::Index d) {
  ComplexVector psi(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double re = standard_normal(rng);
    const double im = standard_normal(rng);
    psi(i) = {re, im};
  }
  return psi.normalized();
}

ComplexMatrix random_hermitian(Rng& rng, Eigen::Index d) {
  const ComplexMatrix g = random_ginibre(rng, d);
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix haar_unitary(Rng& rng, Eigen::Index d) {
  const Eigen::HouseholderQR<ComplexMatrix> qr(random_ginibre(rng, d));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

}  // namespace qsl::harness
