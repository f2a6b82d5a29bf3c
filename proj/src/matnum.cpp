#include "qsl/matnum.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qsl/error.hpp"

namespace qsl::matnum {
namespace {

// Relative asymmetry below which a matrix takes the Hermitian route.
constexpr double kHermitianRouteTol = 1e-13;

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

SchattenOrder SchattenOrder::finite(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidOrder,
                "Schatten order must satisfy 1 <= alpha < inf, got " + format_double(alpha));
  }
  return SchattenOrder(alpha);
}

SchattenOrder SchattenOrder::from_value(double alpha) {
  if (alpha == std::numeric_limits<double>::infinity()) return infinity();
  return finite(alpha);
}

SchattenOrder SchattenOrder::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "∞") return infinity();
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kInvalidOrder, "cannot parse Schatten order '" + std::string(text) + "'");
  }
  return from_value(value);
}

double SchattenOrder::value() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : alpha_;
}

SchattenOrder SchattenOrder::dual() const noexcept {
  if (infinite_) return SchattenOrder(1.0);
  if (alpha_ == 1.0) return infinity();
  return SchattenOrder(alpha_ / (alpha_ - 1.0));
}

std::string SchattenOrder::to_string() const {
  return infinite_ ? "inf" : format_double(alpha_);
}

double dual_order(double alpha) {
  return SchattenOrder::from_value(alpha).dual().value();
}

bool is_finite(const ComplexMatrix& a) {
  return a.allFinite();
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol;
}

void require_square_finite(const ComplexMatrix& a, std::string_view context) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(context) + ": expected a non-empty square matrix, got " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (!is_finite(a)) {
    throw Error(ErrorCode::kInvalidInput, std::string(context) + ": matrix has non-finite entries");
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, std::string_view context) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(context) + ": " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()));
  }
}

HermitianEigen hermitian_eigen(const ComplexMatrix& a) {
  require_square_finite(a, "hermitian_eigen");
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidInput, "hermitian_eigen: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SingularSpectrum singular_values(const ComplexMatrix& a) {
  require_square_finite(a, "singular_values");
  const auto n = static_cast<std::size_t>(a.rows());
  SingularSpectrum out;
  out.values.resize(n);

  const double scale = std::max(1.0, max_abs(a));
  if (is_hermitian(a, kHermitianRouteTol * scale)) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (a + a.adjoint()),
                                                        Eigen::EigenvaluesOnly);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = std::abs(solver.eigenvalues()(i));
  } else {
    const Eigen::JacobiSVD<ComplexMatrix> svd(a);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = svd.singularValues()(static_cast<Eigen::Index>(i));
  }
  std::sort(out.values.begin(), out.values.end(), std::greater<>());

  const double cutoff = kRankTolerance * std::max(1.0, out.values.front());
  out.rank = static_cast<std::size_t>(
      std::count_if(out.values.begin(), out.values.end(), [&](double s) { return s > cutoff; }));
  return out;
}

double schatten_norm(const SingularSpectrum& spectrum, SchattenOrder order) {
  if (spectrum.values.empty()) return 0.0;
  const double top = spectrum.values.front();
  if (order.is_infinite() || top == 0.0) return top;

  const double alpha = order.value();
  if (alpha == 1.0) {
    double sum = 0.0;
    for (double s : spectrum.values) sum += s;
    return sum;
  }
  if (alpha == 2.0) {
    double sum = 0.0;
    for (double s : spectrum.values) sum += s * s;
    return std::sqrt(sum);
  }
  // Factor out sigma_max so large alpha cannot overflow.
  double sum = 0.0;
  for (double s : spectrum.values) sum += std::pow(s / top, alpha);
  return top * std::pow(sum, 1.0 / alpha);
}

double schatten_norm(const ComplexMatrix& a, SchattenOrder order) {
  return schatten_norm(singular_values(a), order);
}

Complex trace_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
  require_same_shape(x, y, "trace_inner");
  // Tr(Y^dagger X) = sum_ij conj(Y_ij) X_ij
  return y.conjugate().cwiseProduct(x).sum();
}

double holder_slack(const ComplexMatrix& x, const ComplexMatrix& y, SchattenOrder order) {
  const double bound = schatten_norm(x, order) * schatten_norm(y, order.dual());
  return bound - std::abs(trace_inner(x, y));
}

bool holder_holds(const ComplexMatrix& x, const ComplexMatrix& y, SchattenOrder order,
                  double tol) {
  return holder_slack(x, y, order) >= -tol;
}

ComplexMatrix duality_witness(const ComplexMatrix& a, SchattenOrder order) {
  require_square_finite(a, "duality_witness");
  const auto n = a.rows();

  // Singular triplets (sigma_j, u_j, w_j) with A w_j = sigma_j u_j.
  Eigen::VectorXd sigma(n);
  ComplexMatrix left(n, n);
  ComplexMatrix right(n, n);
  const double scale = std::max(1.0, max_abs(a));
  if (is_hermitian(a, kHermitianRouteTol * scale)) {
    const HermitianEigen eig = hermitian_eigen(a);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double lambda = eig.values(j);
      sigma(j) = std::abs(lambda);
      right.col(j) = eig.vectors.col(j);
      left.col(j) = (lambda < 0.0 ? -1.0 : 1.0) * eig.vectors.col(j);
    }
  } else {
    const Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    sigma = svd.singularValues();
    left = svd.matrixU();
    right = svd.matrixV();
  }

  const double top = sigma.maxCoeff();
  if (top == 0.0) return ComplexMatrix::Zero(n, n);
  const double cutoff = kRankTolerance * std::max(1.0, top);

  Eigen::VectorXd weight = Eigen::VectorXd::Zero(n);
  if (order.is_infinite()) {
    Eigen::Index best = 0;
    sigma.maxCoeff(&best);
    weight(best) = 1.0;
  } else if (order.value() == 1.0) {
    for (Eigen::Index j = 0; j < n; ++j) weight(j) = sigma(j) > cutoff ? 1.0 : 0.0;
  } else {
    const double alpha = order.value();
    for (Eigen::Index j = 0; j < n; ++j) {
      weight(j) = sigma(j) > cutoff ? std::pow(sigma(j) / top, alpha - 1.0) : 0.0;
    }
  }

  ComplexMatrix chi = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (weight(j) != 0.0) chi += weight(j) * left.col(j) * right.col(j).adjoint();
  }
  const double norm = schatten_norm(chi, order.dual());
  return norm > 0.0 ? ComplexMatrix(chi / norm) : chi;
}

double duality_supremum_estimate(const ComplexMatrix& a, SchattenOrder order,
                                 std::size_t samples, std::uint64_t seed, bool include_witness) {
  require_square_finite(a, "duality_supremum_estimate");
  const auto n = a.rows();
  const SchattenOrder beta = order.dual();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    ComplexMatrix chi(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) chi(i, j) = Complex{normal(rng), normal(rng)};
    }
    const double norm = schatten_norm(chi, beta);
    if (norm == 0.0) continue;
    best = std::max(best, std::abs(trace_inner(a, chi / norm)));
  }
  if (include_witness) {
    best = std::max(best, std::abs(trace_inner(a, duality_witness(a, order))));
  }
  return best;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "anticommutator");
  return a * b + b * a;
}

}  // namespace qsl::matnum
