#pragma once

// Dense complex-matrix kernel: Hermitian eigendecomposition, singular values,
// Schatten norms, the trace pairing and Hölder duality helpers.
//
// Every routine here is a pure function of its arguments. Matrices are small
// (d <= 64) and dense.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qsl::matnum {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Order of a Schatten norm, alpha in [1, inf]. Infinity is a distinct
/// member, never a large finite number; the Hölder dual is derived on
/// demand so the pair can never disagree.
class SchattenOrder {
 public:
  /// Throws kInvalidOrder unless 1 <= alpha < inf.
  static SchattenOrder finite(double alpha);
  static SchattenOrder infinity() noexcept { return SchattenOrder(); }
  /// Like finite(), but maps +inf to infinity().
  static SchattenOrder from_value(double alpha);
  /// Accepts a decimal number or one of "inf", "infinity", "∞".
  static SchattenOrder parse(std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  /// The order as a double; +inf for the operator norm.
  double value() const noexcept;
  /// 1/alpha, exactly 0 for the operator norm.
  double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / alpha_; }
  SchattenOrder dual() const noexcept;
  std::string to_string() const;

  friend bool operator==(const SchattenOrder& a, const SchattenOrder& b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.alpha_ == b.alpha_);
  }

 private:
  SchattenOrder() noexcept : alpha_(0.0), infinite_(true) {}
  explicit SchattenOrder(double alpha) noexcept : alpha_(alpha), infinite_(false) {}

  double alpha_;
  bool infinite_;
};

/// Returns beta with 1/alpha + 1/beta = 1 (1 <-> inf). Throws kInvalidOrder
/// for alpha < 1 or NaN.
double dual_order(double alpha);

struct SingularSpectrum {
  std::vector<double> values;  // descending, all >= 0
  std::size_t rank = 0;
};

/// sigma counts toward the rank iff sigma > kRankTolerance * max(1, sigma_max).
inline constexpr double kRankTolerance = 1e-12;

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  ComplexMatrix vectors;   // columns are eigenvectors
};

bool is_finite(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol);

/// Throws kInvalidInput unless `a` is square, non-empty and finite.
void require_square_finite(const ComplexMatrix& a, std::string_view context);
/// Throws kDimensionMismatch unless both operands have equal shapes.
void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, std::string_view context);

HermitianEigen hermitian_eigen(const ComplexMatrix& a);

/// Singular values, i.e. eigenvalues of sqrt(A^dagger A). Hermitian input
/// (to round-off) takes the |eigenvalue| route, which keeps small singular
/// values accurate; everything else goes through A^dagger A with negative
/// round-off clamped to zero.
SingularSpectrum singular_values(const ComplexMatrix& a);

double schatten_norm(const SingularSpectrum& spectrum, SchattenOrder order);
double schatten_norm(const ComplexMatrix& a, SchattenOrder order);

/// Tr(Y^dagger X).
Complex trace_inner(const ComplexMatrix& x, const ComplexMatrix& y);

/// ||X||_alpha ||Y||_beta - |Tr(Y^dagger X)|; non-negative by Hölder.
double holder_slack(const ComplexMatrix& x, const ComplexMatrix& y, SchattenOrder order);
bool holder_holds(const ComplexMatrix& x, const ComplexMatrix& y, SchattenOrder order,
                  double tol = 1e-12);

/// A chi with ||chi||_beta = 1 attaining |Tr(chi^dagger A)| = ||A||_alpha,
/// built from A's own singular decomposition. Zero matrix for A = 0.
ComplexMatrix duality_witness(const ComplexMatrix& a, SchattenOrder order);

/// max |Tr(chi^dagger A)| over `samples` seeded random chi on the unit
/// beta-sphere, optionally together with duality_witness(a, order).
double duality_supremum_estimate(const ComplexMatrix& a, SchattenOrder order,
                                 std::size_t samples, std::uint64_t seed,
                                 bool include_witness = true);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qsl::matnum
