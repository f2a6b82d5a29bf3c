#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "qsl/error.hpp"
#include "qsl/harness/sampling.hpp"
#include "qsl/matnum.hpp"

namespace qsl::testing {

using matnum::Complex;
using matnum::ComplexMatrix;
using matnum::ComplexVector;
using matnum::SchattenOrder;

inline const SchattenOrder kOne = SchattenOrder::finite(1.0);
inline const SchattenOrder kTwo = SchattenOrder::finite(2.0);
inline const SchattenOrder kInfinity = SchattenOrder::infinity();

inline std::vector<SchattenOrder> all_orders() {
  return {SchattenOrder::finite(1.0), SchattenOrder::finite(1.5), SchattenOrder::finite(2.0),
          SchattenOrder::finite(3.0), SchattenOrder::finite(10.0), SchattenOrder::infinity()};
}

inline harness::Rng rng_for(const std::string& test, std::uint64_t index = 0) {
  return harness::Rng(harness::instance_seed(20261015, test, index));
}

inline ComplexMatrix diag(std::initializer_list<double> values) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                                        static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

template <typename F>
ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected qsl::Error";
  return ErrorCode::kInternalConsistency;
}

}  // namespace qsl::testing
