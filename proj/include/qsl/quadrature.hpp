#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace qsl::quad {

struct Options {
  double abs_tol = 1e-9;
  /// Panels also refine until the error estimate is below rel_tol * |I|
  /// (never looser than abs_tol).
  double rel_tol = 1e-11;
  std::size_t max_evaluations = std::size_t{1} << 20;
  /// Uniform panels per forced segment before adaptive refinement starts.
  std::size_t initial_panels = 8;
};

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Globally adaptive composite Simpson rule on [a, b]. Each panel carries a
/// Richardson error estimate; the panel with the largest estimate is bisected
/// until the summed estimate meets the tolerance. `breakpoints` inside (a, b)
/// become forced panel boundaries. Throws QuadratureError (with the best
/// estimate) once max_evaluations is exhausted.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints = {}, const Options& options = {});

}  // namespace qsl::quad
