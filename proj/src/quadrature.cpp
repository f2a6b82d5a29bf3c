#include "qsl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "qsl/error.hpp"

namespace qsl::quad {
namespace {

struct Panel {
  double a, b;
  double fa, fm, fb;
  double whole;  // Simpson on [a, b]
  double left;   // Simpson on [a, m]
  double right;  // Simpson on [m, b]
  double fl, fr; // f at the quarter points
  double error;

  double refined() const { return left + right + (left + right - whole) / 15.0; }
};

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

double simpson(double h, double fa, double fm, double fb) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

class Integrator {
 public:
  explicit Integrator(const std::function<double(double)>& f) : f_(f) {}

  double eval(double t) {
    ++evaluations_;
    const double v = f_(t);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "integrand is not finite at t = " << t;
      throw Error(ErrorCode::kQuadratureFailure, os.str());
    }
    max_magnitude_ = std::max(max_magnitude_, std::abs(v));
    return v;
  }

  // Builds the panel from its endpoint and midpoint values.
  Panel make(double a, double b, double fa, double fm, double fb) {
    Panel p{};
    p.a = a;
    p.b = b;
    p.fa = fa;
    p.fm = fm;
    p.fb = fb;
    const double m = 0.5 * (a + b);
    p.fl = eval(0.5 * (a + m));
    p.fr = eval(0.5 * (m + b));
    p.whole = simpson(b - a, fa, fm, fb);
    p.left = simpson(m - a, fa, p.fl, fm);
    p.right = simpson(b - m, fm, p.fr, fb);
    p.error = std::abs(p.left + p.right - p.whole) / 15.0;
    return p;
  }

  std::size_t evaluations() const { return evaluations_; }
  double max_magnitude() const { return max_magnitude_; }

 private:
  const std::function<double(double)>& f_;
  std::size_t evaluations_ = 0;
  double max_magnitude_ = 0.0;
};

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints, const Options& options) {
  Result result;
  if (a == b) return result;
  if (!(a < b)) throw Error(ErrorCode::kInvalidInput, "integrate: expected a < b");

  std::vector<double> edges{a};
  for (double t : breakpoints) {
    if (t > a && t < b) edges.push_back(t);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Integrator integrator(f);
  std::vector<Panel> heap;
  const ByError by_error;
  const std::size_t per_segment = std::max<std::size_t>(1, options.initial_panels);
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double lo = edges[s];
    const double hi = edges[s + 1];
    const double h = (hi - lo) / static_cast<double>(per_segment);
    double left = lo;
    double f_left = integrator.eval(lo);
    for (std::size_t k = 0; k < per_segment; ++k) {
      const double right = (k + 1 == per_segment) ? hi : lo + h * static_cast<double>(k + 1);
      const double f_mid = integrator.eval(0.5 * (left + right));
      const double f_right = integrator.eval(right);
      heap.push_back(integrator.make(left, right, f_left, f_mid, f_right));
      left = right;
      f_left = f_right;
    }
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  auto totals = [&heap]() {
    double value = 0.0;
    double error = 0.0;
    for (const Panel& p : heap) {
      value += p.refined();
      error += p.error;
    }
    return std::pair{value, error};
  };

  // Running sums, refreshed exactly every so often to shed drift.
  auto [value, error] = totals();
  std::size_t since_refresh = 0;
  while (true) {
    // Round-off in the integrand sets a floor below which refinement is noise.
    const double noise_floor = 1e3 * std::numeric_limits<double>::epsilon() * (b - a) *
                               std::max(1.0, integrator.max_magnitude());
    const double tol =
        std::max(std::min(options.abs_tol, options.rel_tol * std::abs(value)), noise_floor);
    if (error <= tol) break;
    if (integrator.evaluations() + 4 > options.max_evaluations) {
      std::tie(value, error) = totals();
      if (error <= tol) break;
      std::ostringstream os;
      os.precision(17);
      os << "adaptive Simpson did not converge within " << options.max_evaluations
         << " evaluations (estimate " << value << ", error " << error << ")";
      throw QuadratureError(os.str(), value, error);
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Panel worst = heap.back();
    heap.pop_back();
    const double m = 0.5 * (worst.a + worst.b);
    const Panel lo = integrator.make(worst.a, m, worst.fa, worst.fl, worst.fm);
    const Panel hi = integrator.make(m, worst.b, worst.fm, worst.fr, worst.fb);
    value += lo.refined() + hi.refined() - worst.refined();
    error += lo.error + hi.error - worst.error;
    heap.push_back(lo);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(hi);
    std::push_heap(heap.begin(), heap.end(), by_error);
    if (++since_refresh >= std::max<std::size_t>(64, heap.size())) {
      std::tie(value, error) = totals();
      since_refresh = 0;
    }
  }

  std::tie(result.value, result.error_estimate) = totals();
  result.evaluations = integrator.evaluations();
  return result;
}

}  // namespace qsl::quad
