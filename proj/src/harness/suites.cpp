#include "qsl/harness/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "qsl/bounds.hpp"
#include "qsl/channels.hpp"
#include "qsl/error.hpp"
#include "qsl/harness/emit.hpp"
#include "qsl/harness/runner.hpp"
#include "qsl/tightness.hpp"

namespace qsl::harness {
namespace {

using bounds::BoundEntry;
using bounds::PathLength;
using dynamics::Trajectory;
using nlohmann::json;
using qstate::DensityMatrix;

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<std::string> kSuites = {"universality", "factor-identities", "ordering",
                                          "relations",    "lemma3",            "tightness",
                                          "holder",       "closed-system",     "geodesic"};

std::vector<SchattenOrder> universality_orders() {
  return {SchattenOrder::finite(1.0), SchattenOrder::finite(1.5), SchattenOrder::finite(2.0),
          SchattenOrder::finite(3.0), SchattenOrder::finite(10.0), SchattenOrder::infinity()};
}

json order_json(const SchattenOrder& a) {
  return a.is_infinite() ? json("inf") : json(a.value());
}

struct Sample {
  std::vector<std::optional<double>> margins;
  json instance;
  std::string error;
  bool qualifies = true;
};

// Accumulates worst margins per check over a suite's samples.
class Tally {
 public:
  Tally(std::string suite, const std::vector<std::pair<std::string, double>>& checks,
        const SuiteConfig& config)
      : suite_(std::move(suite)) {
    for (const auto& [name, threshold] : checks) {
      CheckResult c;
      c.suite = suite_;
      c.check = name;
      auto it = config.thresholds.find(name);
      c.threshold = it != config.thresholds.end() ? it->second : threshold;
      c.worst_margin = kInf;
      checks_.push_back(c);
      worst_.push_back(json());
    }
  }

  std::size_t size() const { return checks_.size(); }

  void add(const Sample& s) {
    ++instances_;
    if (!s.error.empty()) {
      ++errors_;
      if (first_error_.is_null()) {
        first_error_ = s.instance;
        first_error_["error"] = s.error;
      }
      return;
    }
    for (std::size_t k = 0; k < s.margins.size() && k < checks_.size(); ++k) {
      if (s.margins[k]) record(k, *s.margins[k], s.instance);
    }
  }

  void record(std::size_t k, double margin, const json& instance) {
    CheckResult& c = checks_[k];
    ++c.count;
    if (std::isnan(margin)) margin = -kInf;
    if (margin < c.worst_margin) {
      c.worst_margin = margin;
      worst_[k] = instance;
    }
  }

  // Single-valued check such as a count.
  void set(std::size_t k, double value, std::size_t count, const json& instance = json()) {
    checks_[k].count = count;
    checks_[k].worst_margin = value;
    worst_[k] = instance;
  }

  std::vector<CheckResult> finish() {
    std::vector<CheckResult> out;
    for (std::size_t k = 0; k < checks_.size(); ++k) {
      CheckResult c = checks_[k];
      if (c.count == 0 && c.worst_margin == kInf) c.worst_margin = -kInf;
      c.passed = c.worst_margin >= c.threshold;
      if (!c.passed && !worst_[k].is_null()) c.failing_instance = worst_[k].dump();
      out.push_back(std::move(c));
    }
    CheckResult errors;
    errors.suite = suite_;
    errors.check = "evaluation-errors";
    errors.count = instances_;
    errors.worst_margin = -static_cast<double>(errors_);
    errors.threshold = 0.0;
    errors.passed = errors_ == 0;
    if (!errors.passed) errors.failing_instance = first_error_.dump();
    out.push_back(std::move(errors));
    return out;
  }

 private:
  std::string suite_;
  std::vector<CheckResult> checks_;
  std::vector<json> worst_;
  std::size_t instances_ = 0;
  std::size_t errors_ = 0;
  json first_error_;
};

using SampleFn = std::function<void(Rng&, std::size_t, Sample&)>;

Sample run_one(const SuiteConfig& config, const std::string& stream, std::size_t index,
               std::size_t n_checks, const SampleFn& fn) {
  Sample s;
  s.margins.assign(n_checks, std::nullopt);
  Rng rng(instance_seed(config.seed, stream, index));
  try {
    fn(rng, index, s);
  } catch (const std::exception& e) {
    s.error = e.what();
    if (s.instance.is_null()) s.instance = json{{"index", index}};
  }
  return s;
}

std::vector<Sample> run_samples(std::size_t n, const SuiteConfig& config, const std::string& stream,
                                std::size_t n_checks, const SampleFn& fn) {
  std::vector<Sample> out(n);
  parallel_for(n, config.workers,
               [&](std::size_t i) { out[i] = run_one(config, stream, i, n_checks, fn); });
  return out;
}

// Draws candidates in index order until `target` qualify or `max_attempts` run out.
std::vector<Sample> run_filtered(std::size_t target, std::size_t max_attempts,
                                 const SuiteConfig& config, const std::string& stream,
                                 std::size_t n_checks, std::size_t& attempts, const SampleFn& fn) {
  std::vector<Sample> kept;
  attempts = 0;
  while (kept.size() < target && attempts < max_attempts) {
    const std::size_t batch = std::min(max_attempts - attempts, std::max<std::size_t>(target, 16));
    std::vector<Sample> drawn(batch);
    const std::size_t base = attempts;
    parallel_for(batch, config.workers, [&](std::size_t i) {
      drawn[i] = run_one(config, stream, base + i, n_checks, fn);
    });
    for (std::size_t i = 0; i < batch && kept.size() < target; ++i) {
      ++attempts;
      if (drawn[i].qualifies || !drawn[i].error.empty()) kept.push_back(std::move(drawn[i]));
    }
  }
  return kept;
}

std::size_t pick(const SuiteConfig& config, std::size_t fallback) {
  return config.samples > 0 ? config.samples : fallback;
}

double fault_factor(const SuiteConfig& config, std::string_view bound) {
  if (config.fault.empty()) return 1.0;
  return config.fault == std::string(bound) + "_x2" ? 2.0 : 1.0;
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale < bounds::kDegenerateTolerance ? std::abs(a - b) : std::abs(a - b) / scale;
}

// ---------------------------------------------------------------- universality

std::vector<CheckResult> universality(const SuiteConfig& config) {
  const std::string name = "universality";
  Tally tally(name, {{"alpha-spread", -1e-6}, {"bloch-form", -1e-9}, {"cpm-delegation", 0.0},
                     {"fundamental-bound", 0.0}},
              config);
  const auto orders = universality_orders();
  const double fault = fault_factor(config, "alpha");
  auto samples = run_samples(pick(config, 100), config, name, tally.size(),
                             [&](Rng& rng, std::size_t i, Sample& s) {
    const Scenario sc = random_qubit_scenario(rng, false, "universality-" + std::to_string(i));
    s.instance = to_json(sc);
    const Trajectory traj = build_trajectory(sc);
    std::vector<double> values;
    for (const auto& a : orders) values.push_back(bounds::alpha_qsl(traj, a).value);
    values.back() *= fault;
    const double hi = *std::max_element(values.begin(), values.end());
    const double lo = *std::min_element(values.begin(), values.end());
    s.margins[0] = hi < bounds::kDegenerateTolerance ? 0.0 : -(hi - lo) / hi;
    const double bloch = bounds::alpha_qsl_bloch(traj).value;
    double worst = 0.0;
    for (double v : values) worst = std::max(worst, rel_diff(v, bloch));
    s.margins[1] = -worst;
    const double cpm = bounds::cpm_qsl(traj).value;
    s.margins[2] = -std::abs(cpm - values[2]);
    s.margins[3] = sc.horizon * (1.0 + bounds::kOvershootTolerance) - hi;
  });
  for (const auto& s : samples) tally.add(s);
  return tally.finish();
}

// ----------------------------------------------------------- factor identities

std::vector<CheckResult> factor_identities(const SuiteConfig& config) {
  const std::string name = "factor-identities";
  Tally tally(name, {{"speed-factor", -1e-10}, {"distance-factor", -1e-10},
                     {"closed-form-norm", -1e-12}, {"purity-identity", -1e-12}},
              config);
  const auto orders = universality_orders();
  auto samples = run_samples(pick(config, 1000), config, name, tally.size(),
                             [&](Rng& rng, std::size_t i, Sample& s) {
    const Scenario sc = random_qubit_scenario(rng, false, "factor-" + std::to_string(i));
    const double t = uniform(rng, 0.0, sc.horizon);
    const Eigen::Vector3d n = random_in_ball(rng);
    const Eigen::Vector3d m = random_in_ball(rng);
    s.instance = to_json(sc);
    s.instance["t"] = t;
    s.instance["n"] = {n.x(), n.y(), n.z()};
    s.instance["m"] = {m.x(), m.y(), m.z()};

    const Trajectory traj = build_trajectory(sc);
    const auto rate = traj.state_derivative(t).value;
    const double bloch_speed = qstate::bloch_components(rate).norm();
    const auto rho = qstate::from_bloch(qstate::BlochVector(n));
    const auto eta = qstate::from_bloch(qstate::BlochVector(m));
    double speed_err = 0.0;
    double dist_err = 0.0;
    double norm_err = 0.0;
    for (const auto& a : orders) {
      const double factor = std::pow(2.0, -1.0 + a.reciprocal());
      speed_err = std::max(speed_err, std::abs(matnum::schatten_norm(rate, a) - factor * bloch_speed));
      dist_err = std::max(dist_err, std::abs(matnum::schatten_norm(rho.mat() - eta.mat(), a) -
                                             factor * (n - m).norm()));
      norm_err = std::max(norm_err, std::abs(qstate::qubit_norm_closed_form(qstate::BlochVector(n), a) -
                                             matnum::schatten_norm(rho.mat(), a)));
    }
    s.margins[0] = -speed_err;
    s.margins[1] = -dist_err;
    s.margins[2] = -norm_err;
    s.margins[3] = -std::abs(qstate::purity(rho) - 0.5 * (1.0 + n.squaredNorm()));
  });
  for (const auto& s : samples) tally.add(s);
  return tally.finish();
}

// -------------------------------------------------------------------- ordering

std::vector<CheckResult> ordering(const SuiteConfig& config) {
  const std::string name = "ordering";
  Tally tally(name, {{"tau>=alpha", -1e-9}, {"alpha>=alpha_beta", -1e-9}, {"overlap-chain", -1e-9}},
              config);
  const auto orders = universality_orders();
  const double fa = fault_factor(config, "alpha");
  const double fab = fault_factor(config, "alpha_beta");
  auto samples = run_samples(pick(config, 1000), config, name, tally.size(),
                             [&](Rng& rng, std::size_t i, Sample& s) {
    const Scenario sc = random_qubit_scenario(rng, true, "ordering-" + std::to_string(i));
    const SchattenOrder order = orders[i % orders.size()];
    s.instance = to_json(sc);
    s.instance["alpha"] = order_json(order);
    const Trajectory traj = build_trajectory(sc);
    const PathLength pl = bounds::path_length(traj, order);
    const double a = fa * bounds::alpha_qsl(traj, order, pl).value;
    const double ab = fab * bounds::alpha_beta_qsl(traj, order, pl).value;
    s.margins[0] = sc.horizon - a;
    s.margins[1] = a - ab;
    // |xi(tau) - xi(0)| <= ||rho_0||_beta L_alpha.
    const auto& rho0 = traj.initial_state().mat();
    const auto rho_tau = traj.evolve(sc.horizon).mat();
    const double dxi = std::abs(matnum::trace_inner(rho_tau - rho0, rho0).real());
    s.margins[2] = matnum::schatten_norm(rho0, order.dual()) * pl.value - dxi;
  });
  for (const auto& s : samples) tally.add(s);
  return tally.finish();
}

// ------------------------------------------------------------------- relations

std::vector<CheckResult> relations(const SuiteConfig& config) {
  const std::string name = "relations";
  Tally tally(name, {{"alpha_beta=2^(-1/alpha)*dl", -1e-9},
                     {"alpha_beta(inf)=dl", -1e-9},
                     {"alpha>=dl", -1e-9},
                     {"bloch-forms", -1e-9},
                     {"alpha_beta(2)>=ceph", -1e-9},
                     {"ceph-evaluated-fraction", 0.5}},
              config);
  const auto orders = universality_orders();
  const double fdl = fault_factor(config, "dl");
  const double fa = fault_factor(config, "alpha");
  const double fab = fault_factor(config, "alpha_beta");
  const std::size_t n = pick(config, 500);

  auto pure = run_samples(n, config, name, tally.size(), [&](Rng& rng, std::size_t i, Sample& s) {
    const Scenario sc = random_qubit_scenario(rng, true, "relations-" + std::to_string(i));
    const SchattenOrder order = orders[i % orders.size()];
    s.instance = to_json(sc);
    s.instance["alpha"] = order_json(order);
    const Trajectory traj = build_trajectory(sc);
    const PathLength l_inf = bounds::path_length(traj, SchattenOrder::infinity());
    const double dl = fdl * bounds::dl_qsl(traj, l_inf).value;
    const double ab_inf = fab * bounds::alpha_beta_qsl(traj, SchattenOrder::infinity(), l_inf).value;
    const PathLength l_a = order.is_infinite() ? l_inf : bounds::path_length(traj, order);
    const double ab = fab * bounds::alpha_beta_qsl(traj, order, l_a).value;
    const double a = fa * bounds::alpha_qsl(traj, order, l_a).value;
    s.margins[0] = -rel_diff(ab, std::pow(2.0, -order.reciprocal()) * dl);
    s.margins[1] = -std::abs(ab_inf - dl);
    s.margins[2] = a - dl;
    const double ab_bloch = bounds::alpha_beta_qsl_bloch(traj, order).value;
    const double dl_bloch = bounds::dl_qsl_bloch(traj).value;
    s.margins[3] = -std::max(rel_diff(ab, ab_bloch), rel_diff(dl, dl_bloch));
  });
  for (const auto& s : pure) tally.add(s);

  std::size_t evaluated = 0;
  auto mixed = run_samples(n, config, name + "/ceph", tally.size(),
                           [&](Rng& rng, std::size_t i, Sample& s) {
    const Eigen::Index d = (i % 2 == 0) ? 2 : 3;
    const Scenario sc = d == 2 ? random_qubit_scenario(rng, false, "ceph-" + std::to_string(i))
                               : random_qudit_scenario(rng, d, "ceph-" + std::to_string(i));
    s.instance = to_json(sc);
    const Trajectory traj = build_trajectory(sc);
    const PathLength l2 = bounds::path_length(traj, SchattenOrder::finite(2.0));
    const double ab = fab * bounds::alpha_beta_qsl(traj, SchattenOrder::finite(2.0), l2).value;
    try {
      const double ceph = bounds::ceph_qsl(traj, l2).value;
      s.margins[4] = ab - ceph;
    } catch (const Error& e) {
      // Relative purity above 1 (mixed rho_0 moving towards purity) leaves theta undefined.
      if (e.code() != ErrorCode::kRelativePurity) throw;
      s.qualifies = false;
    }
  });
  for (const auto& s : mixed) {
    tally.add(s);
    if (s.error.empty() && s.qualifies) ++evaluated;
  }
  tally.set(5, n > 0 ? static_cast<double>(evaluated) / static_cast<double>(n) : 0.0, evaluated);
  return tally.finish();
}

// ---------------------------------------------------------------------- lemma3

std::vector<CheckResult> lemma3(const SuiteConfig& config) {
  const std::string name = "lemma3";
  const std::size_t target = pick(config, 250);
  Tally tally(name, {{"conditional-bound", -1e-9}, {"qualifying-instances", std::ceil(0.8 * target)}},
              config);
  const auto orders = universality_orders();
  const double fa = fault_factor(config, "alpha");
  const double fab = fault_factor(config, "alpha_beta");
  std::size_t attempts = 0;
  auto kept = run_filtered(target, 40 * target, config, name, tally.size(), attempts,
                           [&](Rng& rng, std::size_t i, Sample& s) {
    const Scenario sc = random_qubit_scenario(rng, true, "lemma3-" + std::to_string(i));
    const SchattenOrder order = orders[i % orders.size()];
    s.instance = to_json(sc);
    s.instance["alpha"] = order_json(order);
    const Trajectory traj = build_trajectory(sc);
    const Eigen::Vector3d n0 = qstate::bloch_components(traj.initial_state().mat());
    const Eigen::Vector3d nt = qstate::bloch_components(traj.evolve(sc.horizon).mat());
    s.instance["n0.ntau"] = n0.dot(nt);
    s.qualifies = n0.dot(nt) <= 0.0;
    if (!s.qualifies) return;
    const PathLength pl = bounds::path_length(traj, order);
    const double a = fa * bounds::alpha_qsl(traj, order, pl).value;
    const double ab = fab * bounds::alpha_beta_qsl(traj, order, pl).value;
    s.margins[0] = std::pow(2.0, 0.5 + order.reciprocal()) * ab - a;
  });
  std::size_t qualifying = 0;
  for (const auto& s : kept) {
    tally.add(s);
    if (s.error.empty()) ++qualifying;
  }
  tally.set(1, static_cast<double>(qualifying), attempts,
            json{{"qualifying", qualifying}, {"attempts", attempts}});
  return tally.finish();
}

// ------------------------------------------------------------------- tightness

// A path that saturates the alpha bound: straight Bloch segment, radial decay,
// dephasing from the equator or depolarizing from anywhere.
Scenario geodesic_scenario(Rng& rng, std::size_t i) {
  Scenario sc;
  sc.id = "geodesic-" + std::to_string(i);
  sc.horizon = uniform(rng, 0.5, 2.0);
  sc.alphas = universality_orders();
  sc.bounds = {"alpha", "alpha_beta", "dl"};
  const double rate = log_uniform(rng, 0.1 / sc.horizon, 10.0 / sc.horizon);
  switch (i % 4) {
    case 0: {
      sc.channel = "bloch-line";
      sc.initial.bloch = random_in_ball(rng);
      const Eigen::Vector3d target = random_in_ball(rng);
      sc.params = {{"target", {target.x(), target.y(), target.z()}}};
      break;
    }
    case 1:
      sc.channel = "bloch-radial";
      sc.initial.bloch = random_unit_vector(rng);
      sc.params = {{"profile", "exponential"}, {"depth", uniform(rng, 0.1, 2.0)}, {"rate", rate}};
      break;
    case 2: {
      sc.channel = "dephasing";
      const double phi = uniform(rng, 0.0, 2.0 * M_PI);
      sc.initial.bloch = uniform(rng, 0.2, 1.0) * Eigen::Vector3d(std::cos(phi), std::sin(phi), 0.0);
      sc.params = {{"rate", rate}};
      break;
    }
    default:
      sc.channel = "depolarizing";
      sc.initial.bloch = random_in_ball(rng);
      sc.params = {{"rate", rate}};
      break;
  }
  return sc;
}

std::vector<CheckResult> tightness_suite(const SuiteConfig& config) {
  const std::string name = "tightness";
  const std::size_t target = pick(config, 200);
  Tally tally(name,
              {{"alpha-sufficiency", 0.0},
               {"alpha-beta-sufficiency", 0.0},
               {"geodesics-detected", 0.0},
               {"finite-alpha-infeasible", 0.0},
               {"necessity-probe", 0.0},
               {"necessity-instances", static_cast<double>(target)},
               {"omega-consistency", -1e-10}},
              config);
  constexpr std::size_t kGrid = 64;
  const double lo = 1.0 - 1e-4;
  const double hi = 1.0 + 1e-6;
  auto window = [&](double ratio) { return std::min(ratio - lo, hi - ratio); };
  auto omega_error = [&](const Trajectory& traj, const std::vector<double>& times) {
    double worst = 0.0;
    for (double t : times) {
      const auto rate = traj.state_derivative(t).value;
      const double om = tightness::omega(rate(0, 0).real(), rate(0, 1));
      worst = std::max(worst, std::abs(2.0 * om - qstate::bloch_components(rate).norm()));
    }
    return worst;
  };

  const std::size_t n_geo = std::max<std::size_t>(8, pick(config, 200) / 2);
  std::size_t missed = 0;
  auto geo = run_samples(n_geo, config, name + "/geodesic", tally.size(),
                         [&](Rng& rng, std::size_t i, Sample& s) {
    const Scenario sc = geodesic_scenario(rng, i);
    s.instance = to_json(sc);
    const Trajectory traj = build_trajectory(sc);
    const auto rep = tightness::check_alpha_tight(traj, kGrid);
    s.qualifies = rep.satisfied;
    if (rep.satisfied) {
      s.margins[0] = window(bounds::alpha_qsl(traj, SchattenOrder::finite(2.0)).ratio);
    }
    s.margins[6] = -omega_error(traj, rep.sampled_times);
    if (qstate::is_pure(traj.initial_state())) {
      const auto radial = tightness::check_alpha_beta_tight(traj, SchattenOrder::infinity(), kGrid);
      if (radial.satisfied) {
        const double dl = bounds::dl_qsl(traj).ratio;
        const double ab = bounds::alpha_beta_qsl(traj, SchattenOrder::infinity()).ratio;
        s.margins[1] = std::min(window(dl), window(ab));
        const auto finite = tightness::check_alpha_beta_tight(traj, SchattenOrder::finite(2.0), kGrid);
        s.margins[3] = (finite.feasible || finite.satisfied) ? -1.0 : 0.0;
      }
    }
  });
  for (const auto& s : geo) {
    tally.add(s);
    if (s.error.empty() && !s.qualifies) ++missed;
  }
  tally.set(2, -static_cast<double>(missed), n_geo);

  std::size_t attempts = 0;
  auto probe = run_filtered(target, 20 * target, config, name + "/necessity", tally.size(), attempts,
                            [&](Rng& rng, std::size_t i, Sample& s) {
    const Scenario sc = random_qubit_scenario(rng, i % 2 == 0, "necessity-" + std::to_string(i));
    s.instance = to_json(sc);
    const Trajectory traj = build_trajectory(sc);
    const double ratio = bounds::alpha_qsl(traj, SchattenOrder::finite(2.0)).ratio;
    s.instance["alpha_ratio"] = ratio;
    s.qualifies = ratio < 0.99;
    if (!s.qualifies) return;
    const auto rep = tightness::check_alpha_tight(traj, kGrid);
    s.instance["max_residual"] = rep.max_residual;
    s.margins[4] = rep.max_residual - 1e-3;
    s.margins[6] = -omega_error(traj, rep.sampled_times);
  });
  std::size_t probed = 0;
  for (const auto& s : probe) {
    tally.add(s);
    if (s.error.empty()) ++probed;
  }
  tally.set(5, static_cast<double>(probed), attempts,
            json{{"instances", probed}, {"attempts", attempts}});
  return tally.finish();
}

// ---------------------------------------------------------------------- holder

std::vector<CheckResult> holder(const SuiteConfig& config) {
  const std::string name = "holder";
  Tally tally(name, {{"holder-inequality", -1e-12}, {"duality-witness", -1e-10}, {"duality-upper", -1e-10}},
              config);
  const std::vector<SchattenOrder> orders = {SchattenOrder::finite(1.0), SchattenOrder::finite(1.5),
                                             SchattenOrder::finite(2.0), SchattenOrder::finite(3.0),
                                             SchattenOrder::infinity()};
  const std::size_t lo = std::max<std::size_t>(1, config.min_dim);
  const std::size_t hi = std::max(lo, config.max_dim);
  auto samples = run_samples(pick(config, 10000), config, name, tally.size(),
                             [&](Rng& rng, std::size_t i, Sample& s) {
    const auto d = static_cast<Eigen::Index>(lo + uniform_index(rng, hi - lo + 1));
    const SchattenOrder order = orders[uniform_index(rng, orders.size())];
    const ComplexMatrix x = random_ginibre(rng, d);
    const ComplexMatrix y = random_ginibre(rng, d);
    s.instance = {{"index", i}, {"alpha", order_json(order)}, {"X", matrix_to_json(x)},
                  {"Y", matrix_to_json(y)}};
    s.margins[0] = matnum::holder_slack(x, y, order);
    if (i % 10 == 0) {
      const double norm = matnum::schatten_norm(x, order);
      const std::uint64_t seed = rng();
      const double with = matnum::duality_supremum_estimate(x, order, 64, seed, true);
      const double without = matnum::duality_supremum_estimate(x, order, 64, seed, false);
      s.margins[1] = -std::abs(with - norm);
      s.margins[2] = norm - without;
    }
  });
  for (const auto& s : samples) tally.add(s);
  return tally.finish();
}

// --------------------------------------------------------------- closed system

std::vector<CheckResult> closed_system(const SuiteConfig& config) {
  const std::string name = "closed-system";
  Tally tally(name, {{"denominator=2sqrt(I_L)", -1e-10},
                     {"pure:I_L=var/2", -1e-10},
                     {"pure:I_WY=var", -1e-10},
                     {"I_L<=I_WY", -1e-10},
                     {"I_WY<=var", -1e-10},
                     {"closed=trajectory", -1e-8}},
              config);
  const auto orders = universality_orders();
  auto samples = run_samples(pick(config, 500), config, name, tally.size(),
                             [&](Rng& rng, std::size_t i, Sample& s) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(i % 3);
    const bool pure = i % 2 == 1;
    const DensityMatrix rho =
        pure ? DensityMatrix::pure(random_pure_vector(rng, d)) : random_density_matrix(rng, d);
    const qstate::HermitianObservable h(random_hermitian(rng, d));
    s.instance = {{"index", i}, {"rho", matrix_to_json(rho.mat())}, {"H", matrix_to_json(h.mat())}};
    const double il = qstate::coherence_il(rho, h);
    const double wy = qstate::wy_skew(rho, h);
    const double var = qstate::energy_variance(rho, h);
    const double denom =
        matnum::schatten_norm(matnum::commutator(h.mat(), rho.mat()), SchattenOrder::finite(2.0));
    s.margins[0] = -std::abs(denom - 2.0 * std::sqrt(std::max(0.0, il)));
    if (pure) {
      s.margins[1] = -std::abs(il - 0.5 * var);
      s.margins[2] = -std::abs(wy - var);
    }
    s.margins[3] = wy - il;
    s.margins[4] = var - wy;
    if (i % 10 == 0) {
      const SchattenOrder order = orders[(i / 10) % orders.size()];
      const double tau = uniform(rng, 0.5, 2.0);
      const double closed = bounds::alpha_qsl_closed(h, rho, tau, order).value;
      const Trajectory traj(dynamics::HamiltonianEvolution{h}, rho, tau);
      s.margins[5] = -rel_diff(closed, bounds::alpha_qsl(traj, order).value);
    }
  });
  for (const auto& s : samples) tally.add(s);
  return tally.finish();
}

// -------------------------------------------------------------------- geodesic

std::vector<CheckResult> geodesic(const SuiteConfig& config) {
  const std::string name = "geodesic";
  Tally tally(name, {{"line-length", -1e-9}, {"line-ratio", -1e-6}}, config);
  const std::vector<SchattenOrder> orders = {SchattenOrder::finite(1.0), SchattenOrder::finite(2.0),
                                             SchattenOrder::infinity()};
  auto samples = run_samples(pick(config, 60), config, name, tally.size(),
                             [&](Rng& rng, std::size_t i, Sample& s) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(i % 3);
    const DensityMatrix rho0 = (i / 3) % 2 == 0 ? random_density_matrix(rng, d)
                                                : DensityMatrix::pure(random_pure_vector(rng, d));
    const DensityMatrix rho1 = random_density_matrix(rng, d);
    const double tau = uniform(rng, 0.5, 2.0);
    s.instance = {{"index", i}, {"rho0", matrix_to_json(rho0.mat())},
                  {"rho1", matrix_to_json(rho1.mat())}, {"tau", tau}};
    const Trajectory traj = tightness::traverse(tightness::line_geodesic(rho0, rho1), tau);
    double length_err = 0.0;
    double ratio_err = 0.0;
    for (const auto& a : orders) {
      const PathLength pl = bounds::path_length(traj, a);
      length_err = std::max(length_err,
                            std::abs(pl.value - matnum::schatten_norm(rho1.mat() - rho0.mat(), a)));
      ratio_err = std::max(ratio_err, std::abs(bounds::alpha_qsl(traj, a, pl).ratio - 1.0));
    }
    s.margins[0] = -length_err;
    s.margins[1] = -ratio_err;
  });
  for (const auto& s : samples) tally.add(s);
  return tally.finish();
}

std::vector<CheckResult> run_suite(const std::string& suite, const SuiteConfig& config) {
  if (suite == "universality") return universality(config);
  if (suite == "factor-identities") return factor_identities(config);
  if (suite == "ordering") return ordering(config);
  if (suite == "relations") return relations(config);
  if (suite == "lemma3") return lemma3(config);
  if (suite == "tightness") return tightness_suite(config);
  if (suite == "holder") return holder(config);
  if (suite == "closed-system") return closed_system(config);
  if (suite == "geodesic") return geodesic(config);
  throw Error(ErrorCode::kInvalidInput, "unknown suite '" + suite + "'");
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    auto n = kSuites;
    n.push_back("all");
    return n;
  }();
  return names;
}

SuiteReport verify(const SuiteConfig& config) {
  if (!config.fault.empty() && config.fault != "alpha_x2" && config.fault != "alpha_beta_x2" &&
      config.fault != "dl_x2") {
    throw Error(ErrorCode::kInvalidInput, "unknown fault '" + config.fault + "'");
  }
  SuiteReport report;
  const bool all = config.suite == "all";
  if (!all && std::find(kSuites.begin(), kSuites.end(), config.suite) == kSuites.end()) {
    std::string known;
    for (const auto& s : suite_names()) known += (known.empty() ? "" : ", ") + s;
    throw Error(ErrorCode::kInvalidInput, "unknown suite '" + config.suite + "'; known: " + known);
  }
  for (const auto& suite : kSuites) {
    if (!all && suite != config.suite) continue;
    auto checks = run_suite(suite, config);
    report.checks.insert(report.checks.end(), checks.begin(), checks.end());
  }
  return report;
}

void write_suite_csv(const SuiteReport& report, std::ostream& out) {
  out << kSuiteCsvHeader << '\n';
  for (const auto& c : report.checks) {
    out << c.suite << ',' << '"' << c.check << '"' << ',' << c.count << ','
        << format_number(c.worst_margin + 0.0) << ',' << format_number(c.threshold + 0.0) << ','
        << (c.passed ? "true" : "false") << '\n';
  }
}

Scenario random_qubit_scenario(Rng& rng, bool pure, const std::string& id) {
  Scenario sc;
  sc.id = id;
  sc.horizon = uniform(rng, 0.5, 2.0);
  sc.initial.bloch = pure ? random_unit_vector(rng) : random_in_ball(rng);
  sc.alphas = universality_orders();
  sc.bounds = {"alpha"};
  const double lo = 0.1 / sc.horizon;
  const double hi = 10.0 / sc.horizon;
  switch (uniform_index(rng, 5)) {
    case 0:
      sc.channel = "dephasing";
      sc.params = {{"rate", log_uniform(rng, lo, hi)}};
      break;
    case 1:
      sc.channel = "amplitude-damping";
      sc.params = {{"rate", log_uniform(rng, lo, hi)}};
      break;
    case 2:
      sc.channel = "depolarizing";
      sc.params = {{"rate", log_uniform(rng, lo, hi)}};
      break;
    case 3: {
      sc.channel = "precession";
      const Eigen::Vector3d axis = random_unit_vector(rng);
      sc.params = {{"omega", log_uniform(rng, lo, hi)}, {"axis", {axis.x(), axis.y(), axis.z()}}};
      break;
    }
    default: {
      sc.channel = "lindblad";
      const Eigen::Vector3d axis = random_unit_vector(rng);
      const double omega = log_uniform(rng, lo, hi);
      const ComplexMatrix h = 0.5 * omega *
                              (axis.x() * qstate::pauli_x() + axis.y() * qstate::pauli_y() +
                               axis.z() * qstate::pauli_z());
      sc.params = {{"hamiltonian", matrix_to_json(h)},
                   {"jumps", json::array({json{{"operator", matrix_to_json(channels::sigma_minus())},
                                               {"rate", log_uniform(rng, lo, hi)}},
                                          json{{"operator", matrix_to_json(qstate::pauli_z())},
                                               {"rate", log_uniform(rng, lo, hi)}}})}};
      break;
    }
  }
  return sc;
}

Scenario random_qudit_scenario(Rng& rng, Eigen::Index d, const std::string& id) {
  Scenario sc;
  sc.id = id;
  sc.horizon = uniform(rng, 0.5, 2.0);
  sc.initial.matrix = uniform_index(rng, 2) == 0
                          ? random_density_matrix(rng, d).mat()
                          : DensityMatrix::pure(random_pure_vector(rng, d)).mat();
  sc.alphas = universality_orders();
  sc.bounds = {"alpha"};
  const double lo = 0.1 / sc.horizon;
  const double hi = 10.0 / sc.horizon;
  if (uniform_index(rng, 2) == 0) {
    sc.channel = "lindblad";
    ComplexMatrix h = random_hermitian(rng, d);
    h *= log_uniform(rng, lo, hi) / std::max(1e-12, matnum::schatten_norm(h, SchattenOrder::infinity()));
    ComplexMatrix l = random_ginibre(rng, d);
    l /= l.norm();
    sc.params = {{"hamiltonian", matrix_to_json(h)},
                 {"jumps", json::array({json{{"operator", matrix_to_json(l)},
                                             {"rate", log_uniform(rng, lo, hi)}}})}};
  } else {
    sc.channel = "custom-kraus";
    // Two Kraus operators from the first d columns of a 2d x 2d Haar unitary.
    const ComplexMatrix v = haar_unitary(rng, 2 * d).leftCols(d);
    sc.params = {{"operators", json::array({matrix_to_json(v.topRows(d)), matrix_to_json(v.bottomRows(d))})},
                 {"rate", log_uniform(rng, lo, hi)}};
  }
  return sc;
}

}  // namespace qsl::harness
