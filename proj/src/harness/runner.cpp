#include "qsl/harness/runner.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "qsl/error.hpp"

namespace qsl::harness {
namespace {

using bounds::BoundEntry;
using dynamics::Trajectory;

bool per_alpha(const std::string& name) {
  return name == "alpha" || name == "alpha_closed" || name == "alpha_beta" ||
         name == "alpha_beta_bloch" || name == "kraus_alpha";
}

const qstate::HermitianObservable& hamiltonian_of(const Trajectory& traj, const std::string& bound) {
  const auto* ham = std::get_if<dynamics::HamiltonianEvolution>(&traj.spec());
  if (ham == nullptr) {
    throw Error(ErrorCode::kPrecondition,
                bound + " needs a time-independent Hamiltonian, scenario dynamics is " +
                    std::string(dynamics::variant_name(traj.spec())));
  }
  return ham->hamiltonian;
}

BoundEntry time_bound_entry(const Trajectory& traj, const std::string& name) {
  const auto& h = hamiltonian_of(traj, name);
  const auto& rho0 = traj.initial_state();
  if (!qstate::is_pure(rho0)) {
    throw Error(ErrorCode::kPrecondition,
                name + " requires a pure initial state, purity is " + std::to_string(qstate::purity(rho0)));
  }
  const double tau = traj.horizon();
  const auto psi0 = qstate::principal_vector(rho0);
  const auto psi_tau = qstate::principal_vector(traj.evolve(tau));
  bounds::TimeBound tb;
  if (name == "mt") {
    tb = bounds::mt_time(h, psi0, psi_tau);
  } else {
    // The ML bound (and with it the combined bound) concerns orthogonal targets only.
    tb = bounds::lt_time(h, psi0, psi_tau);
    if (name == "ml" && !tb.frozen) tb = bounds::ml_time(h, psi0);
  }
  BoundEntry e;
  e.name = name;
  e.value = tb.value;
  e.frozen = tb.frozen;
  e.ratio = tb.value / tau;
  if (e.value > tau * (1.0 + bounds::kOvershootTolerance)) {
    throw Error(ErrorCode::kInternalConsistency,
                name + " = " + std::to_string(e.value) + " exceeds the evolution time");
  }
  return e;
}

BoundEntry evaluate(const Trajectory& traj, const std::string& name,
                    std::optional<SchattenOrder> alpha) {
  if (name == "alpha") return bounds::alpha_qsl(traj, *alpha);
  if (name == "alpha_bloch") return bounds::alpha_qsl_bloch(traj);
  if (name == "alpha_closed") {
    return bounds::alpha_qsl_closed(hamiltonian_of(traj, name), traj.initial_state(), traj.horizon(),
                                    *alpha);
  }
  if (name == "alpha_beta") return bounds::alpha_beta_qsl(traj, *alpha);
  if (name == "alpha_beta_bloch") return bounds::alpha_beta_qsl_bloch(traj, *alpha);
  if (name == "kraus_alpha") return bounds::kraus_alpha_qsl(traj, *alpha);
  if (name == "dl") return bounds::dl_qsl(traj);
  if (name == "dl_bloch") return bounds::dl_qsl_bloch(traj);
  if (name == "cpm") return bounds::cpm_qsl(traj);
  if (name == "ceph") return bounds::ceph_qsl(traj);
  if (name == "mt" || name == "ml" || name == "lt") return time_bound_entry(traj, name);
  throw Error(ErrorCode::kInvalidInput, "unknown bound '" + name + "'");
}

}  // namespace

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first;
  std::mutex first_mutex;
  auto work = [&]() {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(first_mutex);
        if (!first) first = std::current_exception();
        stop = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

bounds::QslReport run_scenario(const Scenario& scenario) {
  bounds::QslReport report;
  report.scenario_id = scenario.id;
  report.tau = scenario.horizon;
  std::optional<Trajectory> traj;
  try {
    traj.emplace(build_trajectory(scenario));
  } catch (const std::exception& e) {
    report.entries.push_back(bounds::error_entry("scenario", std::nullopt, std::nullopt, e.what()));
    return report;
  }
  for (const std::string& name : scenario.bounds) {
    std::vector<std::optional<SchattenOrder>> orders;
    if (per_alpha(name)) {
      orders.assign(scenario.alphas.begin(), scenario.alphas.end());
    } else {
      orders.push_back(std::nullopt);
    }
    for (const auto& alpha : orders) {
      try {
        report.entries.push_back(evaluate(*traj, name, alpha));
      } catch (const std::exception& e) {
        std::optional<SchattenOrder> beta;
        if (alpha && (name == "alpha_beta" || name == "alpha_beta_bloch")) beta = alpha->dual();
        report.entries.push_back(bounds::error_entry(name, alpha, beta, e.what()));
      }
    }
  }
  return report;
}

std::vector<bounds::QslReport> run_scenarios(const std::vector<Scenario>& scenarios,
                                             std::size_t workers) {
  std::vector<bounds::QslReport> reports(scenarios.size());
  parallel_for(scenarios.size(), workers,
               [&](std::size_t i) { reports[i] = run_scenario(scenarios[i]); });
  return reports;
}

bool rows_ok(const std::vector<Scenario>& scenarios, const std::vector<bounds::QslReport>& reports) {
  for (std::size_t i = 0; i < reports.size(); ++i) {
    bool any_error = false;
    for (const auto& e : reports[i].entries) any_error = any_error || e.error.has_value();
    const bool expected = i < scenarios.size() && scenarios[i].expect_error;
    if (any_error != expected) return false;
  }
  return true;
}

}  // namespace qsl::harness
