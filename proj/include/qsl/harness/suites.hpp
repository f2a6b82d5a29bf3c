#pragma once

// Seeded property suites. Each suite reports a list of checks; a check
// passes when its worst margin is at least its threshold.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qsl/harness/sampling.hpp"
#include "qsl/harness/scenario.hpp"

namespace qsl::harness {

struct SuiteConfig {
  std::string suite = "all";
  /// 0 selects the suite's default instance count.
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  /// Matrix dimensions drawn by the holder suite.
  std::size_t min_dim = 1;
  std::size_t max_dim = 6;
  /// Threshold overrides keyed by check name.
  std::map<std::string, double> thresholds;
  std::size_t workers = 1;
  /// Deliberate corruption for soundness testing: "alpha_x2", "alpha_beta_x2" or "dl_x2".
  std::string fault;
};

struct CheckResult {
  std::string suite;
  std::string check;
  std::size_t count = 0;
  double worst_margin = 0.0;
  double threshold = 0.0;
  bool passed = false;
  /// JSON description of the worst instance, filled when the check fails.
  std::string failing_instance;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// universality, factor-identities, ordering, relations, lemma3, tightness,
/// holder, closed-system, geodesic, and "all".
const std::vector<std::string>& suite_names();

/// Throws kInvalidInput for unknown suites or faults.
SuiteReport verify(const SuiteConfig& config);

inline constexpr std::string_view kSuiteCsvHeader = "suite,check,count,worst_margin,threshold,passed";
void write_suite_csv(const SuiteReport& report, std::ostream& out);

/// Random qubit scenario: tau in [0.5, 2], initial Bloch vector uniform in
/// the ball (on the sphere when `pure`), channel drawn from dephasing,
/// amplitude damping, depolarizing, precession and a Lindblad mix, rates
/// log-uniform in [0.1/tau, 10/tau].
Scenario random_qubit_scenario(Rng& rng, bool pure, const std::string& id);
/// Random d-level scenario: Lindblad with a random Hamiltonian and jump, or
/// a Kraus interpolation towards a random channel.
Scenario random_qudit_scenario(Rng& rng, Eigen::Index d, const std::string& id);

}  // namespace qsl::harness
