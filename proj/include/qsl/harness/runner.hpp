#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "qsl/bounds.hpp"
#include "qsl/harness/scenario.hpp"

namespace qsl::harness {

/// Calls body(i) for i in [0, n) on up to `workers` threads (0 picks the
/// hardware concurrency). Each index runs exactly once; the first exception
/// is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body);

/// Evaluates every requested bound. Failures become error entries; this
/// never throws for a validated scenario.
bounds::QslReport run_scenario(const Scenario& scenario);

/// Reports in input order regardless of `workers`.
std::vector<bounds::QslReport> run_scenarios(const std::vector<Scenario>& scenarios,
                                             std::size_t workers);

/// True when every row succeeded, counting a scenario marked expect_error as
/// successful exactly when at least one of its rows failed.
bool rows_ok(const std::vector<Scenario>& scenarios, const std::vector<bounds::QslReport>& reports);

}  // namespace qsl::harness
