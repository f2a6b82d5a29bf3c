#pragma once

// Scenario files: a JSON document {"version": 1, "scenarios": [...]}.
// See docs/scenario-format.md for the schema.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsl/dynamics.hpp"

namespace qsl::harness {

using matnum::ComplexMatrix;
using matnum::SchattenOrder;

inline constexpr int kScenarioFormatVersion = 1;

struct InitialState {
  std::optional<Eigen::Vector3d> bloch;
  std::optional<ComplexMatrix> matrix;
};

struct Scenario {
  std::string id;
  std::string channel;
  nlohmann::json params = nlohmann::json::object();
  InitialState initial;
  double horizon = 1.0;
  std::vector<double> breakpoints;
  std::vector<SchattenOrder> alphas;
  std::vector<std::string> bounds;
  bool expect_error = false;
};

struct ChannelInfo {
  std::string name;
  std::string params;
  std::string summary;
};

const std::vector<ChannelInfo>& channel_zoo();
const std::vector<std::string>& bound_names();

/// Parses and validates a scenario document. `source` names the input in
/// error messages. Throws kParse (with line:column or field path),
/// kUnknownChannel (with suggestions) or kNonphysicalState (naming the id).
std::vector<Scenario> parse_scenarios(std::string_view text, std::string_view source = "<input>");
std::vector<Scenario> load_scenarios(const std::filesystem::path& path);

/// Resolves the channel name and parameters into a trajectory.
dynamics::Trajectory build_trajectory(const Scenario& scenario);
qstate::DensityMatrix initial_density(const Scenario& scenario);

nlohmann::json to_json(const Scenario& scenario);
nlohmann::json matrix_to_json(const ComplexMatrix& m);
/// Document with the version field around a list of scenarios.
nlohmann::json scenario_document(const std::vector<Scenario>& scenarios);

}  // namespace qsl::harness
