// qsl: quantum speed limits along finite-dimensional trajectories.
//
//   qsl run --scenario FILE [--out PATH] [--format csv|json] [--parallel N]
//   qsl verify [--suite NAME] [--samples N] [--seed S] [--parallel N] [--out PATH]
//   qsl bounds --channel NAME --params JSON --bloch x,y,z --tau T [--alphas 1,2,inf] [--bounds alpha,dl]
//   qsl zoo

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qsl/error.hpp"
#include "qsl/harness/emit.hpp"
#include "qsl/harness/runner.hpp"
#include "qsl/harness/scenario.hpp"
#include "qsl/harness/suites.hpp"

namespace {

using namespace qsl;
using namespace qsl::harness;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

nlohmann::json parse_number_or_inf(const std::string& s) {
  if (s == "inf" || s == "infinity") return "inf";
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw Error(ErrorCode::kInvalidInput, "not a number: '" + s + "'");
  return v;
}

int report_rows(const std::vector<Scenario>& scenarios, const std::string& out, const std::string& format,
                std::size_t workers) {
  const auto reports = run_scenarios(scenarios, workers);
  emit(reports, parse_format(format), out);
  bool failed = false;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (const auto& e : reports[i].entries) {
      if (e.error && !scenarios[i].expect_error) {
        std::cerr << "qsl: " << reports[i].scenario_id << "/" << e.name << ": " << *e.error << '\n';
        failed = true;
      }
    }
  }
  if (!failed && !rows_ok(scenarios, reports)) {
    std::cerr << "qsl: a scenario marked expect_error produced no error row\n";
  }
  return rows_ok(scenarios, reports) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum speed limits along finite-dimensional trajectories"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out = "-";
  std::string format = "csv";
  std::size_t parallel = 1;

  auto* run = app.add_subcommand("run", "Evaluate the bounds requested by a scenario file");
  run->add_option("--scenario", scenario_path, "Scenario document")->required();
  run->add_option("--out", out, "Output path, '-' for stdout");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--parallel", parallel, "Worker threads, 0 for all cores");

  SuiteConfig suite;
  std::vector<std::string> overrides;
  auto* verify_cmd = app.add_subcommand("verify", "Run seeded property suites");
  verify_cmd->add_option("--suite", suite.suite, "Suite name")->check(CLI::IsMember(suite_names()));
  verify_cmd->add_option("--samples", suite.samples, "Instances per suite (default: suite specific)")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", suite.seed, "Base seed");
  verify_cmd->add_option("--parallel", suite.workers, "Worker threads, 0 for all cores");
  verify_cmd->add_option("--out", out, "Output path, '-' for stdout");
  verify_cmd->add_option("--min-dim", suite.min_dim, "Smallest matrix dimension for holder")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--max-dim", suite.max_dim, "Largest matrix dimension for holder")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--threshold", overrides, "Override a check threshold, CHECK=VALUE");
  verify_cmd->add_option("--fault", suite.fault, "Corrupt a bound by a factor 2 (alpha_x2, alpha_beta_x2, dl_x2)");

  std::string channel;
  std::string params = "{}";
  std::string bloch;
  double tau = 1.0;
  std::string alphas = "1,2,inf";
  std::string bound_list = "alpha";
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate one scenario given on the command line");
  bounds_cmd->add_option("--channel", channel, "Channel name (see `qsl zoo`)")->required();
  bounds_cmd->add_option("--params", params, "Channel parameters as a JSON object");
  bounds_cmd->add_option("--bloch", bloch, "Initial Bloch vector x,y,z")->required();
  bounds_cmd->add_option("--tau", tau, "Evolution time")->required();
  bounds_cmd->add_option("--alphas", alphas, "Comma separated orders");
  bounds_cmd->add_option("--bounds", bound_list, "Comma separated bound names");
  bounds_cmd->add_option("--out", out, "Output path, '-' for stdout");
  bounds_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* zoo = app.add_subcommand("zoo", "List the channels and bound names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return report_rows(load_scenarios(scenario_path), out, format, parallel);
    }

    if (*verify_cmd) {
      for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::kInvalidInput, "expected CHECK=VALUE, got '" + o + "'");
        suite.thresholds[o.substr(0, eq)] = std::stod(o.substr(eq + 1));
      }
      const SuiteReport report = verify(suite);
      if (out == "-") {
        write_suite_csv(report, std::cout);
      } else {
        std::ofstream f(out, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorCode::kIo, "cannot open " + out + " for writing");
        write_suite_csv(report, f);
        if (!f) throw Error(ErrorCode::kIo, "failed writing " + out);
      }
      for (const auto& c : report.checks) {
        if (c.passed) continue;
        std::cerr << "FAIL " << c.suite << "/" << c.check << " worst margin " << format_number(c.worst_margin)
                  << " < " << format_number(c.threshold) << '\n';
        if (!c.failing_instance.empty()) std::cerr << "  instance: " << c.failing_instance << '\n';
      }
      return report.passed() ? 0 : 1;
    }

    if (*bounds_cmd) {
      nlohmann::json sc;
      sc["id"] = "cli";
      sc["channel"] = channel;
      sc["params"] = nlohmann::json::parse(params);
      nlohmann::json n = nlohmann::json::array();
      for (const auto& c : split(bloch, ',')) n.push_back(std::stod(c));
      sc["initial_state"] = {{"bloch", n}};
      sc["horizon"] = tau;
      sc["alphas"] = nlohmann::json::array();
      for (const auto& a : split(alphas, ',')) sc["alphas"].push_back(parse_number_or_inf(a));
      sc["bounds"] = split(bound_list, ',');
      const nlohmann::json doc = {{"version", kScenarioFormatVersion}, {"scenarios", {sc}}};
      return report_rows(parse_scenarios(doc.dump(), "command line"), out, format, 1);
    }

    if (*zoo) {
      std::cout << "channels:\n";
      for (const auto& c : channel_zoo()) {
        std::cout << "  " << c.name << " (" << c.params << ")\n      " << c.summary << '\n';
      }
      std::cout << "bounds:\n ";
      for (const auto& b : bound_names()) std::cout << ' ' << b;
      std::cout << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "qsl: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
