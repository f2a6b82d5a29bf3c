#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qsl/harness/emit.hpp"
#include "qsl/harness/runner.hpp"
#include "qsl/harness/scenario.hpp"
#include "qsl/harness/suites.hpp"
#include "support.hpp"

namespace qsl::testing {
namespace {

using namespace harness;
using std::numbers::pi;

std::string doc(const std::string& scenarios) {
  return R"({"version": 1, "scenarios": [)" + scenarios + "]}";
}

const char* kDephasing = R"({"id": "deph", "channel": "dephasing", "params": {"rate": 0.7},
  "initial_state": {"bloch": [1, 0, 0]}, "horizon": 1.5, "alphas": [2],
  "bounds": ["alpha", "dl", "alpha_beta"]})";

std::string message_of(const std::string& text) {
  try {
    parse_scenarios(text, "test.json");
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

ErrorCode code_of(const std::string& text) {
  return error_code_of([&] { parse_scenarios(text, "test.json"); });
}

TEST(Load, OneDephasingScenario) {
  const auto s = parse_scenarios(doc(kDephasing));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].id, "deph");
  const auto traj = build_trajectory(s[0]);
  EXPECT_TRUE(std::holds_alternative<dynamics::KrausSchedule>(traj.spec()));
  EXPECT_DOUBLE_EQ(traj.horizon(), 1.5);
}

TEST(Load, EmptyList) {
  EXPECT_TRUE(parse_scenarios(doc("")).empty());
  std::ostringstream out;
  write_csv(run_scenarios({}, 1), out);
  EXPECT_EQ(out.str(), std::string(kCsvHeader) + "\n");
}

TEST(Load, Defaults) {
  const auto s = parse_scenarios(doc(R"({"id": "d", "channel": "depolarizing", "params": {"rate": 1},
    "initial_state": {"bloch": [0, 0, 0.5]}, "horizon": 1})"));
  ASSERT_EQ(s[0].alphas.size(), 3u);
  EXPECT_TRUE(s[0].alphas[2].is_infinite());
  EXPECT_EQ(s[0].bounds, std::vector<std::string>{"alpha"});
}

TEST(Load, NonphysicalStateNamesScenario) {
  const std::string text = doc(R"({"id": "too-long", "channel": "dephasing", "params": {"rate": 1},
    "initial_state": {"bloch": [0, 0, 1.2]}, "horizon": 1})");
  EXPECT_EQ(code_of(text), ErrorCode::kNonphysicalState);
  EXPECT_NE(message_of(text).find("too-long"), std::string::npos);
}

TEST(Load, UnknownChannelSuggests) {
  const std::string text = doc(R"({"id": "x", "channel": "dephaseing", "params": {"rate": 1},
    "initial_state": {"bloch": [0, 0, 1]}, "horizon": 1})");
  EXPECT_EQ(code_of(text), ErrorCode::kUnknownChannel);
  const std::string msg = message_of(text);
  EXPECT_NE(msg.find("dephasing"), std::string::npos);
  EXPECT_NE(msg.find("amplitude-damping"), std::string::npos);
}

TEST(Load, SyntaxErrorHasLineAndColumn) {
  const std::string msg = message_of("{\"version\": 1,\n \"scenarios\": [\n  {,}]}");
  EXPECT_NE(msg.find("test.json:3:"), std::string::npos) << msg;
}

TEST(Load, SchemaErrorsNameTheField) {
  std::string bad = kDephasing;
  bad.replace(bad.find("1.5"), 3, "-1");
  EXPECT_NE(message_of(doc(bad)).find("scenarios[0].horizon"), std::string::npos);

  bad = kDephasing;
  bad.replace(bad.find("\"rate\""), 6, "\"rat\"");
  const std::string msg = message_of(doc(bad));
  EXPECT_NE(msg.find("scenarios[0].params"), std::string::npos) << msg;

  bad = kDephasing;
  bad.replace(bad.find("\"bounds\""), 8, "\"bound\"");
  EXPECT_NE(message_of(doc(bad)).find("did you mean 'bounds'"), std::string::npos);

  EXPECT_NE(message_of(R"({"scenarios": []})").find("version"), std::string::npos);
  EXPECT_EQ(code_of(R"({"version": 2, "scenarios": []})"), ErrorCode::kParse);
}

TEST(Load, MatrixEntries) {
  const auto s = parse_scenarios(doc(R"({"id": "m", "channel": "lindblad",
    "params": {"hamiltonian": [[0, [0, -1]], [[0, 1], 0]]},
    "initial_state": {"matrix": [[1, 0], [0, 0]]}, "horizon": 1})"));
  const auto traj = build_trajectory(s[0]);
  EXPECT_TRUE(std::holds_alternative<dynamics::HamiltonianEvolution>(traj.spec()));
}

TEST(Load, QubitOnlyChannelsRejectQutrits) {
  const std::string text = doc(R"({"id": "q3", "channel": "dephasing", "params": {"rate": 1},
    "initial_state": {"matrix": [[1, 0, 0], [0, 0, 0], [0, 0, 0]]}, "horizon": 1})");
  EXPECT_THROW(parse_scenarios(text), Error);
}

TEST(Load, ScenarioDocumentRoundtrip) {
  auto rng = rng_for("doc-roundtrip");
  std::vector<Scenario> in;
  for (int i = 0; i < 5; ++i) in.push_back(random_qubit_scenario(rng, i % 2 == 0, "s" + std::to_string(i)));
  in.push_back(random_qudit_scenario(rng, 3, "q"));
  const auto back = parse_scenarios(scenario_document(in).dump());
  ASSERT_EQ(back.size(), in.size());
  for (std::size_t i = 0; i < in.size(); ++i) EXPECT_EQ(to_json(back[i]), to_json(in[i]));
}

TEST(Load, FixtureFileLoads) {
  const auto s = load_scenarios(std::filesystem::path(QSL_SOURCE_DIR) / "scenarios" / "fixtures.json");
  EXPECT_GE(s.size(), 5u);
  EXPECT_EQ(error_code_of([] { load_scenarios("/nonexistent/file.json"); }), ErrorCode::kIo);
}

TEST(Run, DephasingRatios) {
  const auto r = run_scenario(parse_scenarios(doc(kDephasing))[0]);
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_NEAR(r.entries[0].ratio, 1.0, 1e-9);
  EXPECT_NEAR(r.entries[1].ratio, 1.0, 1e-9);
  EXPECT_NEAR(r.entries[2].ratio, 1.0 / std::sqrt(2.0), 1e-9);
}

TEST(Run, PrecessionHalfTurn) {
  const auto s = parse_scenarios(doc(R"({"id": "p", "channel": "precession",
    "params": {"omega": 1.5707963267948966}, "initial_state": {"bloch": [1, 0, 0]},
    "horizon": 2, "alphas": [1, "inf"], "bounds": ["alpha"]})"));
  const auto r = run_scenario(s[0]);
  ASSERT_EQ(r.entries.size(), 2u);
  for (const auto& e : r.entries) EXPECT_NEAR(e.value, 2.0 / pi * 2.0, 1e-9);
}

TEST(Run, MixedStateDlIsRowError) {
  const auto s = parse_scenarios(doc(R"({"id": "mixed", "channel": "depolarizing", "params": {"rate": 1},
    "initial_state": {"bloch": [0.1, 0.2, 0.3]}, "horizon": 1, "alphas": [2], "bounds": ["alpha", "dl"]})"));
  const auto r = run_scenarios(s, 1);
  ASSERT_EQ(r[0].entries.size(), 2u);
  EXPECT_FALSE(r[0].entries[0].error.has_value());
  ASSERT_TRUE(r[0].entries[1].error.has_value());
  EXPECT_NE(r[0].entries[1].error->find("pure"), std::string::npos);
  EXPECT_FALSE(rows_ok(s, r));
  auto marked = s;
  marked[0].expect_error = true;
  EXPECT_TRUE(rows_ok(marked, r));
}

TEST(Run, FailuresDoNotStopTheBatch) {
  const auto s = parse_scenarios(doc(std::string(R"({"id": "bad", "channel": "precession",
    "params": {"omega": 1}, "initial_state": {"bloch": [0.5, 0, 0]}, "horizon": 1, "bounds": ["mt"]},)") +
                                     kDephasing));
  const auto r = run_scenarios(s, 2);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_TRUE(r[0].entries[0].error.has_value());
  EXPECT_FALSE(r[1].entries[0].error.has_value());
}

TEST(Run, IndependentOfParallelism) {
  auto rng = rng_for("parallel-runs");
  std::vector<Scenario> s;
  for (int i = 0; i < 12; ++i) {
    s.push_back(i % 3 == 0 ? random_qudit_scenario(rng, 3, "q" + std::to_string(i))
                           : random_qubit_scenario(rng, i % 2 == 0, "b" + std::to_string(i)));
    s.back().bounds = {"alpha", "alpha_beta", "dl", "ceph"};
  }
  std::ostringstream one, four;
  write_csv(run_scenarios(s, 1), one);
  write_csv(run_scenarios(s, 4), four);
  EXPECT_EQ(one.str(), four.str());
}

TEST(Emit, CsvShape) {
  const auto reports = run_scenarios(parse_scenarios(doc(kDephasing)), 1);
  std::ostringstream out;
  write_csv(reports, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "scenario_id,bound_name,alpha,beta,tau,value,ratio,degenerate,quad_error");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
  }
  EXPECT_EQ(rows, 3u);
  EXPECT_NE(out.str().find("deph,alpha_beta,2,2,1.5,"), std::string::npos);
}

TEST(Emit, SeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(Emit, JsonRoundtripIsBitExact) {
  auto rng = rng_for("json-roundtrip");
  std::vector<Scenario> s;
  for (int i = 0; i < 6; ++i) {
    s.push_back(random_qubit_scenario(rng, i % 2 == 0, "j" + std::to_string(i)));
    s.back().bounds = {"alpha", "alpha_beta", "dl", "cpm", "kraus_alpha"};
  }
  const auto reports = run_scenarios(s, 1);
  std::ostringstream out;
  write_json(reports, out);
  const auto back = read_json_reports(out.str());
  ASSERT_EQ(back.size(), reports.size());
  auto same_bits = [](double x, double y) {
    if (std::isnan(x) && std::isnan(y)) return true;
    return std::memcmp(&x, &y, sizeof x) == 0;
  };
  for (std::size_t i = 0; i < reports.size(); ++i) {
    EXPECT_EQ(back[i].scenario_id, reports[i].scenario_id);
    EXPECT_TRUE(same_bits(back[i].tau, reports[i].tau));
    ASSERT_EQ(back[i].entries.size(), reports[i].entries.size());
    for (std::size_t k = 0; k < reports[i].entries.size(); ++k) {
      const auto& a = reports[i].entries[k];
      const auto& b = back[i].entries[k];
      EXPECT_EQ(a.name, b.name);
      EXPECT_EQ(a.alpha.has_value(), b.alpha.has_value());
      if (a.alpha) EXPECT_EQ(*a.alpha, *b.alpha);
      EXPECT_TRUE(same_bits(a.value, b.value));
      EXPECT_TRUE(same_bits(a.ratio, b.ratio));
      EXPECT_TRUE(same_bits(a.quad_error, b.quad_error));
      EXPECT_EQ(a.error, b.error);
      EXPECT_EQ(a.degenerate, b.degenerate);
      EXPECT_EQ(a.nodes, b.nodes);
    }
  }
}

TEST(Emit, UnwritablePathNamesThePath) {
  try {
    emit({}, Format::kCsv, "/nonexistent-dir/out.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/out.csv"), std::string::npos);
  }
  EXPECT_THROW(parse_format("xml"), Error);
}

TEST(Verify, SmallBatteryPasses) {
  SuiteConfig c;
  c.samples = 12;
  c.seed = 3;
  const auto report = verify(c);
  for (const auto& check : report.checks) {
    EXPECT_TRUE(check.passed) << check.suite << "/" << check.check << " " << check.worst_margin;
  }
}

TEST(Verify, DeterministicAcrossRunsAndWorkers) {
  SuiteConfig c;
  c.samples = 10;
  std::ostringstream a, b;
  write_suite_csv(verify(c), a);
  c.workers = 3;
  write_suite_csv(verify(c), b);
  EXPECT_EQ(a.str(), b.str());
  c.seed = 2;
  std::ostringstream other;
  write_suite_csv(verify(c), other);
  EXPECT_NE(a.str(), other.str());
}

TEST(Verify, CorruptedBoundsAreCaught) {
  struct Case {
    const char* fault;
    const char* suite;
    const char* check;
  };
  for (const Case& k : {Case{"alpha_x2", "universality", "fundamental-bound"},
                        Case{"alpha_x2", "ordering", "tau>=alpha"},
                        Case{"alpha_beta_x2", "ordering", "alpha>=alpha_beta"},
                        Case{"alpha_beta_x2", "relations", "alpha_beta=2^(-1/alpha)*dl"},
                        Case{"dl_x2", "relations", "alpha>=dl"},
                        Case{"alpha_x2", "lemma3", "conditional-bound"}}) {
    SuiteConfig c;
    c.suite = k.suite;
    c.samples = 40;
    c.fault = k.fault;
    const auto report = verify(c);
    EXPECT_FALSE(report.passed()) << k.fault << " in " << k.suite;
    const auto it = std::find_if(report.checks.begin(), report.checks.end(),
                                 [&](const CheckResult& r) { return r.check == k.check; });
    ASSERT_NE(it, report.checks.end());
    EXPECT_FALSE(it->passed) << k.fault << " " << k.check;
    EXPECT_FALSE(it->failing_instance.empty());
  }
}

TEST(Verify, ThresholdOverridesAndUnknownNames) {
  SuiteConfig c;
  c.suite = "factor-identities";
  c.samples = 5;
  c.thresholds["speed-factor"] = 1.0;
  const auto report = verify(c);
  EXPECT_FALSE(report.passed());
  c.suite = "nope";
  EXPECT_EQ(error_code_of([&] { verify(c); }), ErrorCode::kInvalidInput);
  c.suite = "holder";
  c.fault = "beta_x3";
  EXPECT_EQ(error_code_of([&] { verify(c); }), ErrorCode::kInvalidInput);
}

TEST(Sampling, SeedsAreStable) {
  EXPECT_EQ(instance_seed(1, "universality", 0), instance_seed(1, "universality", 0));
  EXPECT_NE(instance_seed(1, "universality", 0), instance_seed(1, "universality", 1));
  EXPECT_NE(instance_seed(1, "universality", 0), instance_seed(1, "ordering", 0));
  Rng a(42), b(42);
  EXPECT_EQ(random_unit_vector(a), random_unit_vector(b));
}

TEST(Sampling, GeneratedObjectsAreValid) {
  auto rng = rng_for("sampling");
  for (int i = 0; i < 50; ++i) {
    EXPECT_NEAR(random_unit_vector(rng).norm(), 1.0, 1e-12);
    EXPECT_LE(random_in_ball(rng).norm(), 1.0);
    const ComplexMatrix u = haar_unitary(rng, 4);
    EXPECT_LT((u.adjoint() * u - ComplexMatrix::Identity(4, 4)).norm(), 1e-12);
    const double x = log_uniform(rng, 0.1, 10.0);
    EXPECT_GE(x, 0.1);
    EXPECT_LE(x, 10.0);
  }
}

}  // namespace
}  // namespace qsl::testing
