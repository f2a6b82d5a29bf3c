#include "qsl/harness/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qsl/channels.hpp"
#include "qsl/error.hpp"
#include "qsl/tightness.hpp"

namespace qsl::harness {
namespace {

using nlohmann::json;
using matnum::Complex;

const std::vector<ChannelInfo> kZoo = {
    {"dephasing", "rate", "qubit phase damping; Bloch x, y decay as exp(-rate t)"},
    {"amplitude-damping", "rate", "qubit decay towards |0> (Bloch z = +1) at the given rate"},
    {"depolarizing", "rate", "qubit depolarizing; the Bloch vector shrinks as exp(-rate t)"},
    {"precession", "omega, axis=[0,0,1]", "unitary rotation under H = (omega/2) axis.sigma"},
    {"bloch-line", "target=[x,y,z]", "straight Bloch segment from the initial state to target"},
    {"bloch-radial", "profile=exponential|linear, depth, rate",
     "radial path n_t = (1 - g(t)) n_0 from a pure state"},
    {"custom-kraus", "operators=[matrix,...], rate",
     "interpolation {sqrt(e^-rt) I, sqrt(1 - e^-rt) E_j} towards a fixed channel"},
    {"lindblad", "hamiltonian=matrix, jumps=[{operator, rate}]",
     "time-independent master equation; without jumps, unitary evolution"},
};

const std::vector<std::string> kBounds = {"alpha",    "alpha_bloch", "alpha_closed",
                                          "alpha_beta", "alpha_beta_bloch", "kraus_alpha",
                                          "dl",       "dl_bloch",    "cpm",
                                          "ceph",     "mt",          "ml",
                                          "lt"};

const std::set<std::string> kScenarioKeys = {"id",     "channel",     "params",  "initial_state",
                                             "horizon", "breakpoints", "alphas", "bounds",
                                             "expect_error"};

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string closest(std::string_view word, const std::vector<std::string>& options) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& o : options) {
    const std::size_t d = edit_distance(word, o);
    if (d < best_d) {
      best_d = d;
      best = o;
    }
  }
  return best_d <= std::max<std::size_t>(3, word.size() / 2) ? best : std::string();
}

std::string joined(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::kParse, path + ": " + message);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number, got " + std::string(j.type_name()));
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "number is not finite");
  return v;
}

double nonneg_number(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (v < 0.0) fail(path, "expected a value >= 0");
  return v;
}

Eigen::Vector3d vector3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected an array of three numbers");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]"), number(j[2], path + "[2]")};
}

ComplexMatrix matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const auto d = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
      fail(rp, "expected a row of " + std::to_string(d) + " entries (square matrix)");
    }
    for (Eigen::Index c = 0; c < d; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      const std::string ep = rp + "[" + std::to_string(c) + "]";
      if (e.is_number()) {
        m(r, c) = number(e, ep);
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = Complex(number(e[0], ep + "[0]"), number(e[1], ep + "[1]"));
      } else {
        fail(ep, "expected a number or a [re, im] pair");
      }
    }
  }
  return m;
}

const json& required(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing required field '" + key + "'");
  return *it;
}

void only_keys(const json& obj, const std::set<std::string>& keys, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!keys.count(it.key())) {
      std::vector<std::string> names(keys.begin(), keys.end());
      const std::string hint = closest(it.key(), names);
      fail(path + "." + it.key(),
           "unknown field" + (hint.empty() ? std::string() : " (did you mean '" + hint + "'?)"));
    }
  }
}

std::vector<std::string> zoo_names() {
  std::vector<std::string> names;
  for (const auto& c : kZoo) names.push_back(c.name);
  return names;
}

bool qubit_only(const std::string& channel) {
  return channel != "custom-kraus" && channel != "lindblad";
}

// Checks names and types of the channel parameters against the zoo entry.
void validate_params(const Scenario& s, Eigen::Index dim, const std::string& path) {
  const json& p = s.params;
  if (!p.is_object()) fail(path, "expected an object");
  if (qubit_only(s.channel) && dim != 2) {
    fail(path, "channel '" + s.channel + "' is defined for qubits only, initial state has dimension " +
                   std::to_string(dim));
  }
  if (s.channel == "dephasing" || s.channel == "amplitude-damping" || s.channel == "depolarizing") {
    only_keys(p, {"rate"}, path);
    nonneg_number(required(p, "rate", path), path + ".rate");
  } else if (s.channel == "precession") {
    only_keys(p, {"omega", "axis"}, path);
    number(required(p, "omega", path), path + ".omega");
    if (p.contains("axis") && vector3(p["axis"], path + ".axis").norm() < 1e-12) {
      fail(path + ".axis", "axis must be nonzero");
    }
  } else if (s.channel == "bloch-line") {
    only_keys(p, {"target"}, path);
    const Eigen::Vector3d target = vector3(required(p, "target", path), path + ".target");
    if (target.norm() > 1.0 + qstate::kStateTolerance) {
      throw Error(ErrorCode::kNonphysicalState,
                  "scenario '" + s.id + "': bloch-line target has norm " + std::to_string(target.norm()) +
                      " > 1");
    }
  } else if (s.channel == "bloch-radial") {
    only_keys(p, {"profile", "depth", "rate"}, path);
    const std::string profile = p.value("profile", std::string("exponential"));
    if (profile != "exponential" && profile != "linear") {
      fail(path + ".profile", "expected 'exponential' or 'linear'");
    }
    nonneg_number(required(p, "depth", path), path + ".depth");
    if (profile == "exponential") nonneg_number(required(p, "rate", path), path + ".rate");
  } else if (s.channel == "custom-kraus") {
    only_keys(p, {"operators", "rate"}, path);
    nonneg_number(required(p, "rate", path), path + ".rate");
    const json& ops = required(p, "operators", path);
    if (!ops.is_array() || ops.empty()) fail(path + ".operators", "expected a non-empty array of matrices");
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const std::string op_path = path + ".operators[" + std::to_string(k) + "]";
      if (matrix(ops[k], op_path).rows() != dim) fail(op_path, "dimension differs from the initial state");
    }
  } else if (s.channel == "lindblad") {
    only_keys(p, {"hamiltonian", "jumps"}, path);
    if (p.contains("hamiltonian") &&
        matrix(p["hamiltonian"], path + ".hamiltonian").rows() != dim) {
      fail(path + ".hamiltonian", "dimension differs from the initial state");
    }
    if (p.contains("jumps")) {
      const json& jumps = p["jumps"];
      if (!jumps.is_array()) fail(path + ".jumps", "expected an array");
      for (std::size_t k = 0; k < jumps.size(); ++k) {
        const std::string jp = path + ".jumps[" + std::to_string(k) + "]";
        if (!jumps[k].is_object()) fail(jp, "expected an object {operator, rate}");
        only_keys(jumps[k], {"operator", "rate"}, jp);
        if (matrix(required(jumps[k], "operator", jp), jp + ".operator").rows() != dim) {
          fail(jp + ".operator", "dimension differs from the initial state");
        }
        nonneg_number(required(jumps[k], "rate", jp), jp + ".rate");
      }
    }
  }
}

Scenario parse_one(const json& j, const std::string& path, std::set<std::string>& seen) {
  if (!j.is_object()) fail(path, "expected an object");
  only_keys(j, kScenarioKeys, path);
  Scenario s;

  const json& id = required(j, "id", path);
  if (!id.is_string() || id.get<std::string>().empty()) fail(path + ".id", "expected a non-empty string");
  s.id = id.get<std::string>();
  if (!seen.insert(s.id).second) fail(path + ".id", "duplicate scenario id '" + s.id + "'");

  const json& channel = required(j, "channel", path);
  if (!channel.is_string()) fail(path + ".channel", "expected a string");
  s.channel = channel.get<std::string>();
  const auto names = zoo_names();
  if (std::find(names.begin(), names.end(), s.channel) == names.end()) {
    const std::string hint = closest(s.channel, names);
    throw Error(ErrorCode::kUnknownChannel,
                path + ".channel: unknown channel '" + s.channel + "'" +
                    (hint.empty() ? std::string() : "; did you mean '" + hint + "'?") +
                    " Known channels: " + joined(names));
  }

  if (j.contains("params")) s.params = j["params"];

  const json& init = required(j, "initial_state", path);
  const std::string ipath = path + ".initial_state";
  if (!init.is_object()) fail(ipath, "expected an object with 'bloch' or 'matrix'");
  only_keys(init, {"bloch", "matrix"}, ipath);
  if (init.contains("bloch") == init.contains("matrix")) {
    fail(ipath, "give exactly one of 'bloch' or 'matrix'");
  }
  if (init.contains("bloch")) {
    s.initial.bloch = vector3(init["bloch"], ipath + ".bloch");
  } else {
    s.initial.matrix = matrix(init["matrix"], ipath + ".matrix");
  }

  const json& horizon = required(j, "horizon", path);
  s.horizon = number(horizon, path + ".horizon");
  if (!(s.horizon > 0.0)) fail(path + ".horizon", "horizon must be > 0");

  if (j.contains("breakpoints")) {
    const json& b = j["breakpoints"];
    if (!b.is_array()) fail(path + ".breakpoints", "expected an array of times");
    for (std::size_t k = 0; k < b.size(); ++k) {
      const std::string bp = path + ".breakpoints[" + std::to_string(k) + "]";
      const double t = number(b[k], bp);
      if (!(t > 0.0 && t < s.horizon)) fail(bp, "breakpoint must lie strictly inside (0, horizon)");
      s.breakpoints.push_back(t);
    }
  }

  if (j.contains("alphas")) {
    const json& a = j["alphas"];
    if (!a.is_array()) fail(path + ".alphas", "expected an array of orders");
    for (std::size_t k = 0; k < a.size(); ++k) {
      const std::string ap = path + ".alphas[" + std::to_string(k) + "]";
      try {
        if (a[k].is_string()) {
          s.alphas.push_back(SchattenOrder::parse(a[k].get<std::string>()));
        } else {
          s.alphas.push_back(SchattenOrder::from_value(number(a[k], ap)));
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kParse) throw;
        fail(ap, e.what());
      }
    }
  } else {
    s.alphas = {SchattenOrder::finite(1.0), SchattenOrder::finite(2.0), SchattenOrder::infinity()};
  }

  if (j.contains("bounds")) {
    const json& b = j["bounds"];
    if (!b.is_array()) fail(path + ".bounds", "expected an array of bound names");
    for (std::size_t k = 0; k < b.size(); ++k) {
      const std::string bp = path + ".bounds[" + std::to_string(k) + "]";
      if (!b[k].is_string()) fail(bp, "expected a string");
      const std::string name = b[k].get<std::string>();
      if (std::find(kBounds.begin(), kBounds.end(), name) == kBounds.end()) {
        const std::string hint = closest(name, kBounds);
        fail(bp, "unknown bound '" + name + "'" +
                     (hint.empty() ? std::string() : " (did you mean '" + hint + "'?)") +
                     "; known bounds: " + joined(kBounds));
      }
      s.bounds.push_back(name);
    }
  } else {
    s.bounds = {"alpha"};
  }

  if (j.contains("expect_error")) {
    if (!j["expect_error"].is_boolean()) fail(path + ".expect_error", "expected true or false");
    s.expect_error = j["expect_error"].get<bool>();
  }

  // Physical initial state, reported against the scenario id.
  Eigen::Index dim = 2;
  try {
    dim = static_cast<Eigen::Index>(initial_density(s).dim());
  } catch (const Error& e) {
    throw Error(e.code() == ErrorCode::kParse ? ErrorCode::kParse : ErrorCode::kNonphysicalState,
                "scenario '" + s.id + "': " + e.what());
  }
  validate_params(s, dim, path + ".params");
  if (s.channel == "bloch-radial" && !s.initial.bloch) {
    fail(ipath, "bloch-radial needs a 'bloch' initial state");
  }
  return s;
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()) && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

const std::vector<ChannelInfo>& channel_zoo() { return kZoo; }
const std::vector<std::string>& bound_names() { return kBounds; }

std::vector<Scenario> parse_scenarios(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at line x, column y:" prefix.
    const auto colon = what.find(": ", what.find("parse error"));
    if (colon != std::string::npos) what = what.substr(colon + 2);
    throw Error(ErrorCode::kParse,
                std::string(source) + ":" + line_column(text, e.byte) + ": " + what);
  }
  const std::string root(source);
  if (!doc.is_object()) fail(root, "expected a JSON object at the top level");
  only_keys(doc, {"version", "scenarios"}, root);
  const json& version = required(doc, "version", root);
  if (!version.is_number_integer() || version.get<int>() != kScenarioFormatVersion) {
    fail(root + ".version", "unsupported version " + version.dump() + " (expected " +
                                std::to_string(kScenarioFormatVersion) + ")");
  }
  const json& list = required(doc, "scenarios", root);
  if (!list.is_array()) fail(root + ".scenarios", "expected an array");

  std::vector<Scenario> out;
  std::set<std::string> seen;
  for (std::size_t k = 0; k < list.size(); ++k) {
    out.push_back(parse_one(list[k], "scenarios[" + std::to_string(k) + "]", seen));
  }
  return out;
}

std::vector<Scenario> load_scenarios(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open scenario file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenarios(buffer.str(), path.string());
}

qstate::DensityMatrix initial_density(const Scenario& s) {
  if (s.initial.bloch) return qstate::from_bloch(qstate::BlochVector(*s.initial.bloch));
  if (s.initial.matrix) return qstate::DensityMatrix(*s.initial.matrix);
  throw Error(ErrorCode::kInvalidInput, "scenario '" + s.id + "' has no initial state");
}

dynamics::Trajectory build_trajectory(const Scenario& s) {
  const qstate::DensityMatrix rho0 = initial_density(s);
  const json& p = s.params;
  const double tau = s.horizon;
  if (s.channel == "dephasing") {
    return {channels::dephasing(p.at("rate").get<double>()), rho0, tau, s.breakpoints};
  }
  if (s.channel == "amplitude-damping") {
    return {channels::amplitude_damping(p.at("rate").get<double>()), rho0, tau, s.breakpoints};
  }
  if (s.channel == "depolarizing") {
    return {channels::depolarizing(p.at("rate").get<double>()), rho0, tau, s.breakpoints};
  }
  if (s.channel == "precession") {
    const Eigen::Vector3d axis =
        p.contains("axis") ? vector3(p["axis"], "params.axis") : Eigen::Vector3d::UnitZ();
    return {channels::precession(p.at("omega").get<double>(), axis), rho0, tau, s.breakpoints};
  }
  if (s.channel == "bloch-line") {
    const auto target = qstate::from_bloch(qstate::BlochVector(vector3(p.at("target"), "params.target")));
    return tightness::traverse_bloch(tightness::line_geodesic(rho0, target), tau);
  }
  if (s.channel == "bloch-radial") {
    const std::string profile = p.value("profile", std::string("exponential"));
    const double depth = p.at("depth").get<double>();
    auto g = profile == "linear" ? tightness::linear_profile(depth, tau)
                                 : tightness::exponential_profile(depth, p.at("rate").get<double>());
    return tightness::traverse_bloch(
        tightness::radial_path(qstate::BlochVector(*s.initial.bloch), std::move(g), tau), tau);
  }
  if (s.channel == "custom-kraus") {
    std::vector<ComplexMatrix> ops;
    for (const auto& op : p.at("operators")) ops.push_back(matrix(op, "params.operators"));
    return {channels::custom_kraus(ops, p.at("rate").get<double>()), rho0, tau, s.breakpoints};
  }
  if (s.channel == "lindblad") {
    const auto d = static_cast<Eigen::Index>(rho0.dim());
    const ComplexMatrix h =
        p.contains("hamiltonian") ? matrix(p["hamiltonian"], "params.hamiltonian") : ComplexMatrix::Zero(d, d);
    dynamics::LindbladEvolution gen{qstate::HermitianObservable(h), {}};
    if (p.contains("jumps")) {
      for (const auto& jump : p["jumps"]) {
        gen.jumps.push_back({matrix(jump.at("operator"), "params.jumps.operator"),
                             jump.at("rate").get<double>()});
      }
    }
    if (gen.jumps.empty()) return {dynamics::HamiltonianEvolution{gen.hamiltonian}, rho0, tau, s.breakpoints};
    return {std::move(gen), rho0, tau, s.breakpoints};
  }
  throw Error(ErrorCode::kUnknownChannel, "unknown channel '" + s.channel + "'");
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Scenario& s) {
  json j;
  j["id"] = s.id;
  j["channel"] = s.channel;
  j["params"] = s.params;
  if (s.initial.bloch) {
    j["initial_state"] = {{"bloch", {s.initial.bloch->x(), s.initial.bloch->y(), s.initial.bloch->z()}}};
  } else if (s.initial.matrix) {
    j["initial_state"] = {{"matrix", matrix_to_json(*s.initial.matrix)}};
  }
  j["horizon"] = s.horizon;
  if (!s.breakpoints.empty()) j["breakpoints"] = s.breakpoints;
  json alphas = json::array();
  for (const auto& a : s.alphas) {
    if (a.is_infinite()) {
      alphas.push_back("inf");
    } else {
      alphas.push_back(a.value());
    }
  }
  j["alphas"] = alphas;
  j["bounds"] = s.bounds;
  if (s.expect_error) j["expect_error"] = true;
  return j;
}

json scenario_document(const std::vector<Scenario>& scenarios) {
  json doc;
  doc["version"] = kScenarioFormatVersion;
  doc["scenarios"] = json::array();
  for (const auto& s : scenarios) doc["scenarios"].push_back(to_json(s));
  return doc;
}

}  // namespace qsl::harness
