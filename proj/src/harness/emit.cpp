#include "qsl/harness/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "qsl/error.hpp"

namespace qsl::harness {
namespace {

using bounds::BoundEntry;
using bounds::QslReport;

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::string json_number(double x) { return std::isfinite(x) ? format_number(x) : "null"; }

std::string json_order(const std::optional<matnum::SchattenOrder>& o) {
  if (!o) return "null";
  return o->is_infinite() ? "\"inf\"" : format_number(o->value());
}

std::optional<matnum::SchattenOrder> read_order(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string()) return matnum::SchattenOrder::parse(j.get<std::string>());
  return matnum::SchattenOrder::from_value(j.get<double>());
}

double read_number(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw Error(ErrorCode::kInvalidInput, "unknown output format '" + std::string(name) +
                                            "' (expected csv or json)");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_order(const matnum::SchattenOrder& order) {
  return order.is_infinite() ? "inf" : format_number(order.value());
}

void write_csv(const std::vector<QslReport>& reports, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const QslReport& r : reports) {
    for (const BoundEntry& e : r.entries) {
      out << csv_field(r.scenario_id) << ',' << csv_field(e.name) << ','
          << (e.alpha ? format_order(*e.alpha) : "") << ',' << (e.beta ? format_order(*e.beta) : "")
          << ',' << format_number(r.tau) << ',' << format_number(e.value) << ','
          << format_number(e.ratio) << ',' << (e.degenerate ? "true" : "false") << ','
          << format_number(e.error ? std::numeric_limits<double>::quiet_NaN() : e.quad_error)
          << '\n';
    }
  }
}

void write_json(const std::vector<QslReport>& reports, std::ostream& out) {
  out << "{\n  \"reports\": [";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const QslReport& r = reports[i];
    out << (i ? ",\n" : "\n") << "    {\"scenario_id\": " << json_string(r.scenario_id)
        << ", \"tau\": " << json_number(r.tau) << ", \"entries\": [";
    for (std::size_t k = 0; k < r.entries.size(); ++k) {
      const BoundEntry& e = r.entries[k];
      out << (k ? ",\n" : "\n") << "      {\"name\": " << json_string(e.name)
          << ", \"alpha\": " << json_order(e.alpha) << ", \"beta\": " << json_order(e.beta)
          << ", \"value\": " << json_number(e.value) << ", \"ratio\": " << json_number(e.ratio)
          << ", \"degenerate\": " << (e.degenerate ? "true" : "false")
          << ", \"frozen\": " << (e.frozen ? "true" : "false")
          << ", \"finite_difference\": " << (e.finite_difference ? "true" : "false")
          << ", \"nodes\": " << e.nodes << ", \"quad_error\": " << json_number(e.quad_error)
          << ", \"error\": " << (e.error ? json_string(*e.error) : "null") << "}";
    }
    out << (r.entries.empty() ? "]}" : "\n    ]}");
  }
  out << (reports.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

void emit(const std::vector<QslReport>& reports, Format format, const std::filesystem::path& path) {
  auto write = [&](std::ostream& os) {
    if (format == Format::kCsv) {
      write_csv(reports, os);
    } else {
      write_json(reports, os);
    }
  };
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  write(out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

std::vector<QslReport> read_json_reports(std::string_view text) {
  const auto doc = nlohmann::json::parse(text.begin(), text.end());
  std::vector<QslReport> out;
  for (const auto& r : doc.at("reports")) {
    QslReport report;
    report.scenario_id = r.at("scenario_id").get<std::string>();
    report.tau = read_number(r.at("tau"));
    for (const auto& e : r.at("entries")) {
      BoundEntry entry;
      entry.name = e.at("name").get<std::string>();
      entry.alpha = read_order(e.at("alpha"));
      entry.beta = read_order(e.at("beta"));
      entry.value = read_number(e.at("value"));
      entry.ratio = read_number(e.at("ratio"));
      entry.degenerate = e.at("degenerate").get<bool>();
      entry.frozen = e.at("frozen").get<bool>();
      entry.finite_difference = e.at("finite_difference").get<bool>();
      entry.nodes = e.at("nodes").get<std::size_t>();
      entry.quad_error = read_number(e.at("quad_error"));
      if (!e.at("error").is_null()) entry.error = e.at("error").get<std::string>();
      report.entries.push_back(std::move(entry));
    }
    out.push_back(std::move(report));
  }
  return out;
}

}  // namespace qsl::harness
