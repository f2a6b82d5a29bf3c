#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qsl/bounds.hpp"

namespace qsl::harness {

enum class Format { kCsv, kJson };

/// "csv" or "json"; throws kInvalidInput otherwise.
Format parse_format(std::string_view name);

inline constexpr std::string_view kCsvHeader =
    "scenario_id,bound_name,alpha,beta,tau,value,ratio,degenerate,quad_error";

/// %.17g; "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double x);
/// "inf" for the operator norm, 17 significant digits otherwise.
std::string format_order(const matnum::SchattenOrder& order);

void write_csv(const std::vector<bounds::QslReport>& reports, std::ostream& out);
/// {"reports": [{"scenario_id", "tau", "entries": [...]}]}; non-finite numbers are null.
void write_json(const std::vector<bounds::QslReport>& reports, std::ostream& out);

/// Writes to `path`, or to stdout when path is "-". Throws kIo with the path.
void emit(const std::vector<bounds::QslReport>& reports, Format format,
          const std::filesystem::path& path);

/// Inverse of write_json.
std::vector<bounds::QslReport> read_json_reports(std::string_view text);

}  // namespace qsl::harness
