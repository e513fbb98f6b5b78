#pragma once

// CSV ingestion and JSON encoding of matrices, edge sets and reports.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "gelato/core.hpp"
#include "gelato/diagnostics.hpp"
#include "gelato/mle.hpp"
#include "gelato/simulate.hpp"

namespace gelato {

inline constexpr int kSchemaVersion = 1;

struct CsvTable {
  Matrix values;
  /// Column names when the first row was a header, otherwise empty.
  std::vector<std::string> header;
};

/// Comma-separated numbers, '.' decimal point, one observation per row. A
/// first row containing a non-numeric field is taken as a header. Empty
/// fields, ragged rows and non-numeric cells throw parse_error carrying the
/// 1-based line number.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

void write_csv(std::ostream& out, const Matrix& m);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json edges_to_json(const EdgeSet& e);

nlohmann::json to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SparsityReport& report);

}  // namespace gelato
