#include "gelato/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace gelato {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_field(std::string_view field, double& value) {
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  return ec == std::errc() && ptr == end && std::isfinite(value);
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) numeric = numeric && parse_field(fields[k], row[k]);
    if (!numeric && rows.empty() && table.header.empty()) {
      for (auto f : fields) table.header.emplace_back(f);
      width = fields.size();
      continue;
    }
    if (!numeric) {
      throw Error(ErrorKind::parse_error,
                  "line " + std::to_string(line_no) + ": non-numeric or missing value", line_no);
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw Error(ErrorKind::parse_error,
                  "line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                      " fields, found " + std::to_string(fields.size()),
                  line_no);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::parse_error, "no data rows", line_no);
  table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      table.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse_error, "cannot open '" + path + "'");
  return read_csv(in);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void write_csv(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw Error(ErrorKind::parse_error, "matrix must be a nonempty array of rows");
  }
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j.front().size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw Error(ErrorKind::parse_error, "ragged matrix row", r);
    }
    for (Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

nlohmann::json edges_to_json(const EdgeSet& e) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [i, j] : e.edges()) out.push_back({i, j});
  return out;
}

nlohmann::json to_json(const ModelSpec& spec) {
  return {{"family", to_string(spec.family)}, {"p", spec.p},
          {"block_size", spec.block_size},    {"rho", spec.rho},
          {"pi", spec.pi},                    {"entry_value", spec.entry_value},
          {"seed", spec.seed}};
}

ModelSpec model_spec_from_json(const nlohmann::json& j) {
  try {
    ModelSpec spec;
    spec.family = parse_model_family(j.at("family").get<std::string>());
    spec.p = j.at("p").get<Index>();
    spec.block_size = j.value("block_size", Index{0});
    spec.rho = j.value("rho", 0.9);
    spec.pi = j.value("pi", 0.1);
    spec.entry_value = j.value("entry_value", 0.5);
    spec.seed = j.value("seed", std::uint64_t{0});
    validate(spec);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::config_error, std::string("model spec: ") + e.what());
  }
}

nlohmann::json to_json(const SparsityReport& report) {
  return {{"per_node", report.per_node},
          {"total", report.total},
          {"lambda_used", report.lambda_used},
          {"node_degrees", report.node_degrees},
          {"max_degree", report.max_degree}};
}

}  // namespace gelato
