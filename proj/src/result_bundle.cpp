// SPDX-License-Identifier: Apache-2.0
#include "emskin/result_bundle.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "emskin/errors.hpp"

namespace emskin {

using nlohmann::json;

void Table::add_row(std::vector<TableCell> row) {
  require(row.size() == columns.size(), "table '" + name + "' row width does not match its header");
  rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& column) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == column) return i;
  throw InvalidArgument("table '" + name + "' has no column '" + column + "'");
}

double Table::number(std::size_t row, const std::string& column) const {
  const TableCell& cell = rows.at(row).at(column_index(column));
  if (const double* v = std::get_if<double>(&cell)) return *v;
  throw InvalidArgument("table '" + name + "' column '" + column + "' is not numeric");
}

const Table& ResultBundle::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  throw InvalidArgument("bundle has no table '" + name + "'");
}

bool ResultBundle::has_table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return true;
  return false;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string csv_cell(const TableCell& cell) {
  if (const double* v = std::get_if<double>(&cell)) return format_number(*v);
  const std::string& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

json metadata_json(const BundleMetadata& m) {
  return {{"run_name", m.run_name}, {"config_hash", m.config_hash}, {"version", m.version},
          {"seed", m.seed},         {"wall_time_s", m.wall_time_s}, {"command", m.command},
          {"notes", m.notes}};
}

json cell_json(const TableCell& cell) {
  if (const double* v = std::get_if<double>(&cell)) {
    if (std::isfinite(*v)) return *v;
    return format_number(*v);
  }
  return std::get<std::string>(cell);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write output file: " + path.string());
  out << content;
  if (!out) throw IoError("failed writing output file: " + path.string());
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

json bundle_to_json(const ResultBundle& bundle) {
  json tables = json::object();
  for (const auto& t : bundle.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json r = json::array();
      for (const auto& cell : row) r.push_back(cell_json(cell));
      rows.push_back(r);
    }
    tables[t.name] = {{"columns", t.columns}, {"rows", rows}};
  }
  return {{"metadata", metadata_json(bundle.metadata)}, {"tables", tables}};
}

std::vector<std::filesystem::path> emit(const ResultBundle& bundle, const std::filesystem::path& dir,
                                        OutputFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory: " + dir.string());
  const std::string prefix = bundle.metadata.run_name + "__";
  std::vector<std::filesystem::path> written;
  if (format == OutputFormat::json) {
    const auto path = dir / (prefix + "bundle.json");
    write_file(path, bundle_to_json(bundle).dump(2) + "\n");
    written.push_back(path);
    return written;
  }
  for (const auto& t : bundle.tables) {
    std::string text;
    for (std::size_t i = 0; i < t.columns.size(); ++i) text += (i ? "," : "") + t.columns[i];
    text += '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) text += ',';
        text += csv_cell(row[i]);
      }
      text += '\n';
    }
    const auto path = dir / (prefix + t.name + ".csv");
    write_file(path, text);
    written.push_back(path);
  }
  const auto meta = dir / (prefix + "metadata.json");
  write_file(meta, metadata_json(bundle.metadata).dump(2) + "\n");
  written.push_back(meta);
  return written;
}

Table read_table_csv_file(const std::filesystem::path& path, const std::string& name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read table: " + path.string());
  Table t;
  t.name = name;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty table file: " + path.string());
  t.columns = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<TableCell> row;
    for (const auto& cell : split_csv_line(line)) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (!cell.empty() && *end == '\0') row.emplace_back(v);
      else row.emplace_back(cell);
    }
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace emskin
