// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace emskin {

using TableCell = std::variant<double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<TableCell>> rows;

  void add_row(std::vector<TableCell> row);
  double number(std::size_t row, const std::string& column) const;
  std::size_t column_index(const std::string& column) const;
};

struct BundleMetadata {
  std::string run_name;
  std::string config_hash;
  std::string version;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  std::string command;
  std::vector<std::string> notes;
};

struct ResultBundle {
  BundleMetadata metadata;
  std::vector<Table> tables;

  const Table& table(const std::string& name) const;
  bool has_table(const std::string& name) const;
};

enum class OutputFormat { csv, json };

/// CSV: one `<run>__<table>.csv` per table plus `<run>__metadata.json`, so the
/// CSV files carry no timing and stay byte-identical across runs.
/// JSON: a single `<run>__bundle.json`. Returns the paths written.
std::vector<std::filesystem::path> emit(const ResultBundle& bundle, const std::filesystem::path& dir,
                                        OutputFormat format);

nlohmann::json bundle_to_json(const ResultBundle& bundle);

/// %.17g formatting used in every CSV cell.
std::string format_number(double value);

/// Parses a CSV written by emit back into a Table (numbers where they parse).
Table read_table_csv_file(const std::filesystem::path& path, const std::string& name);

}  // namespace emskin
