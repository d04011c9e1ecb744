#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dbird/dataset.hpp"

namespace dbird::io {

namespace fs = std::filesystem;

/// Comma-separated table with a header row. No quoting.
struct CsvTable {
  std::string name;  // file name used in error messages
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row

  /// Column position; throws Schema if absent.
  std::size_t column(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const;
  /// "file:line: message" for row r.
  std::string where(std::size_t r) const;
};

CsvTable read_csv(const fs::path& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

double parse_double(std::string_view text, const CsvTable& table, std::size_t row);
std::size_t parse_index(std::string_view text, const CsvTable& table, std::size_t row);

/// Days since 1970-01-01 for an ISO YYYY-MM-DD date, or nullopt.
std::optional<long> parse_iso_date(std::string_view text);

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const fs::path& path, std::string_view content);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const fs::path& path);

/// A dataset with its external string identifiers (index order).
struct LabeledDataset {
  ResponseDataset data;
  std::vector<std::string> student_ids;
  std::vector<std::string> item_ids;
  /// Values of ReadOptions::group_column, aligned with data.observations.
  std::vector<std::string> group_labels;

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

/// Attaches generated identifiers "s<i>" and "q<j>".
LabeledDataset label_dataset(ResponseDataset data);

struct ReadOptions {
  /// Overrides the number of time points.
  std::optional<std::size_t> n_times;
  /// Interpret the time column as ISO dates binned into weeks from the earliest date.
  bool bin_weeks = false;
  /// Extra responses.csv column to carry along as group labels.
  std::optional<std::string> group_column;
};

/// Reads responses.csv and items.csv (and dataset.json when present) from a
/// directory and returns a validated dataset. Throws Schema with
/// line-numbered messages.
LabeledDataset read_dataset(const fs::path& dir, const ReadOptions& options = {});

/// Writes responses.csv, items.csv and dataset.json; returns the file names.
std::vector<std::string> write_dataset(const fs::path& dir, const LabeledDataset& dataset);

}  // namespace dbird::io
