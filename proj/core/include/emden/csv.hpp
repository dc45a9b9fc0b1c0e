#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace emden {

/// Shortest decimal that round-trips; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double x);

/// Comma-separated writer with a header line. Values are written with
/// format_double, so identical inputs give byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(std::span<const double> values);
  void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }
  /// Pre-formatted cells, for tables with text columns.
  void row_text(const std::vector<std::string>& cells);
  void close();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::filesystem::path path_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// IoError if the column is missing.
  std::size_t column(const std::string& name) const;
};

/// Reads files written by CsvWriter. IoError on malformed lines.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace emden
