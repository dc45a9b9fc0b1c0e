#include "emden/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "emden/errors.hpp"

namespace emden {

std::string format_double(double x) {
  if (std::isnan(x)) {
    return "nan";
  }
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()), path_(path) {
  if (!out_) {
    fail(ErrorCode::IoError, "cannot write " + path.string());
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    out_ << (i ? "," : "") << header[i];
  }
  out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) {
    fail(ErrorCode::IoError, "row width does not match the header of " + path_.string());
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) {
      out_ << ',';
    }
    out_ << format_double(values[i]);
  }
  out_ << '\n';
}

void CsvWriter::row_text(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    fail(ErrorCode::IoError, "row width does not match the header of " + path_.string());
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out_ << (i ? "," : "") << cells[i];
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (out_.fail()) {
    fail(ErrorCode::IoError, "failed writing " + path_.string());
  }
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      return i;
    }
  }
  fail(ErrorCode::IoError, "missing column " + name);
}

namespace {

double parse_cell(const std::string& cell, const std::string& where) {
  if (cell == "nan") {
    return std::nan("");
  }
  if (cell == "inf") {
    return INFINITY;
  }
  if (cell == "-inf") {
    return -INFINITY;
  }
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    fail(ErrorCode::IoError, "bad number '" + cell + "' at " + where);
  }
  return v;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::IoError, "cannot open " + path.string());
  }
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) {
    fail(ErrorCode::IoError, path.string() + " is empty");
  }
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      table.header.push_back(cell);
    }
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    while (std::getline(ss, cell, ',')) {
      row.push_back(parse_cell(cell, where));
    }
    if (row.size() != table.header.size()) {
      fail(ErrorCode::IoError, "wrong number of columns at " + where);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace emden
