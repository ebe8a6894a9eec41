#include "supremal/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace supremal {

std::string CsvWriter::format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::string path, std::vector<std::string> header) : path_(std::move(path)) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += header[i];
  }
  buf_ += '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) buf_ += ',';
    if (std::holds_alternative<double>(cells[i])) {
      buf_ += format_double(std::get<double>(cells[i]));
    } else if (std::holds_alternative<long long>(cells[i])) {
      buf_ += std::to_string(std::get<long long>(cells[i]));
    } else {
      buf_ += std::get<std::string>(cells[i]);
    }
  }
  buf_ += '\n';
}

void CsvWriter::close() {
  if (closed_) return;
  closed_ = true;
  std::ofstream out(path_, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path_);
  out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (first) {
      while (std::getline(ss, cell, ',')) t.header.push_back(cell);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      if (cell == "inf") {
        row.push_back(std::numeric_limits<double>::infinity());
      } else if (cell == "-inf") {
        row.push_back(-std::numeric_limits<double>::infinity());
      } else if (cell == "nan") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        row.push_back(std::stod(cell));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace supremal
