#pragma once

#include <string>
#include <variant>
#include <vector>

namespace supremal {

/// Locale-independent CSV writer ('.' decimal, '\n' line endings, shortest
/// round-trip doubles). Rerunning with identical data gives identical bytes.
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::string>;

  CsvWriter(std::string path, std::vector<std::string> header);
  void row(const std::vector<Cell>& cells);
  void close();
  ~CsvWriter();

  static std::string format_double(double v);

 private:
  std::string path_;
  std::string buf_;
  bool closed_ = false;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);

}  // namespace supremal
