#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "json.hpp"

namespace dinglab {

/// Shortest decimal form of a double that parses back to the same value.
std::string format_double(double v);

/// Matrix as JSON: {k, n: 1, basis: "monomial-north", rows, data} with data
/// a row-major array of [re, im] pairs.
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m, int k);

Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j, int* k_out = nullptr);

/// RFC-4180 CSV writer: comma separator, "." decimal point, CRLF line ends,
/// quoting only where required. Numeric cells use format_double.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::string str() const;
  void write(const std::string& path) const;

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::string v) { return v; }

 private:
  std::size_t columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace dinglab
