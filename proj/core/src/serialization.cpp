#include "dinglab/serialization.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include "dinglab/jet.hpp"

namespace dinglab {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m, int k) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      data.push_back({m(r, c).real(), m(r, c).imag()});
  return {{"k", k},
          {"n", 1},
          {"basis", "monomial-north"},
          {"rows", m.rows()},
          {"cols", m.cols()},
          {"data", std::move(data)}};
}

Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j, int* k_out) {
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw std::invalid_argument("matrix_from_json: data size mismatch");
  Eigen::MatrixXcd m(rows, cols);
  Eigen::Index i = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c, ++i)
      m(r, c) = Complex{data[i][0].get<double>(), data[i][1].get<double>()};
  if (k_out) *k_out = j.at("k").get<int>();
  return m;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  rows_.push_back(std::move(header));
}

namespace {

std::string escape_cell(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void CsvWriter::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_)
    throw std::invalid_argument("CsvWriter: row width does not match header");
  rows_.push_back(std::move(cells));
}

std::string CsvWriter::str() const {
  std::string out;
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += escape_cell(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("CsvWriter: cannot open " + path);
  f << str();
}

}  // namespace dinglab
