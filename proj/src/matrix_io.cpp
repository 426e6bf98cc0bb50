#include "tristmf/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tristmf {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

struct Cell {
  double value = 0.0;
  bool observed = true;
};

Cell parse_cell(const std::string& field) {
  std::size_t a = field.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {0.0, false};
  std::size_t b = field.find_last_not_of(" \t\r");
  const std::string tok = field.substr(a, b - a + 1);
  if (tok == "-inf" || tok == "-Inf" || tok == "-INF") return {kNegInf, true};
  if (tok == "inf" || tok == "+inf" || tok == "Inf") return {kPosInf, true};
  if (tok == "NaN" || tok == "nan" || tok == "NAN") return {0.0, false};
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw std::runtime_error("matrix csv: bad field '" + tok + "'");
  return {v, true};
}

}  // namespace

MaskedMatrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<Cell>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::char_traits<char>::eof() &&
        rows.empty())
      break;
    if (line.find_first_not_of(" \t") == std::string::npos && rows.empty())
      continue;
    std::vector<Cell> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      row.push_back(parse_cell(line.substr(
          start, comma == std::string::npos ? std::string::npos
                                            : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("matrix csv: empty input");
  const std::size_t cols = rows.front().size();
  MaskedMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw std::runtime_error("matrix csv: ragged rows");
    for (std::size_t j = 0; j < cols; ++j)
      m.set(i, j, rows[i][j].value, rows[i][j].observed);
  }
  return m;
}

MaskedMatrix read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix csv: " + path);
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const MaskedMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      if (!m.observed(i, j)) continue;  // empty field
      const double v = m.at(i, j);
      if (v == kNegInf)
        out << "-inf";
      else if (v == kPosInf)
        out << "inf";
      else if (std::isnan(v))
        out << "NaN";
      else
        out << format_double(v);
    }
    out << '\n';
  }
}

void write_matrix_csv_file(const std::string& path, const MaskedMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix csv: " + path);
  write_matrix_csv(out, m);
}

}  // namespace tristmf
