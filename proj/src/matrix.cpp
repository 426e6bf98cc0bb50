#include "tristmf/matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace tristmf {

MaskedMatrix MaskedMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  MaskedMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("ragged initializer");
    std::size_t j = 0;
    for (double v : row) m.at(i, j++) = v;
    ++i;
  }
  return m;
}

MaskedMatrix MaskedMatrix::maxplus_identity(std::size_t n) {
  MaskedMatrix m(n, n, kNegInf);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 0.0;
  return m;
}

MaskedMatrix MaskedMatrix::minplus_identity(std::size_t n) {
  MaskedMatrix m(n, n, kPosInf);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 0.0;
  return m;
}

bool MaskedMatrix::fully_observed() const {
  return std::all_of(mask_.begin(), mask_.end(),
                     [](std::uint8_t b) { return b != 0; });
}

std::size_t MaskedMatrix::observed_count() const {
  return static_cast<std::size_t>(
      std::count_if(mask_.begin(), mask_.end(),
                    [](std::uint8_t b) { return b != 0; }));
}

MaskedMatrix MaskedMatrix::transposed() const {
  MaskedMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      t.set(j, i, at(i, j), observed(i, j));
  return t;
}

}  // namespace tristmf
