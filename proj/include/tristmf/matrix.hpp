#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "tristmf/tropical.hpp"

namespace tristmf {

// Dense row-major matrix of extended reals with a per-entry observed flag.
// -inf is a legitimate value (the tropical zero); "missing" is purely a mask
// state.  Factor matrices are fully observed; data matrices may be masked.
class MaskedMatrix {
 public:
  MaskedMatrix() = default;
  MaskedMatrix(std::size_t rows, std::size_t cols, double fill = 0.0,
               bool observed = true)
      : rows_(rows),
        cols_(cols),
        values_(rows * cols, fill),
        mask_(rows * cols, observed ? 1 : 0) {}

  static MaskedMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);

  /// 0 on the diagonal, -inf elsewhere: the ⊗ identity.
  static MaskedMatrix maxplus_identity(std::size_t n);
  /// 0 on the diagonal, +inf elsewhere: the ⊗* identity.
  static MaskedMatrix minplus_identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double at(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }
  double& at(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

  bool observed(std::size_t i, std::size_t j) const {
    return mask_[i * cols_ + j] != 0;
  }
  void set_observed(std::size_t i, std::size_t j, bool obs) {
    mask_[i * cols_ + j] = obs ? 1 : 0;
  }
  void set(std::size_t i, std::size_t j, double v, bool obs = true) {
    values_[i * cols_ + j] = v;
    mask_[i * cols_ + j] = obs ? 1 : 0;
  }

  bool fully_observed() const;
  std::size_t observed_count() const;

  MaskedMatrix transposed() const;

  const double* row_values(std::size_t i) const {
    return values_.data() + i * cols_;
  }
  double* row_values(std::size_t i) { return values_.data() + i * cols_; }
  const std::uint8_t* row_mask(std::size_t i) const {
    return mask_.data() + i * cols_;
  }

  const std::vector<double>& values() const { return values_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  bool operator==(const MaskedMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;
};

}  // namespace tristmf
