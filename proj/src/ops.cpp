#include "tristmf/ops.hpp"

#include <cmath>
#include <stdexcept>

namespace tristmf {

namespace {

void check_inner(const MaskedMatrix& a, const MaskedMatrix& b,
                 const char* what) {
  if (a.cols() != b.rows()) throw std::invalid_argument(what);
}

void check_shape(const MaskedMatrix& a, const MaskedMatrix& b,
                 const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(what);
}

}  // namespace

MaskedMatrix maxplus_matmul(const MaskedMatrix& a, const MaskedMatrix& b) {
  check_inner(a, b, "maxplus_matmul: inner dimensions disagree");
  const std::size_t m = a.rows(), p = a.cols(), n = b.cols();
  MaskedMatrix out(m, n, kNegInf);
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a.row_values(i);
    double* orow = out.row_values(i);
    for (std::size_t k = 0; k < p; ++k) {
      const double aik = arow[k];
      if (aik == kNegInf) continue;
      const double* brow = b.row_values(k);
      for (std::size_t j = 0; j < n; ++j) {
        const double v = trop_mul(aik, brow[j]);
        if (v > orow[j]) orow[j] = v;
      }
    }
  }
  return out;
}

MaskedMatrix minplus_matmul(const MaskedMatrix& a, const MaskedMatrix& b) {
  check_inner(a, b, "minplus_matmul: inner dimensions disagree");
  const std::size_t m = a.rows(), p = a.cols(), n = b.cols();
  MaskedMatrix out(m, n, kPosInf);
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a.row_values(i);
    const std::uint8_t* amask = a.row_mask(i);
    double* orow = out.row_values(i);
    for (std::size_t k = 0; k < p; ++k) {
      if (!amask[k]) continue;
      const double aik = arow[k];
      if (aik == kPosInf) continue;
      const double* brow = b.row_values(k);
      const std::uint8_t* bmask = b.row_mask(k);
      for (std::size_t j = 0; j < n; ++j) {
        if (!bmask[j]) continue;
        const double v = minplus_mul(aik, brow[j]);
        if (v < orow[j]) orow[j] = v;
      }
    }
  }
  return out;
}

MaskedMatrix neg_transpose(const MaskedMatrix& a) {
  MaskedMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t.at(j, i) = -a.at(i, j);
  return t;
}

bool matrix_leq(const MaskedMatrix& a, const MaskedMatrix& b) {
  check_shape(a, b, "matrix_leq: shapes disagree");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!a.observed(i, j) || !b.observed(i, j)) continue;
      if (!(a.at(i, j) <= b.at(i, j))) return false;
    }
  return true;
}

double b_norm(const MaskedMatrix& a, const MaskedMatrix& b) {
  check_shape(a, b, "b_norm: shapes disagree");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!a.observed(i, j) || !b.observed(i, j)) continue;
      const double x = a.at(i, j), y = b.at(i, j);
      if (x == y) continue;  // covers matching -inf, where x - y is NaN
      sum += std::abs(x - y);
    }
  return sum;
}

double b_norm(const MaskedMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a.observed(i, j)) sum += std::abs(a.at(i, j));
  return sum;
}

double residual_b_norm(const MaskedMatrix& r, const MaskedMatrix& u,
                       const MaskedMatrix& v) {
  if (u.cols() != v.rows() || r.rows() != u.rows() || r.cols() != v.cols())
    throw std::invalid_argument("residual_b_norm: shapes disagree");
  const std::size_t m = r.rows(), p = u.cols(), n = r.cols();
  std::vector<double> prow(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(prow.begin(), prow.end(), kNegInf);
    const double* urow = u.row_values(i);
    for (std::size_t k = 0; k < p; ++k) {
      const double uik = urow[k];
      if (uik == kNegInf) continue;
      const double* vrow = v.row_values(k);
      for (std::size_t j = 0; j < n; ++j) {
        const double val = trop_mul(uik, vrow[j]);
        if (val > prow[j]) prow[j] = val;
      }
    }
    const double* rrow = r.row_values(i);
    const std::uint8_t* rmask = r.row_mask(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (!rmask[j] || rrow[j] == prow[j]) continue;
      sum += std::abs(rrow[j] - prow[j]);
    }
  }
  return sum;
}

}  // namespace tristmf
