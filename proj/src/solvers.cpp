#include "tristmf/solvers.hpp"

#include <cmath>
#include <stdexcept>

#include "tristmf/ops.hpp"

namespace tristmf {

MaskedMatrix greatest_subsolution_left(const MaskedMatrix& a,
                                       const MaskedMatrix& c) {
  if (a.rows() != c.rows())
    throw std::invalid_argument("greatest_subsolution_left: A and C rows");
  if (!a.fully_observed())
    throw std::invalid_argument("greatest_subsolution_left: A masked");
  return minplus_matmul(neg_transpose(a), c);
}

MaskedMatrix greatest_subsolution_right(const MaskedMatrix& b,
                                        const MaskedMatrix& c) {
  if (b.cols() != c.cols())
    throw std::invalid_argument("greatest_subsolution_right: B and C cols");
  if (!b.fully_observed())
    throw std::invalid_argument("greatest_subsolution_right: B masked");
  return minplus_matmul(c, neg_transpose(b));
}

MaskedMatrix greatest_subsolution_sandwich(const MaskedMatrix& a,
                                           const MaskedMatrix& b,
                                           const MaskedMatrix& c) {
  if (a.rows() != c.rows() || b.cols() != c.cols())
    throw std::invalid_argument("greatest_subsolution_sandwich: shapes");
  if (!a.fully_observed() || !b.fully_observed())
    throw std::invalid_argument("greatest_subsolution_sandwich: A/B masked");
  // (min,+) products associate, so the grouping is free.
  return minplus_matmul(minplus_matmul(neg_transpose(a), c),
                        neg_transpose(b));
}

void cap_non_finite(MaskedMatrix& m, const MaskedMatrix* fallback,
                    double fallback_value) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double& v = m.at(i, j);
      if (v == kPosInf || std::isnan(v))
        v = fallback ? fallback->at(i, j) : fallback_value;
    }
}

}  // namespace tristmf
