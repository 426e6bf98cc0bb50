#include "tristmf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tristmf {

double rmse(const MaskedMatrix& pred, const MaskedMatrix& truth,
            const EntrySet& entries) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols())
    throw std::invalid_argument("rmse: shapes disagree");
  if (entries.empty()) throw std::invalid_argument("rmse: empty entry set");
  double sum = 0.0;
  for (const auto& [i, j] : entries) {
    if (!truth.observed(i, j))
      throw std::invalid_argument("rmse: entry not observed in truth");
    if (pred.at(i, j) == truth.at(i, j)) continue;  // matching -inf included
    const double d = pred.at(i, j) - truth.at(i, j);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(entries.size()));
}

double rmse_observed(const MaskedMatrix& pred, const MaskedMatrix& truth) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols())
    throw std::invalid_argument("rmse_observed: shapes disagree");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < truth.rows(); ++i)
    for (std::size_t j = 0; j < truth.cols(); ++j) {
      if (!truth.observed(i, j) || !pred.observed(i, j)) continue;
      ++count;
      if (pred.at(i, j) == truth.at(i, j)) continue;
      const double d = pred.at(i, j) - truth.at(i, j);
      sum += d * d;
    }
  if (count == 0) throw std::invalid_argument("rmse_observed: no overlap");
  return std::sqrt(sum / static_cast<double>(count));
}

double rand_score(const std::vector<int>& labels_a,
                  const std::vector<int>& labels_b) {
  if (labels_a.size() != labels_b.size())
    throw std::invalid_argument("rand_score: label counts disagree");
  const std::size_t n = labels_a.size();
  if (n < 2) return 1.0;
  std::size_t agree = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool same_a = labels_a[i] == labels_a[j];
      const bool same_b = labels_b[i] == labels_b[j];
      if (same_a == same_b) ++agree;
      ++total;
    }
  return static_cast<double>(agree) / static_cast<double>(total);
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median: empty");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return (xs[(n - 1) / 2] + xs[n / 2]) / 2.0;
}

Quartiles quartiles(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("quartiles: empty");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  Quartiles q;
  q.median = (xs[(n - 1) / 2] + xs[n / 2]) / 2.0;
  const std::size_t half = n / 2;
  if (half == 0) {
    q.q1 = q.q3 = q.median;
    return q;
  }
  const std::vector<double> lower(xs.begin(), xs.begin() + half);
  const std::vector<double> upper(xs.end() - half, xs.end());
  q.q1 = (lower[(half - 1) / 2] + lower[half / 2]) / 2.0;
  q.q3 = (upper[(half - 1) / 2] + upper[half / 2]) / 2.0;
  return q;
}

}  // namespace tristmf
