#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tristmf/matrix.hpp"

// Evaluation metrics: RMSE over an explicit entry set, RMSE over observed
// entries, Rand score between partitions (as label vectors), and the
// sort-based quartile summary used in reports.

namespace tristmf {

using EntrySet = std::vector<std::pair<std::size_t, std::size_t>>;

/// sqrt(mean over the entry set of (pred - truth)^2).  Every entry must be
/// observed in truth.
double rmse(const MaskedMatrix& pred, const MaskedMatrix& truth,
            const EntrySet& entries);

/// RMSE over all entries observed in both matrices.
double rmse_observed(const MaskedMatrix& pred, const MaskedMatrix& truth);

/// Fraction of unordered element pairs on which two labelings agree
/// (same cluster in both, or different in both).
double rand_score(const std::vector<int>& labels_a,
                  const std::vector<int>& labels_b);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Tukey hinges: median of the lower/upper half, the middle element excluded
/// from both halves when the count is odd.
Quartiles quartiles(std::vector<double> xs);

double median(std::vector<double> xs);

}  // namespace tristmf
