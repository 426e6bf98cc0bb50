#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tristmf {

/// One accepted-update sample: wall-clock offset from fit start and the
/// objective value after the update.  phase distinguishes the two halves of
/// the consecutive strategies; single-phase methods use 1 throughout.
struct TracePoint {
  double elapsed_seconds = 0.0;
  double b_norm = 0.0;
  int phase = 1;
};

struct MetricsRecord {
  std::string method;
  std::string dataset;
  std::uint64_t seed = 0;
  double rmse_a = std::numeric_limits<double>::quiet_NaN();
  double rmse_p = std::numeric_limits<double>::quiet_NaN();
  std::vector<TracePoint> trace;
  double final_b_norm = std::numeric_limits<double>::quiet_NaN();
  double elapsed_seconds = 0.0;
  bool rank_exceeds_dim = false;
  std::optional<std::array<std::size_t, 4>> partition_sizes;  // m, r1, r2, n
  std::optional<double> mu_percent;
  std::optional<double> rand_score;
  std::map<std::string, double> extra;  // method-specific counters
};

}  // namespace tristmf
