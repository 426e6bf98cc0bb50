#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "tristmf/baselines.hpp"
#include "tristmf/network.hpp"

// The seeded experiment runner: (method × repetition) fits under a wall-clock
// budget, metric computation on disjoint train/held-out entry sets, and
// persistence as per-run JSON plus a flat CSV summary.  Runs are independent
// and may execute on several threads; results are identical for any job
// count.

namespace tristmf {

enum class DatasetKind {
  kSyntheticMatrix,
  kMatrixFile,
  kSyntheticNetwork,
  kNetworkFile
};

struct DatasetSpec {
  DatasetKind kind = DatasetKind::kSyntheticMatrix;
  std::string name = "synthetic-matrix";
  std::uint64_t dataset_seed = 1;

  // synthetic matrix: tropical product of uniform [0,10) factors
  std::size_t rows = 200;
  std::size_t cols = 100;
  std::size_t gen_r1 = 25;
  std::size_t gen_r2 = 20;

  std::string path;  // matrix-file / network-file input

  // synthetic network sizes (m, r1, r2, n)
  std::array<std::size_t, 4> sizes{45, 10, 15, 30};

  /// Matrix modes: fraction of observed entries held out per run.
  /// Network modes: max missing-edge fraction of the per-run edge sample.
  double holdout_fraction = 0.0;

  /// Network modes: true | random | partial | louvain.
  std::string partition_strategy = "true";
  std::vector<double> gamma_grid{0.6, 0.8, 1.0, 1.2, 1.5, 2.0};
  double mu_threshold_percent = 70.0;

  int day_from = 0;  // network-file: day range; 0/0 keeps every record
  int day_to = 0;
  bool mask_zeros = false;  // real-data pipeline: mask 0-valued R entries
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<std::string> methods{"triFastSTMF"};
  DatasetSpec dataset;
  std::size_t r1 = 2;
  std::size_t r2 = 2;
  double budget_seconds = 10.0;
  std::size_t repetitions = 1;
  std::uint64_t base_seed = 0;
  InitStrategy init = InitStrategy::kRandomAcol;
  double rel_improvement_eps = 1e-6;
  double phase_rel_eps = 1e-2;
  std::size_t acol_sample_count = 5;
  std::size_t jobs = 1;
  std::string out_dir = "results";
  bool persist = true;
};

ExperimentConfig experiment_from_json(const nlohmann::json& j);
nlohmann::json experiment_to_json(const ExperimentConfig& config);

const std::vector<std::string>& known_methods();

/// Dispatches one method name onto a matrix.  Two-factor results are embedded
/// in the tri-factor schema with a tropical-identity middle factor.
FitResult run_method(const std::string& method, const MaskedMatrix& r,
                     std::size_t r1, std::size_t r2, const FitConfig& config);

std::vector<MetricsRecord> run_experiment(const ExperimentConfig& config);

/// Fixed columns: method, dataset, seed, m, r1, r2, n, mu, rmse_a, rmse_p,
/// final_bnorm, elapsed.
std::string summary_csv(const std::vector<MetricsRecord>& records,
                        std::size_t r1, std::size_t r2);

std::uint64_t run_seed(std::uint64_t base_seed, const std::string& method,
                       std::size_t repetition);

}  // namespace tristmf
