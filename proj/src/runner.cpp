#include "tristmf/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tristmf/eval.hpp"
#include "tristmf/io.hpp"
#include "tristmf/matrix_io.hpp"
#include "tristmf/ops.hpp"

namespace tristmf {

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

MaskedMatrix synth_tropical_matrix(std::size_t rows, std::size_t cols,
                                   std::size_t gen_r1, std::size_t gen_r2,
                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> weight(0.0, 10.0);
  const auto fill = [&](std::size_t r, std::size_t c) {
    MaskedMatrix out(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) out.at(i, j) = weight(rng);
    return out;
  };
  const MaskedMatrix a = fill(rows, gen_r1);
  const MaskedMatrix b = fill(gen_r1, gen_r2);
  const MaskedMatrix c = fill(gen_r2, cols);
  return maxplus_matmul(a, maxplus_matmul(b, c));
}

struct MatrixRunData {
  MaskedMatrix train;
  MaskedMatrix truth;
  EntrySet held_out;
};

MatrixRunData matrix_run_data(const MaskedMatrix& full, double fraction,
                              std::mt19937_64& rng) {
  MatrixRunData data;
  data.truth = full;
  data.train = full;
  if (fraction <= 0.0) return data;

  EntrySet observed;
  for (std::size_t i = 0; i < full.rows(); ++i)
    for (std::size_t j = 0; j < full.cols(); ++j)
      if (full.observed(i, j)) observed.push_back({i, j});
  std::shuffle(observed.begin(), observed.end(), rng);
  const std::size_t held =
      static_cast<std::size_t>(std::floor(fraction * observed.size()));
  data.held_out.assign(observed.begin(), observed.begin() + held);
  for (const auto& [i, j] : data.held_out)
    data.train.set_observed(i, j, false);
  return data;
}

struct RunTask {
  std::string method;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
};

}  // namespace

std::uint64_t run_seed(std::uint64_t base_seed, const std::string& method,
                       std::size_t repetition) {
  return derive_seed(base_seed ^ fnv1a(method), repetition);
}

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> methods{
      "triFastSTMF",   "FastSTMF",        "lrConsecutive",
      "rlConsecutive", "triSTMF-BothTD",  "triSTMF-RandomTD"};
  return methods;
}

FitResult run_method(const std::string& method, const MaskedMatrix& r,
                     std::size_t r1, std::size_t r2, const FitConfig& config) {
  if (method == "triFastSTMF") return tri_fast_stmf(r, r1, r2, config);
  if (method == "lrConsecutive") return lr_consecutive(r, r1, r2, config);
  if (method == "rlConsecutive") return rl_consecutive(r, r1, r2, config);
  if (method == "triSTMF-BothTD")
    return tri_stmf(r, r1, r2, config, TriStmfMode::kBothTd);
  if (method == "triSTMF-RandomTD")
    return tri_stmf(r, r1, r2, config, TriStmfMode::kRandomTd);
  if (method == "FastSTMF") {
    if (r1 != r2 && config.init == InitStrategy::kFixed)
      throw std::invalid_argument("FastSTMF with fixed init needs r1 == r2");
    TwoFactorResult two = fast_stmf(r, r1, config);
    FitResult out;
    out.factors.g1 = two.factors.u;
    out.factors.s = MaskedMatrix::maxplus_identity(two.factors.r);
    out.factors.g2 = two.factors.v;
    out.factors.r1 = two.factors.r;
    out.factors.r2 = two.factors.r;
    out.record = std::move(two.record);
    return out;
  }
  throw std::invalid_argument("unknown method: " + method);
}

namespace {

MetricsRecord run_matrix_case(const ExperimentConfig& config,
                              const MaskedMatrix& full, const RunTask& task) {
  std::mt19937_64 rng(derive_seed(task.seed, 77));
  MatrixRunData data =
      matrix_run_data(full, config.dataset.holdout_fraction, rng);

  // train/held-out index sets must be disjoint
  for (const auto& [i, j] : data.held_out)
    if (data.train.observed(i, j))
      throw std::logic_error("run_experiment: train/held-out overlap");

  FitConfig fit;
  fit.budget_seconds = config.budget_seconds;
  fit.rel_improvement_eps = config.rel_improvement_eps;
  fit.phase_rel_eps = config.phase_rel_eps;
  fit.acol_sample_count = config.acol_sample_count;
  fit.seed = task.seed;
  fit.init = config.init;

  FitResult result =
      run_method(task.method, data.train, config.r1, config.r2, fit);
  result.record.method = task.method;
  result.record.dataset = config.dataset.name;
  result.record.partition_sizes = {data.train.rows(), config.r1, config.r2,
                                   data.train.cols()};
  if (!data.held_out.empty())
    result.record.rmse_p =
        rmse(result.factors.product(), data.truth, data.held_out);
  return result.record;
}

MetricsRecord run_network_case(const ExperimentConfig& config,
                               const SyntheticNetwork* synthetic,
                               const WeightedNetwork& base,
                               const RunTask& task) {
  std::mt19937_64 rng(derive_seed(task.seed, 78));

  std::vector<SampledNetwork> samples =
      config.dataset.holdout_fraction > 0.0
          ? sample_networks(base, 1, config.dataset.holdout_fraction, rng)
          : std::vector<SampledNetwork>{SampledNetwork{base, {}}};
  const WeightedNetwork& train_net = samples.front().network;
  const std::vector<Edge>& held_out = samples.front().held_out;
  for (const Edge& e : held_out)
    if (train_net.weight(e.u, e.v))
      throw std::logic_error("run_experiment: held-out edge in train set");

  const std::string& strategy = config.dataset.partition_strategy;
  FourPartition partition;
  if (strategy == "true") {
    if (!synthetic)
      throw std::invalid_argument("partition_strategy 'true' needs a "
                                  "synthetic network");
    partition = synthetic->truth;
  } else if (strategy == "random") {
    const std::array<std::size_t, 4> sizes =
        synthetic ? synthetic->truth.sizes() : config.dataset.sizes;
    partition = random_partition(base.node_ids(), sizes, rng);
  } else if (strategy == "partial") {
    if (!synthetic)
      throw std::invalid_argument("partition_strategy 'partial' needs a "
                                  "synthetic network");
    partition = partially_random_partition(
        synthetic->truth.x, synthetic->truth.z, base.node_ids(),
        synthetic->truth.y.size(), synthetic->truth.w.size(), rng);
  } else if (strategy == "louvain") {
    auto sel = louvain_four_partition(train_net, config.dataset.gamma_grid,
                                      config.dataset.mu_threshold_percent,
                                      rng);
    if (!sel)
      throw std::runtime_error(
          "louvain partitioning found no connected four-partition; widen "
          "the gamma grid");
    partition = sel->partition;
  } else {
    throw std::invalid_argument("unknown partition strategy: " + strategy);
  }

  BuildMatricesOptions options;
  options.mask_zeros = config.dataset.mask_zeros;
  BlockMatrices blocks = build_matrices(train_net, partition, rng, options);

  const std::size_t fit_r1 = partition.y.size();
  const std::size_t fit_r2 = partition.w.size();

  FitConfig fit;
  fit.budget_seconds = config.budget_seconds;
  fit.rel_improvement_eps = config.rel_improvement_eps;
  fit.phase_rel_eps = config.phase_rel_eps;
  fit.acol_sample_count = config.acol_sample_count;
  fit.seed = task.seed;
  fit.init = config.init;
  if (config.init == InitStrategy::kFixed)
    fit.fixed = FixedInit{blocks.g1, blocks.s, blocks.g2};

  FitResult result =
      run_method(task.method, blocks.r, fit_r1, fit_r2, fit);
  result.record.method = task.method;
  result.record.dataset = config.dataset.name;
  result.record.partition_sizes = partition.sizes();
  result.record.mu_percent = partition.mu_percent();
  if (synthetic)
    result.record.rand_score = [&] {
      std::vector<int> a, b;
      for (const NodeId id : base.node_ids()) {
        a.push_back(static_cast<int>(*partition.role_of(id)));
        b.push_back(static_cast<int>(*synthetic->truth.role_of(id)));
      }
      return rand_score(a, b);
    }();

  const WholeNetworkPrediction prediction =
      predict_whole_network(result.factors, partition);

  const auto edge_rmse = [&](const std::vector<Edge>& edges) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const Edge& e : edges) {
      const auto pred = prediction.lookup(partition, e.u, e.v);
      if (!pred) continue;  // same-role pair: no block covers it
      const double d = *pred - e.weight;
      sum += d * d;
      ++count;
    }
    return count == 0 ? std::numeric_limits<double>::quiet_NaN()
                      : std::sqrt(sum / static_cast<double>(count));
  };
  // the fit-level error on R stays available next to the whole-network one
  result.record.extra["rmse_a_r_block"] = result.record.rmse_a;
  result.record.rmse_a = edge_rmse(train_net.edges());
  if (!held_out.empty()) result.record.rmse_p = edge_rmse(held_out);
  return result.record;
}

}  // namespace

std::vector<MetricsRecord> run_experiment(const ExperimentConfig& config) {
  for (const std::string& method : config.methods)
    if (std::find(known_methods().begin(), known_methods().end(), method) ==
        known_methods().end())
      throw std::invalid_argument("unknown method: " + method);

  // materialise the dataset once; per-run sampling derives from run seeds
  MaskedMatrix full_matrix;
  std::optional<SyntheticNetwork> synthetic;
  std::optional<WeightedNetwork> network;
  switch (config.dataset.kind) {
    case DatasetKind::kSyntheticMatrix: {
      std::mt19937_64 rng(config.dataset.dataset_seed);
      full_matrix = synth_tropical_matrix(
          config.dataset.rows, config.dataset.cols, config.dataset.gen_r1,
          config.dataset.gen_r2, rng);
      break;
    }
    case DatasetKind::kMatrixFile:
      full_matrix = read_matrix_csv_file(config.dataset.path);
      break;
    case DatasetKind::kSyntheticNetwork: {
      std::mt19937_64 rng(config.dataset.dataset_seed);
      synthetic = gen_synthetic_tropical_network(
          config.dataset.sizes[0], config.dataset.sizes[1],
          config.dataset.sizes[2], config.dataset.sizes[3], rng);
      break;
    }
    case DatasetKind::kNetworkFile: {
      if (config.dataset.day_from != 0 || config.dataset.day_to != 0) {
        const auto table = ingest_interactions(config.dataset.path);
        network = day_group_network(table, config.dataset.day_from,
                                    config.dataset.day_to);
      } else {
        network = network_from_edge_list(config.dataset.path);
      }
      break;
    }
  }

  std::vector<RunTask> tasks;
  for (const std::string& method : config.methods)
    for (std::size_t rep = 0; rep < config.repetitions; ++rep)
      tasks.push_back(
          {method, rep, run_seed(config.base_seed, method, rep)});

  std::vector<MetricsRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  const auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      try {
        switch (config.dataset.kind) {
          case DatasetKind::kSyntheticMatrix:
          case DatasetKind::kMatrixFile:
            records[idx] = run_matrix_case(config, full_matrix, tasks[idx]);
            break;
          case DatasetKind::kSyntheticNetwork:
            records[idx] = run_network_case(config, &*synthetic,
                                            synthetic->network, tasks[idx]);
            break;
          case DatasetKind::kNetworkFile:
            records[idx] =
                run_network_case(config, nullptr, *network, tasks[idx]);
            break;
        }
        records[idx].seed = tasks[idx].seed;
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, config.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  if (config.persist) {
    namespace fs = std::filesystem;
    const fs::path base = fs::path(config.out_dir) / config.name;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const fs::path dir = base / tasks[i].method;
      fs::create_directories(dir);
      nlohmann::json echo = experiment_to_json(config);
      echo["run_seed"] = tasks[i].seed;
      echo["repetition"] = tasks[i].repetition;
      std::ofstream out(dir / (std::to_string(tasks[i].seed) + ".json"));
      if (!out) throw std::runtime_error("cannot write run record");
      out << nlohmann::json{{"config", echo},
                            {"metrics", record_to_json(records[i])}}
                 .dump(2)
          << '\n';
    }
    std::ofstream csv(base / "summary.csv");
    if (!csv) throw std::runtime_error("cannot write summary.csv");
    csv << summary_csv(records, config.r1, config.r2);
  }
  return records;
}

std::string summary_csv(const std::vector<MetricsRecord>& records,
                        std::size_t r1, std::size_t r2) {
  std::ostringstream out;
  out << "method,dataset,seed,m,r1,r2,n,mu,rmse_a,rmse_p,final_bnorm,"
         "elapsed\n";
  const auto num = [](double v) {
    return std::isnan(v) ? std::string() : format_double(v);
  };
  for (const MetricsRecord& rec : records) {
    std::array<std::size_t, 4> sizes{0, r1, r2, 0};
    if (rec.partition_sizes) sizes = *rec.partition_sizes;
    out << rec.method << ',' << rec.dataset << ',' << rec.seed << ','
        << sizes[0] << ',' << sizes[1] << ',' << sizes[2] << ',' << sizes[3]
        << ',' << (rec.mu_percent ? format_double(*rec.mu_percent) : "")
        << ',' << num(rec.rmse_a) << ',' << num(rec.rmse_p) << ','
        << num(rec.final_b_norm) << ',' << format_double(rec.elapsed_seconds)
        << '\n';
  }
  return out.str();
}

ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.name = j.value("experiment", c.name);
  if (j.contains("methods"))
    c.methods = j.at("methods").get<std::vector<std::string>>();
  c.r1 = j.value("r1", c.r1);
  c.r2 = j.value("r2", c.r2);
  c.budget_seconds = j.value("budget_seconds", c.budget_seconds);
  c.repetitions = j.value("repetitions", c.repetitions);
  c.base_seed = j.value("seed", c.base_seed);
  c.rel_improvement_eps = j.value("rel_improvement_eps",
                                  c.rel_improvement_eps);
  c.phase_rel_eps = j.value("phase_rel_eps", c.phase_rel_eps);
  c.acol_sample_count = j.value("acol_sample_count", c.acol_sample_count);
  c.jobs = j.value("jobs", c.jobs);
  c.out_dir = j.value("out_dir", c.out_dir);
  const std::string init = j.value("init", std::string("acol"));
  if (init == "acol")
    c.init = InitStrategy::kRandomAcol;
  else if (init == "fixed")
    c.init = InitStrategy::kFixed;
  else
    throw std::invalid_argument("config: init must be acol or fixed");

  if (j.contains("dataset")) {
    const nlohmann::json& d = j.at("dataset");
    DatasetSpec& ds = c.dataset;
    const std::string kind = d.value("type", std::string("synthetic-matrix"));
    if (kind == "synthetic-matrix")
      ds.kind = DatasetKind::kSyntheticMatrix;
    else if (kind == "matrix-csv")
      ds.kind = DatasetKind::kMatrixFile;
    else if (kind == "synthetic-network")
      ds.kind = DatasetKind::kSyntheticNetwork;
    else if (kind == "network-file")
      ds.kind = DatasetKind::kNetworkFile;
    else
      throw std::invalid_argument("config: unknown dataset type " + kind);
    ds.name = d.value("name", kind);
    ds.dataset_seed = d.value("dataset_seed", ds.dataset_seed);
    ds.rows = d.value("rows", ds.rows);
    ds.cols = d.value("cols", ds.cols);
    ds.gen_r1 = d.value("gen_r1", ds.gen_r1);
    ds.gen_r2 = d.value("gen_r2", ds.gen_r2);
    ds.path = d.value("path", ds.path);
    if (d.contains("sizes")) {
      const auto sizes = d.at("sizes").get<std::vector<std::size_t>>();
      if (sizes.size() != 4)
        throw std::invalid_argument("config: sizes must be m,r1,r2,n");
      std::copy(sizes.begin(), sizes.end(), ds.sizes.begin());
    }
    ds.holdout_fraction = d.value("holdout_fraction", ds.holdout_fraction);
    ds.partition_strategy =
        d.value("partition_strategy", ds.partition_strategy);
    if (d.contains("gamma_grid"))
      ds.gamma_grid = d.at("gamma_grid").get<std::vector<double>>();
    ds.mu_threshold_percent =
        d.value("mu_threshold_percent", ds.mu_threshold_percent);
    ds.day_from = d.value("day_from", ds.day_from);
    ds.day_to = d.value("day_to", ds.day_to);
    ds.mask_zeros = d.value("mask_zeros", ds.mask_zeros);
  }
  return c;
}

nlohmann::json experiment_to_json(const ExperimentConfig& c) {
  nlohmann::json d{{"type",
                    c.dataset.kind == DatasetKind::kSyntheticMatrix
                        ? "synthetic-matrix"
                        : c.dataset.kind == DatasetKind::kMatrixFile
                              ? "matrix-csv"
                              : c.dataset.kind == DatasetKind::kSyntheticNetwork
                                    ? "synthetic-network"
                                    : "network-file"},
                   {"name", c.dataset.name},
                   {"dataset_seed", c.dataset.dataset_seed},
                   {"holdout_fraction", c.dataset.holdout_fraction}};
  switch (c.dataset.kind) {
    case DatasetKind::kSyntheticMatrix:
      d["rows"] = c.dataset.rows;
      d["cols"] = c.dataset.cols;
      d["gen_r1"] = c.dataset.gen_r1;
      d["gen_r2"] = c.dataset.gen_r2;
      break;
    case DatasetKind::kMatrixFile:
      d["path"] = c.dataset.path;
      break;
    case DatasetKind::kSyntheticNetwork:
      d["sizes"] = c.dataset.sizes;
      d["partition_strategy"] = c.dataset.partition_strategy;
      break;
    case DatasetKind::kNetworkFile:
      d["path"] = c.dataset.path;
      d["partition_strategy"] = c.dataset.partition_strategy;
      d["gamma_grid"] = c.dataset.gamma_grid;
      d["mu_threshold_percent"] = c.dataset.mu_threshold_percent;
      d["day_from"] = c.dataset.day_from;
      d["day_to"] = c.dataset.day_to;
      d["mask_zeros"] = c.dataset.mask_zeros;
      break;
  }
  return nlohmann::json{{"experiment", c.name},
                        {"methods", c.methods},
                        {"dataset", d},
                        {"r1", c.r1},
                        {"r2", c.r2},
                        {"budget_seconds", c.budget_seconds},
                        {"repetitions", c.repetitions},
                        {"seed", c.base_seed},
                        {"init", c.init == InitStrategy::kRandomAcol
                                     ? "acol"
                                     : "fixed"},
                        {"rel_improvement_eps", c.rel_improvement_eps},
                        {"phase_rel_eps", c.phase_rel_eps},
                        {"acol_sample_count", c.acol_sample_count},
                        {"jobs", c.jobs},
                        {"out_dir", c.out_dir}};
}

}  // namespace tristmf
