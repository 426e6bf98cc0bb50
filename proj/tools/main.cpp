#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tristmf/baselines.hpp"
#include "tristmf/eval.hpp"
#include "tristmf/io.hpp"
#include "tristmf/matrix_io.hpp"
#include "tristmf/network.hpp"
#include "tristmf/ops.hpp"
#include "tristmf/runner.hpp"
#include "tristmf/trifactor.hpp"

using namespace tristmf;

namespace {

std::vector<std::size_t> parse_sizes(const std::string& text,
                                     std::size_t expected) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoull(tok));
  if (out.size() != expected)
    throw CLI::ValidationError("--sizes", "expected " +
                                              std::to_string(expected) +
                                              " comma-separated values");
  return out;
}

std::vector<NodeId> parse_ids(const std::string& text) {
  std::vector<NodeId> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::pair<int, int> parse_day_range(const std::string& text) {
  const auto dash = text.find('-');
  if (dash == std::string::npos)
    throw CLI::ValidationError("--days", "expected a-b");
  return {std::stoi(text.substr(0, dash)), std::stoi(text.substr(dash + 1))};
}

MaskedMatrix synth_matrix(std::size_t rows, std::size_t cols, std::size_t r1,
                          std::size_t r2, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.0, 10.0);
  const auto fill = [&](std::size_t r, std::size_t c) {
    MaskedMatrix out(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) out.at(i, j) = weight(rng);
    return out;
  };
  const MaskedMatrix a = fill(rows, r1);
  const MaskedMatrix b = fill(r1, r2);
  const MaskedMatrix c = fill(r2, cols);
  return maxplus_matmul(a, maxplus_matmul(b, c));
}

int run_cli(int argc, char** argv) {
  CLI::App app{"tropical tri-factorization toolkit"};
  app.require_subcommand(1);

  // ---- synth-matrix ----
  auto* synth = app.add_subcommand(
      "synth-matrix", "generate a random tropical product matrix (CSV)");
  std::size_t sm_rows = 200, sm_cols = 100, sm_r1 = 25, sm_r2 = 20;
  std::uint64_t sm_seed = 1;
  std::string sm_out;
  synth->add_option("--rows", sm_rows, "matrix rows");
  synth->add_option("--cols", sm_cols, "matrix cols");
  synth->add_option("--r1", sm_r1, "generator rank r1");
  synth->add_option("--r2", sm_r2, "generator rank r2");
  synth->add_option("--seed", sm_seed, "generator seed");
  synth->add_option("--out", sm_out, "output CSV path")->required();
  synth->callback([&] {
    write_matrix_csv_file(sm_out,
                          synth_matrix(sm_rows, sm_cols, sm_r1, sm_r2,
                                       sm_seed));
  });

  // ---- synth-network ----
  auto* snet = app.add_subcommand(
      "synth-network",
      "generate a four-partition tropical network (edge list + partition)");
  std::string sn_sizes = "45,10,15,30";
  std::uint64_t sn_seed = 1;
  std::string sn_out;
  snet->add_option("--sizes", sn_sizes, "m,r1,r2,n");
  snet->add_option("--seed", sn_seed, "generator seed");
  snet->add_option("--out", sn_out, "output prefix")->required();
  snet->callback([&] {
    const auto sizes = parse_sizes(sn_sizes, 4);
    std::mt19937_64 rng(sn_seed);
    const SyntheticNetwork k = gen_synthetic_tropical_network(
        sizes[0], sizes[1], sizes[2], sizes[3], rng);
    write_edge_list(sn_out + ".edges", k.network.edges());
    write_partition_json(sn_out + ".partition.json", k.truth);
  });

  // ---- partition ----
  auto* part = app.add_subcommand("partition",
                                  "partition a network into roles X/Y/W/Z");
  std::string pt_in, pt_strategy = "random", pt_out;
  std::string pt_sizes, pt_x_nodes, pt_z_nodes, pt_gamma = "0.6,0.8,1.0,1.2,1.5,2.0";
  double pt_mu_threshold = 70.0;
  std::uint64_t pt_seed = 1;
  part->add_option("--in", pt_in, "edge list file")->required();
  part->add_option("--strategy", pt_strategy, "random|partial|louvain")
      ->check(CLI::IsMember({"random", "partial", "louvain"}));
  part->add_option("--sizes", pt_sizes, "m,r1,r2,n (random/partial)");
  part->add_option("--x-nodes", pt_x_nodes, "comma-separated X ids (partial)");
  part->add_option("--z-nodes", pt_z_nodes, "comma-separated Z ids (partial)");
  part->add_option("--gamma-grid", pt_gamma, "louvain resolution sweep");
  part->add_option("--mu-threshold", pt_mu_threshold,
                   "minimal outer-node percentage (louvain)");
  part->add_option("--seed", pt_seed, "partition seed");
  part->add_option("--out", pt_out, "output partition JSON")->required();
  part->callback([&] {
    const WeightedNetwork net = network_from_edge_list(pt_in);
    std::mt19937_64 rng(pt_seed);
    FourPartition partition;
    if (pt_strategy == "random") {
      const auto sizes = parse_sizes(pt_sizes, 4);
      partition = random_partition(net.node_ids(),
                                   {sizes[0], sizes[1], sizes[2], sizes[3]},
                                   rng);
    } else if (pt_strategy == "partial") {
      const auto sizes = parse_sizes(pt_sizes, 4);
      partition = partially_random_partition(parse_ids(pt_x_nodes),
                                             parse_ids(pt_z_nodes),
                                             net.node_ids(), sizes[1],
                                             sizes[2], rng);
    } else {
      const auto sel = louvain_four_partition(net, parse_doubles(pt_gamma),
                                              pt_mu_threshold, rng);
      if (!sel)
        throw std::runtime_error(
            "no gamma in the grid produced a connected four-partition at "
            "the requested mu threshold");
      partition = sel->partition;
      std::cerr << "selected partition mu=" << partition.mu_percent_rounded()
                << "%\n";
    }
    write_partition_json(pt_out, partition);
  });

  // ---- factorize ----
  auto* fact = app.add_subcommand("factorize", "fit a factorization model");
  std::string fz_in, fz_method = "triFastSTMF", fz_init = "acol", fz_out;
  std::string fz_g1, fz_s, fz_g2;
  std::size_t fz_r1 = 2, fz_r2 = 2, fz_acol = 5;
  double fz_budget = 300.0, fz_eps = 1e-6, fz_phase_eps = 1e-2;
  std::uint64_t fz_seed = 0;
  fact->add_option("--in", fz_in, "input matrix CSV")->required();
  fact->add_option("--method", fz_method, "method id")
      ->check(CLI::IsMember(known_methods()));
  fact->add_option("--r1", fz_r1, "rank r1");
  fact->add_option("--r2", fz_r2, "rank r2");
  fact->add_option("--budget-secs", fz_budget, "wall-clock budget");
  fact->add_option("--init", fz_init, "acol|fixed")
      ->check(CLI::IsMember({"acol", "fixed"}));
  fact->add_option("--init-g1", fz_g1, "fixed init G1 CSV");
  fact->add_option("--init-s", fz_s, "fixed init S CSV");
  fact->add_option("--init-g2", fz_g2, "fixed init G2 CSV");
  fact->add_option("--seed", fz_seed, "fit seed");
  fact->add_option("--eps", fz_eps, "relative improvement stop threshold");
  fact->add_option("--phase-eps", fz_phase_eps,
                   "per-phase pass stagnation threshold");
  fact->add_option("--acol-samples", fz_acol, "columns averaged per draw");
  fact->add_option("--out", fz_out, "output result JSON")->required();
  fact->callback([&] {
    const MaskedMatrix r = read_matrix_csv_file(fz_in);
    FitConfig config;
    config.budget_seconds = fz_budget;
    config.seed = fz_seed;
    config.rel_improvement_eps = fz_eps;
    config.phase_rel_eps = fz_phase_eps;
    config.acol_sample_count = fz_acol;
    if (fz_init == "fixed") {
      if (fz_g1.empty() || fz_s.empty() || fz_g2.empty())
        throw CLI::ValidationError(
            "--init", "fixed init needs --init-g1/--init-s/--init-g2");
      config.init = InitStrategy::kFixed;
      config.fixed = FixedInit{read_matrix_csv_file(fz_g1),
                               read_matrix_csv_file(fz_s),
                               read_matrix_csv_file(fz_g2)};
    }
    const FitResult result = run_method(fz_method, r, fz_r1, fz_r2, config);
    nlohmann::json echo{{"in", fz_in},
                        {"method", fz_method},
                        {"r1", fz_r1},
                        {"r2", fz_r2},
                        {"budget_seconds", fz_budget},
                        {"init", fz_init},
                        {"seed", fz_seed},
                        {"rel_improvement_eps", fz_eps},
                        {"phase_rel_eps", fz_phase_eps},
                        {"acol_sample_count", fz_acol}};
    write_fit_result_json(fz_out, result, echo);
  });

  // ---- predict-network ----
  auto* pred = app.add_subcommand(
      "predict-network", "predict every cross-role pair from fitted factors");
  std::string pn_factors, pn_partition, pn_held_out, pn_out;
  pred->add_option("--factors", pn_factors, "fit result JSON")->required();
  pred->add_option("--partition", pn_partition, "partition JSON")->required();
  pred->add_option("--held-out", pn_held_out, "edge list scored as RMSE-P");
  pred->add_option("--out", pn_out, "output JSON")->required();
  pred->callback([&] {
    const FitResult fit = read_fit_result_json(pn_factors);
    const FourPartition partition = read_partition_json(pn_partition);
    const WholeNetworkPrediction prediction =
        predict_whole_network(fit.factors, partition);
    nlohmann::json out{{"blocks",
                        {{"xy", matrix_to_json(prediction.xy)},
                         {"yw", matrix_to_json(prediction.yw)},
                         {"wz", matrix_to_json(prediction.wz)},
                         {"xw", matrix_to_json(prediction.xw)},
                         {"yz", matrix_to_json(prediction.yz)},
                         {"xz", matrix_to_json(prediction.xz)}}}};
    if (!pn_held_out.empty()) {
      const std::vector<Edge> held = read_edge_list(pn_held_out);
      double sum = 0.0;
      std::size_t scored = 0, skipped = 0;
      for (const Edge& e : held) {
        const auto p = prediction.lookup(partition, e.u, e.v);
        if (!p) {
          ++skipped;
          continue;
        }
        sum += (*p - e.weight) * (*p - e.weight);
        ++scored;
      }
      out["rmse_p"] = scored ? nlohmann::json(std::sqrt(
                                   sum / static_cast<double>(scored)))
                             : nlohmann::json(nullptr);
      out["held_out_scored"] = scored;
      out["held_out_skipped"] = skipped;
    }
    std::ofstream file(pn_out);
    if (!file) throw std::runtime_error("cannot write " + pn_out);
    file << out.dump(2) << '\n';
  });

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "run a full experiment protocol");
  std::string bn_config;
  std::optional<std::size_t> bn_jobs, bn_reps;
  std::optional<double> bn_budget;
  std::optional<std::string> bn_out_dir;
  bench->add_option("--config", bn_config, "experiment JSON")->required();
  bench->add_option("--jobs", bn_jobs, "parallel runs");
  bench->add_option("--repetitions", bn_reps, "override repetitions");
  bench->add_option("--budget-secs", bn_budget, "override budget");
  bench->add_option("--out-dir", bn_out_dir, "override results directory");
  bench->callback([&] {
    std::ifstream in(bn_config);
    if (!in) throw std::runtime_error("cannot open config: " + bn_config);
    nlohmann::json j;
    in >> j;
    ExperimentConfig config = experiment_from_json(j);
    if (bn_jobs) config.jobs = *bn_jobs;          // flags win over the file
    if (bn_reps) config.repetitions = *bn_reps;
    if (bn_budget) config.budget_seconds = *bn_budget;
    if (bn_out_dir) config.out_dir = *bn_out_dir;
    const std::vector<MetricsRecord> records = run_experiment(config);
    for (const MetricsRecord& rec : records)
      std::cerr << rec.method << " seed=" << rec.seed
                << " rmse_a=" << rec.rmse_a << " final=" << rec.final_b_norm
                << "\n";
    std::cout << summary_csv(records, config.r1, config.r2);
  });

  // ---- ingest-ants ----
  auto* ants = app.add_subcommand(
      "ingest-ants", "aggregate an interaction file into a day-range network");
  std::string an_in, an_days = "1-41", an_out;
  ants->add_option("--in", an_in, "interaction records file")->required();
  ants->add_option("--days", an_days, "day range a-b");
  ants->add_option("--out", an_out, "output edge list")->required();
  ants->callback([&] {
    const auto [from, to] = parse_day_range(an_days);
    const auto table = ingest_interactions(an_in);
    const WeightedNetwork net = day_group_network(table, from, to);
    write_edge_list(an_out, net.edges());
    std::cerr << "nodes=" << net.node_count() << " edges="
              << net.edges().size() << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
