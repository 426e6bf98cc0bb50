// Acceptance suite: one pass/fail line per criterion.
// Run with no arguments for all criteria, or pass criterion numbers.

#include <array>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tristmf/baselines.hpp"
#include "tristmf/eval.hpp"
#include "tristmf/network.hpp"
#include "tristmf/ops.hpp"
#include "tristmf/runner.hpp"
#include "tristmf/solvers.hpp"
#include "tristmf/trifactor.hpp"

using namespace tristmf;

namespace {

std::size_t hardware_jobs() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 2 : hc;
}

MaskedMatrix random_int_matrix(std::mt19937_64& rng, std::size_t rows,
                               std::size_t cols, int lo, int hi,
                               double mask_prob = 0.0) {
  std::uniform_int_distribution<int> val(lo, hi);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  MaskedMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m.set(i, j, static_cast<double>(val(rng)), coin(rng) >= mask_prob);
  return m;
}

MaskedMatrix random_real_matrix(std::mt19937_64& rng, std::size_t rows,
                                std::size_t cols, double lo, double hi) {
  std::uniform_real_distribution<double> val(lo, hi);
  MaskedMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = val(rng);
  return m;
}

MaskedMatrix synth_tropical_matrix(std::mt19937_64& rng, std::size_t rows,
                                   std::size_t cols, std::size_t r1,
                                   std::size_t r2) {
  const MaskedMatrix a = random_real_matrix(rng, rows, r1, 0.0, 10.0);
  const MaskedMatrix b = random_real_matrix(rng, r1, r2, 0.0, 10.0);
  const MaskedMatrix c = random_real_matrix(rng, r2, cols, 0.0, 10.0);
  return maxplus_matmul(a, maxplus_matmul(b, c));
}

// ---- brute-force oracles (grid [-20,20], constraints decouple per entry) --

constexpr int kGridLo = -20;
constexpr int kGridHi = 20;

MaskedMatrix brute_left(const MaskedMatrix& a, const MaskedMatrix& c) {
  MaskedMatrix x(a.cols(), c.cols(), 0.0);
  for (std::size_t k = 0; k < a.cols(); ++k)
    for (std::size_t j = 0; j < c.cols(); ++j) {
      double best = kNegInf;
      for (int v = kGridLo; v <= kGridHi; ++v) {
        bool ok = true;
        for (std::size_t i = 0; i < a.rows() && ok; ++i)
          if (trop_mul(a.at(i, k), v) > c.at(i, j)) ok = false;
        if (ok) best = v;
      }
      x.at(k, j) = best;
    }
  return x;
}

MaskedMatrix brute_right(const MaskedMatrix& b, const MaskedMatrix& c) {
  MaskedMatrix z(c.rows(), b.rows(), 0.0);
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t k = 0; k < b.rows(); ++k) {
      double best = kNegInf;
      for (int v = kGridLo; v <= kGridHi; ++v) {
        bool ok = true;
        for (std::size_t j = 0; j < b.cols() && ok; ++j)
          if (trop_mul(v, b.at(k, j)) > c.at(i, j)) ok = false;
        if (ok) best = v;
      }
      z.at(i, k) = best;
    }
  return z;
}

MaskedMatrix brute_sandwich(const MaskedMatrix& a, const MaskedMatrix& b,
                            const MaskedMatrix& c) {
  MaskedMatrix x(a.cols(), b.rows(), 0.0);
  for (std::size_t k = 0; k < a.cols(); ++k)
    for (std::size_t p = 0; p < b.rows(); ++p) {
      double best = kNegInf;
      for (int v = kGridLo; v <= kGridHi; ++v) {
        bool ok = true;
        for (std::size_t i = 0; i < a.rows() && ok; ++i)
          for (std::size_t q = 0; q < b.cols() && ok; ++q)
            if (trop_mul(trop_mul(a.at(i, k), v), b.at(p, q)) > c.at(i, q))
              ok = false;
        if (ok) best = v;
      }
      x.at(k, p) = best;
    }
  return x;
}

// Theorem-2 verification batch (feasibility + maximality); reused by
// criteria 1 and 2.
bool theorem2_batch(std::mt19937_64& rng, int instances, std::string& error) {
  std::uniform_int_distribution<std::size_t> dim(1, 3);
  for (int trial = 0; trial < instances; ++trial) {
    const std::size_t m = dim(rng), n = dim(rng), p = dim(rng), q = dim(rng);
    const MaskedMatrix a = random_int_matrix(rng, m, n, -5, 5);
    const MaskedMatrix b = random_int_matrix(rng, p, q, -5, 5);
    const MaskedMatrix c = random_int_matrix(rng, m, q, -5, 5);
    const MaskedMatrix x = greatest_subsolution_sandwich(a, b, c);
    if (!matrix_leq(maxplus_matmul(maxplus_matmul(a, x), b), c)) {
      error = "sandwich output infeasible";
      return false;
    }
    if (!(x == brute_sandwich(a, b, c))) {
      error = "sandwich output below the brute-force maximum";
      return false;
    }
  }
  return true;
}

void run_parallel(std::vector<std::function<void()>> tasks,
                  std::size_t jobs) {
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      tasks[idx]();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(jobs, tasks.size()); ++t)
    pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
}

struct MinMax {
  double lo = kPosInf;
  double hi = kNegInf;
};

MinMax matrix_min_max(const MaskedMatrix& m) {
  MinMax mm;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      mm.lo = std::min(mm.lo, m.at(i, j));
      mm.hi = std::max(mm.hi, m.at(i, j));
    }
  return mm;
}

// ---- criteria ----------------------------------------------------------

bool criterion_1(std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(10001);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  int instances = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = dim(rng), n = dim(rng), p = dim(rng), q = dim(rng);
    const MaskedMatrix a = random_int_matrix(rng, m, n, -5, 5);
    const MaskedMatrix b = random_int_matrix(rng, p, q, -5, 5);
    const MaskedMatrix cl = random_int_matrix(rng, m, p, -5, 5);
    const MaskedMatrix cr = random_int_matrix(rng, m, q, -5, 5);

    const MaskedMatrix xl = greatest_subsolution_left(a, cl);
    if (!matrix_leq(maxplus_matmul(a, xl), cl)) {
      out << "left solver infeasible at instance " << trial;
      return false;
    }
    if (!(xl == brute_left(a, cl))) {
      out << "left solver differs from brute force at instance " << trial;
      return false;
    }

    const MaskedMatrix zr = greatest_subsolution_right(b, cr);
    if (!matrix_leq(maxplus_matmul(zr, b), cr)) {
      out << "right solver infeasible at instance " << trial;
      return false;
    }
    if (!(zr == brute_right(b, cr))) {
      out << "right solver differs from brute force at instance " << trial;
      return false;
    }

    const MaskedMatrix xs = greatest_subsolution_sandwich(a, b, cr);
    if (!matrix_leq(maxplus_matmul(maxplus_matmul(a, xs), b), cr)) {
      out << "sandwich solver infeasible at instance " << trial;
      return false;
    }
    if (!(xs == brute_sandwich(a, b, cr))) {
      out << "sandwich solver differs from brute force at instance " << trial;
      return false;
    }
    ++instances;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  out << instances << " instances x 3 solvers, " << secs << " s";
  return secs < 60.0;
}

bool criterion_2(std::ostream& out) {
  const auto a = MaskedMatrix::from_rows({{0, 0}});
  const auto b = MaskedMatrix::from_rows({{0, 5}, {5, 0}});
  const auto c = MaskedMatrix::from_rows({{0}, {0}});
  const double lhs = minplus_matmul(maxplus_matmul(a, b), c).at(0, 0);
  const double rhs = maxplus_matmul(a, minplus_matmul(b, c)).at(0, 0);
  if (lhs != 5.0 || rhs != 0.0) {
    out << "probe evaluated to lhs=" << lhs << " rhs=" << rhs
        << ", expected 5 and 0";
    return false;
  }
  std::mt19937_64 rng(10002);
  std::string error;
  if (!theorem2_batch(rng, 300, error)) {
    out << "theorem-2 batch failed: " << error;
    return false;
  }
  out << "grouping probe gives " << lhs << " != " << rhs
      << "; 300 theorem-2 instances feasible and maximal";
  return true;
}

bool criterion_3(std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(10003);
  std::uniform_int_distribution<std::size_t> outer(1, 8), inner(1, 3);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = outer(rng), r1 = inner(rng), r2 = inner(rng),
                      n = outer(rng);
    const MaskedMatrix g1 = random_real_matrix(rng, m, r1, 0.0, 10.0);
    const MaskedMatrix s = random_real_matrix(rng, r1, r2, 0.0, 10.0);
    const MaskedMatrix g2 = random_real_matrix(rng, r2, n, 0.0, 10.0);
    const MaskedMatrix r = maxplus_matmul(g1, maxplus_matmul(s, g2));
    FitConfig config;
    config.budget_seconds = 1.0;
    config.seed = static_cast<std::uint64_t>(trial);
    config.init = InitStrategy::kFixed;
    config.fixed = FixedInit{g1, s, g2};
    const FitResult result = tri_fast_stmf(r, r1, r2, config);
    worst = std::max(worst, result.record.rmse_a);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  out << "50 exact triples, worst RMSE-A " << worst << ", " << secs << " s";
  return worst <= 1e-9 && secs < 10.0;
}

bool criterion_4(std::ostream& out) {
  std::mt19937_64 gen_rng(10004);
  const MaskedMatrix r = synth_tropical_matrix(gen_rng, 200, 100, 25, 20);
  std::vector<FitResult> results(5);
  std::vector<std::function<void()>> tasks;
  for (std::size_t seed = 0; seed < 5; ++seed)
    tasks.push_back([&r, &results, seed] {
      FitConfig config;
      config.budget_seconds = 20.0;
      config.seed = seed + 1;
      results[seed] = tri_fast_stmf(r, 25, 20, config);
    });
  run_parallel(std::move(tasks), hardware_jobs());

  bool ok = true;
  for (const FitResult& result : results) {
    const auto& trace = result.record.trace;
    for (std::size_t i = 1; i < trace.size(); ++i)
      if (trace[i].b_norm > trace[i - 1].b_norm) {
        out << "trace increased for seed " << result.record.seed << "; ";
        ok = false;
      }
    if (!(trace.back().b_norm < trace.front().b_norm)) {
      out << "no improvement for seed " << result.record.seed << "; ";
      ok = false;
    }
  }
  if (ok) {
    out << "5 seeds, 20 s each: traces non-increasing, improvements ";
    for (const FitResult& result : results)
      out << result.record.trace.front().b_norm << "->"
          << result.record.final_b_norm << " ";
  }
  return ok;
}

bool criterion_5(std::ostream& out) {
  ExperimentConfig config;
  config.name = "method-ordering";
  config.methods = {"triFastSTMF", "lrConsecutive", "rlConsecutive",
                    "triSTMF-BothTD", "triSTMF-RandomTD"};
  config.dataset.kind = DatasetKind::kSyntheticMatrix;
  config.dataset.name = "synth-100x50";
  config.dataset.rows = 100;
  config.dataset.cols = 50;
  config.dataset.gen_r1 = 10;
  config.dataset.gen_r2 = 8;
  config.dataset.dataset_seed = 10005;
  config.r1 = 10;
  config.r2 = 8;
  config.budget_seconds = 60.0;
  config.repetitions = 10;
  config.base_seed = 505;
  config.jobs = hardware_jobs();
  config.persist = false;
  const std::vector<MetricsRecord> records = run_experiment(config);

  std::map<std::string, std::vector<double>> finals;
  for (const MetricsRecord& rec : records)
    finals[rec.method].push_back(rec.final_b_norm);
  std::map<std::string, double> medians;
  for (auto& [method, values] : finals) medians[method] = median(values);

  out << "median final b-norm: ";
  for (const auto& [method, value] : medians)
    out << method << "=" << value << " ";

  const double ours = medians.at("triFastSTMF");
  bool leq_all = true;
  bool strictly_worst = true;
  for (const auto& [method, value] : medians) {
    if (method == "triFastSTMF") continue;
    if (ours > value) leq_all = false;
    if (ours <= value) strictly_worst = false;
  }
  out << (leq_all ? "| triFastSTMF best or tied"
                  : "| triFastSTMF not uniformly best (report)");
  // fail only if strictly worse than every alternative
  return !strictly_worst;
}

bool criterion_6(std::ostream& out) {
  const std::array<std::array<std::size_t, 4>, 10> rows_spec{{
      {65, 21, 2, 52},
      {57, 22, 5, 56},
      {57, 24, 2, 57},
      {60, 21, 2, 57},
      {60, 20, 4, 56},
      {61, 19, 2, 58},
      {57, 18, 15, 50},
      {52, 23, 14, 51},
      {67, 4, 2, 67},
      {65, 15, 2, 58},
  }};
  const std::array<int, 10> expected{84, 81, 81, 84, 83, 85, 76, 74, 96, 88};
  for (std::size_t i = 0; i < rows_spec.size(); ++i) {
    FourPartition p;
    NodeId next = 0;
    for (std::size_t k = 0; k < rows_spec[i][0]; ++k) p.x.push_back(next++);
    for (std::size_t k = 0; k < rows_spec[i][1]; ++k) p.y.push_back(next++);
    for (std::size_t k = 0; k < rows_spec[i][2]; ++k) p.w.push_back(next++);
    for (std::size_t k = 0; k < rows_spec[i][3]; ++k) p.z.push_back(next++);
    if (p.mu_percent_rounded() != expected[i]) {
      out << "row " << i + 1 << " gave " << p.mu_percent_rounded()
          << "%, expected " << expected[i] << "%";
      return false;
    }
  }
  out << "all ten partition rows round to their integer percentages";
  return true;
}

bool criterion_7(std::ostream& out) {
  std::mt19937_64 rng(10007);
  MaskedMatrix r = random_int_matrix(rng, 10, 8, -9, 9, 0.3);
  if (r.observed_count() == 0) r.set(0, 0, 1.0, true);

  FitConfig config;
  config.budget_seconds = 30.0;  // integer data converges long before this
  config.seed = 7;
  const FitResult base = tri_fast_stmf(r, 2, 2, config);

  std::uniform_real_distribution<double> noise(-1000.0, 1000.0);
  for (int mutation = 0; mutation < 100; ++mutation) {
    MaskedMatrix mutated = r;
    std::size_t flipped = 0;
    for (std::size_t i = 0; i < r.rows(); ++i)
      for (std::size_t j = 0; j < r.cols(); ++j)
        if (!r.observed(i, j)) {
          mutated.at(i, j) = noise(rng);
          ++flipped;
        }
    if (flipped == 0) break;
    const FitResult other = tri_fast_stmf(mutated, 2, 2, config);
    if (!(base.factors.g1 == other.factors.g1 &&
          base.factors.s == other.factors.s &&
          base.factors.g2 == other.factors.g2)) {
      out << "mutation " << mutation << " changed the factorization";
      return false;
    }
  }
  out << "100 mutations of unobserved entries left the factors bit-identical";
  return true;
}

bool criterion_8(std::ostream& out) {
  std::mt19937_64 rng(10008);
  const SyntheticNetwork k = gen_synthetic_tropical_network(45, 10, 15, 30,
                                                            rng);
  const auto samples = sample_networks(k.network, 1, 0.10, rng);
  const SampledNetwork& sample = samples.front();
  BlockMatrices blocks = build_matrices(sample.network, k.truth, rng);

  FitConfig config;
  config.budget_seconds = 30.0;
  config.seed = 8;
  config.init = InitStrategy::kFixed;
  config.fixed = FixedInit{blocks.g1, blocks.s, blocks.g2};
  const FitResult fit = tri_fast_stmf(blocks.r, 10, 15, config);
  const WholeNetworkPrediction prediction =
      predict_whole_network(fit.factors, k.truth);

  const MinMax m1 = matrix_min_max(fit.factors.g1);
  const MinMax m2 = matrix_min_max(fit.factors.s);
  const MinMax m3 = matrix_min_max(fit.factors.g2);
  const double lo = m1.lo + m2.lo + m3.lo;
  const double hi = m1.hi + m2.hi + m3.hi;

  // the X-Z block is the tri-product: the bound is exact there; the two
  // derived two-factor blocks obey their own sums
  for (std::size_t i = 0; i < prediction.xz.rows(); ++i)
    for (std::size_t j = 0; j < prediction.xz.cols(); ++j) {
      const double v = prediction.xz.at(i, j);
      if (v < lo || v > hi) {
        out << "X-Z prediction " << v << " outside [" << lo << ", " << hi
            << "]";
        return false;
      }
    }
  for (std::size_t i = 0; i < prediction.xw.rows(); ++i)
    for (std::size_t j = 0; j < prediction.xw.cols(); ++j) {
      const double v = prediction.xw.at(i, j);
      if (v < m1.lo + m2.lo || v > m1.hi + m2.hi) {
        out << "X-W prediction outside its two-factor bound";
        return false;
      }
    }
  for (std::size_t i = 0; i < prediction.yz.rows(); ++i)
    for (std::size_t j = 0; j < prediction.yz.cols(); ++j) {
      const double v = prediction.yz.at(i, j);
      if (v < m2.lo + m3.lo || v > m2.hi + m3.hi) {
        out << "Y-Z prediction outside its two-factor bound";
        return false;
      }
    }
  out << "held-out fraction " << sample.held_out.size() << "/"
      << k.network.edges().size() << "; all 45x30 X-Z predictions in ["
      << lo << ", " << hi << "]";
  return true;
}

bool criterion_9(std::ostream& out) {
  const auto run_strategy = [&](const std::string& strategy) {
    ExperimentConfig config;
    config.name = "partition-robustness-" + strategy;
    config.methods = {"triFastSTMF"};
    config.dataset.kind = DatasetKind::kSyntheticNetwork;
    config.dataset.name = "k-45-10-15-30";
    config.dataset.sizes = {45, 10, 15, 30};
    config.dataset.dataset_seed = 10009;
    config.dataset.partition_strategy = strategy;
    config.dataset.holdout_fraction = 0.0;
    config.init = InitStrategy::kFixed;
    config.budget_seconds = 100.0;
    config.repetitions = 25;
    config.base_seed = 909;
    config.jobs = hardware_jobs();
    config.persist = false;
    return run_experiment(config);
  };

  const auto records_random = run_strategy("random");
  const auto records_partial = run_strategy("partial");

  std::vector<double> rand_random, rand_partial, err_random, err_partial,
      fit_random, fit_partial;
  for (const auto& rec : records_random) {
    rand_random.push_back(*rec.rand_score);
    err_random.push_back(rec.rmse_a);
    fit_random.push_back(rec.extra.at("rmse_a_r_block"));
  }
  for (const auto& rec : records_partial) {
    rand_partial.push_back(*rec.rand_score);
    err_partial.push_back(rec.rmse_a);
    fit_partial.push_back(rec.extra.at("rmse_a_r_block"));
  }
  const double rand_med_random = median(rand_random);
  const double rand_med_partial = median(rand_partial);
  const double err_med_random = median(err_random);
  const double err_med_partial = median(err_partial);
  const double fit_med_random = median(fit_random);
  const double fit_med_partial = median(fit_partial);
  const auto rel_diff = [](double a, double b) {
    return std::abs(a - b) / std::max(a, b);
  };
  const double rel_whole = rel_diff(err_med_random, err_med_partial);
  const double rel_fit = rel_diff(fit_med_random, fit_med_partial);

  out << "rand medians: partial=" << rand_med_partial
      << " random=" << rand_med_random << "; R-fit rmse-a medians: partial="
      << fit_med_partial << " random=" << fit_med_random << " (relative diff "
      << rel_fit << (rel_fit < 0.25 ? ", < 25%" : ", >= 25% (report)")
      << "); whole-network rmse-a medians: partial=" << err_med_partial
      << " random=" << err_med_random << " (relative diff " << rel_whole
      << (rel_whole < 0.25 ? ", < 25%" : ", >= 25% (report)") << ")";
  // only the rand-score direction gates
  return rand_med_partial > rand_med_random;
}

bool criterion_10(std::ostream& out) {
  std::mt19937_64 rng(10010);
  std::uniform_int_distribution<std::size_t> dim(1, 9);

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = dim(rng), n = dim(rng);
    const MaskedMatrix pred = random_real_matrix(rng, m, n, -100.0, 100.0);
    const MaskedMatrix truth = random_real_matrix(rng, m, n, -100.0, 100.0);
    EntrySet entries;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) entries.push_back({i, j});
    double sum = 0.0;
    for (const auto& [i, j] : entries) {
      const double d = pred.at(i, j) - truth.at(i, j);
      sum += d * d;
    }
    const double oracle = std::sqrt(sum / static_cast<double>(entries.size()));
    if (std::abs(rmse(pred, truth, entries) - oracle) > 1e-12) {
      out << "rmse mismatch at instance " << trial;
      return false;
    }
  }

  std::uniform_int_distribution<int> label(0, 3);
  std::uniform_int_distribution<std::size_t> size(2, 12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = size(rng);
    std::vector<int> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = label(rng);
      b[i] = label(rng);
    }
    std::size_t agree = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        ++total;
        if ((a[i] == a[j]) == (b[i] == b[j])) ++agree;
      }
    const double oracle =
        static_cast<double>(agree) / static_cast<double>(total);
    if (rand_score(a, b) != oracle) {
      out << "rand score mismatch at instance " << trial;
      return false;
    }
  }
  out << "200 rmse instances within 1e-12; 200 rand instances exact";
  return true;
}

struct Criterion {
  int id;
  const char* name;
  std::function<bool(std::ostream&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "residuation solvers match the brute-force oracle", criterion_1},
      {2, "mixed-product grouping probe and theorem-2 regression",
       criterion_2},
      {3, "exact recovery from fixed init at the truth", criterion_3},
      {4, "monotone traces on the 200x100 protocol", criterion_4},
      {5, "method ordering on the 100x50 protocol", criterion_5},
      {6, "mu percentages of the reference partition rows", criterion_6},
      {7, "mask-blindness under unobserved-entry mutations", criterion_7},
      {8, "tropical prediction bound on whole-network prediction",
       criterion_8},
      {9, "partition robustness: partially-random vs random", criterion_9},
      {10, "metric implementations match brute-force oracles", criterion_10},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    if (!selected.empty() && !selected.count(criterion.id)) continue;
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion.id
              << ": " << criterion.name << " - " << detail.str() << "\n"
              << std::flush;
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
