#include "tristmf/trifactor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "tristmf/eval.hpp"
#include "tristmf/ops.hpp"
#include "tristmf/solvers.hpp"

namespace tristmf {

namespace {

MaskedMatrix apply_perm_rows(const MaskedMatrix& m,
                             const std::vector<std::size_t>& perm) {
  MaskedMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const std::size_t src = perm[i];
    for (std::size_t j = 0; j < m.cols(); ++j)
      out.set(i, j, m.at(src, j), m.observed(src, j));
  }
  return out;
}

UpdateSnapshot take_snapshot(const MaskedMatrix& u, const MaskedMatrix& v,
                             std::size_t k) {
  UpdateSnapshot snap;
  snap.k = k;
  snap.u_col.resize(u.rows());
  for (std::size_t s = 0; s < u.rows(); ++s) snap.u_col[s] = u.at(s, k);
  snap.v_row.resize(v.cols());
  for (std::size_t t = 0; t < v.cols(); ++t) snap.v_row[t] = v.at(k, t);
  return snap;
}

}  // namespace

namespace detail {

void refresh_v_row(const MaskedMatrix& r, const MaskedMatrix& u,
                   MaskedMatrix& v, std::size_t k) {
  for (std::size_t t = 0; t < r.cols(); ++t) {
    double best = kPosInf;
    for (std::size_t s = 0; s < r.rows(); ++s) {
      if (!r.observed(s, t)) continue;
      const double usk = u.at(s, k);
      if (usk == kNegInf) continue;  // no constraint through this row
      const double term = r.at(s, t) - usk;
      if (term < best) best = term;
    }
    if (best != kPosInf) v.at(k, t) = best;
  }
}

void refresh_u_col(const MaskedMatrix& r, MaskedMatrix& u,
                   const MaskedMatrix& v, std::size_t k) {
  for (std::size_t s = 0; s < r.rows(); ++s) {
    double best = kPosInf;
    for (std::size_t t = 0; t < r.cols(); ++t) {
      if (!r.observed(s, t)) continue;
      const double vkt = v.at(k, t);
      if (vkt == kNegInf) continue;
      const double term = r.at(s, t) - vkt;
      if (term < best) best = term;
    }
    if (best != kPosInf) u.at(s, k) = best;
  }
}

}  // namespace detail

MaskedMatrix TriFactorization::product() const {
  return maxplus_matmul(g1, maxplus_matmul(s, g2));
}

std::vector<std::size_t> PreprocessRecord::inverse_perm() const {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

std::pair<MaskedMatrix, PreprocessRecord> preprocess(const MaskedMatrix& r,
                                                     std::mt19937_64& rng) {
  if (r.empty()) throw std::invalid_argument("preprocess: empty matrix");
  PreprocessRecord rec;
  MaskedMatrix base = r;
  if (r.cols() < r.rows()) {
    base = r.transposed();
    rec.transposed = true;
  }
  rec.perm.resize(base.rows());
  std::iota(rec.perm.begin(), rec.perm.end(), std::size_t{0});
  std::shuffle(rec.perm.begin(), rec.perm.end(), rng);
  return {apply_perm_rows(base, rec.perm), rec};
}

TriFactorization postprocess(const MaskedMatrix& g1, const MaskedMatrix& s,
                             const MaskedMatrix& g2,
                             const PreprocessRecord& rec) {
  const std::vector<std::size_t> inv = rec.inverse_perm();
  TriFactorization out;
  if (rec.transposed) {
    out.g1 = g2.transposed();
    out.s = s.transposed();
    out.g2 = apply_perm_rows(g1, inv).transposed();
  } else {
    out.g1 = apply_perm_rows(g1, inv);
    out.s = s;
    out.g2 = g2;
  }
  out.r1 = out.g1.cols();
  out.r2 = out.g2.rows();
  return out;
}

std::pair<MaskedMatrix, MaskedMatrix> random_acol_init(
    const MaskedMatrix& r, std::size_t r1, std::size_t r2,
    std::mt19937_64& rng, std::size_t sample_count) {
  if (r.empty()) throw std::invalid_argument("random_acol_init: empty matrix");
  const std::size_t m = r.rows(), n = r.cols();
  std::uniform_int_distribution<std::size_t> col_dist(0, n - 1);
  std::uniform_int_distribution<std::size_t> row_dist(0, m - 1);

  MaskedMatrix g1(m, r1, 0.0);
  std::vector<double> sum(m);
  std::vector<std::size_t> cnt(m);
  for (std::size_t c = 0; c < r1; ++c) {
    std::fill(sum.begin(), sum.end(), 0.0);
    std::fill(cnt.begin(), cnt.end(), std::size_t{0});
    for (std::size_t draw = 0; draw < sample_count; ++draw) {
      const std::size_t src = col_dist(rng);
      for (std::size_t i = 0; i < m; ++i)
        if (r.observed(i, src)) {
          sum[i] += r.at(i, src);
          ++cnt[i];
        }
    }
    for (std::size_t i = 0; i < m; ++i)
      g1.at(i, c) = cnt[i] ? sum[i] / static_cast<double>(cnt[i]) : 0.0;
  }

  MaskedMatrix g2(r2, n, 0.0);
  sum.resize(n);
  cnt.resize(n);
  for (std::size_t row = 0; row < r2; ++row) {
    std::fill(sum.begin(), sum.end(), 0.0);
    std::fill(cnt.begin(), cnt.end(), std::size_t{0});
    for (std::size_t draw = 0; draw < sample_count; ++draw) {
      const std::size_t src = row_dist(rng);
      for (std::size_t j = 0; j < n; ++j)
        if (r.observed(src, j)) {
          sum[j] += r.at(src, j);
          ++cnt[j];
        }
    }
    for (std::size_t j = 0; j < n; ++j)
      g2.at(row, j) = cnt[j] ? sum[j] / static_cast<double>(cnt[j]) : 0.0;
  }
  return {g1, g2};
}

MaskedMatrix compute_middle(const MaskedMatrix& g1, const MaskedMatrix& r,
                            const MaskedMatrix& g2,
                            const MaskedMatrix* fallback) {
  MaskedMatrix s = greatest_subsolution_sandwich(g1, g2, r);
  cap_non_finite(s, fallback, 0.0);
  return s;
}

std::size_t winner_index(const MaskedMatrix& u, const MaskedMatrix& v,
                         std::size_t i, std::size_t j) {
  const std::size_t p = u.cols();
  double best = kNegInf;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < p; ++k) {
    const double val = trop_mul(u.at(i, k), v.at(k, j));
    if (val > best) {
      best = val;
      best_k = k;
    }
  }
  return best_k;
}

TdaResult td_a(const MaskedMatrix& r, const MaskedMatrix& u,
               const MaskedMatrix& v, std::size_t i) {
  const std::size_t m = r.rows(), n = r.cols();
  const MaskedMatrix p = maxplus_matmul(u, v);
  TdaResult res;
  res.errors.assign(n, 0.0);
  res.column_indices.assign(n, {});
  for (std::size_t t = 0; t < n; ++t)
    if (r.observed(i, t)) res.row_indices.push_back(winner_index(u, v, i, t));
  for (std::size_t j = 0; j < n; ++j) {
    double err = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      if (!r.observed(s, j)) continue;
      err += std::abs(r.at(s, j) - p.at(s, j));
      res.column_indices[j].push_back(winner_index(u, v, s, j));
    }
    res.errors[j] = err;
  }
  return res;
}

UpdateSnapshot f_ulf(const MaskedMatrix& r, MaskedMatrix& u, MaskedMatrix& v,
                     std::size_t i, std::size_t j, std::size_t k) {
  UpdateSnapshot snap = take_snapshot(u, v, k);
  const double vkj = v.at(k, j);
  if (std::isfinite(vkj)) u.at(i, k) = r.at(i, j) - vkj;
  detail::refresh_v_row(r, u, v, k);
  return snap;
}

UpdateSnapshot f_urf(const MaskedMatrix& r, MaskedMatrix& u, MaskedMatrix& v,
                     std::size_t i, std::size_t j, std::size_t k) {
  UpdateSnapshot snap = take_snapshot(u, v, k);
  const double uik = u.at(i, k);
  if (std::isfinite(uik)) v.at(k, j) = r.at(i, j) - uik;
  detail::refresh_u_col(r, u, v, k);
  return snap;
}

void rollback(MaskedMatrix& u, MaskedMatrix& v, const UpdateSnapshot& snap) {
  for (std::size_t s = 0; s < u.rows(); ++s) u.at(s, snap.k) = snap.u_col[s];
  for (std::size_t t = 0; t < v.cols(); ++t) v.at(snap.k, t) = snap.v_row[t];
}

FitClock FitClock::with_budget(double seconds) {
  FitClock c;
  c.start_ = std::chrono::steady_clock::now();
  const double capped = std::clamp(seconds, 0.0, 1e9);
  c.deadline_ =
      c.start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(capped));
  return c;
}

bool FitClock::expired() const {
  return std::chrono::steady_clock::now() >= deadline_;
}

double FitClock::elapsed_seconds() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start_)
      .count();
}

void TraceRecorder::record(double b_norm) {
  double elapsed = clock_->elapsed_seconds();
  if (elapsed <= last_elapsed_) elapsed = last_elapsed_ + 1e-9;
  out_->push_back({elapsed, b_norm, phase_});
  last_elapsed_ = elapsed;
}

void TraceRecorder::record_initial(double b_norm) {
  out_->push_back({0.0, b_norm, phase_});
  last_elapsed_ = 0.0;
}

namespace detail {

std::size_t argmax_multiplicity(const std::vector<std::size_t>& row_indices,
                                const std::vector<std::size_t>& col_indices,
                                std::size_t latent_dim) {
  std::vector<std::size_t> counts(latent_dim, 0);
  for (std::size_t k : row_indices) ++counts[k];
  for (std::size_t k : col_indices) ++counts[k];
  std::size_t best = 0;
  for (std::size_t k = 1; k < latent_dim; ++k)
    if (counts[k] > counts[best]) best = k;
  return best;
}

std::vector<std::size_t> decreasing_error_order(
    const std::vector<double>& errors) {
  std::vector<std::size_t> order(errors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return errors[a] > errors[b];  // ties keep smaller index
                   });
  return order;
}

void gated_row_passes(const MaskedMatrix& r, MaskedMatrix& u, MaskedMatrix& v,
                      const std::function<double()>& gate,
                      const FitClock& clock, double& current_j,
                      TraceRecorder* trace, double pass_rel_eps) {
  const std::size_t latent = u.cols();
  bool any_accept = true;
  while (any_accept && !clock.expired()) {
    any_accept = false;
    const double pass_start_j = current_j;
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (clock.expired()) return;
      const TdaResult tda = td_a(r, u, v, i);
      const std::vector<std::size_t> order =
          decreasing_error_order(tda.errors);
      for (std::size_t j : order) {
        if (clock.expired()) return;
        if (!r.observed(i, j)) continue;
        const std::size_t k = argmax_multiplicity(
            tda.row_indices, tda.column_indices[j], latent);
        bool accepted = false;
        {
          const UpdateSnapshot snap = f_ulf(r, u, v, i, j, k);
          const double j_new = gate();
          if (j_new < current_j) {
            current_j = j_new;
            if (trace) trace->record(j_new);
            accepted = true;
          } else {
            rollback(u, v, snap);
          }
        }
        if (!accepted && !clock.expired()) {
          const UpdateSnapshot snap = f_urf(r, u, v, i, j, k);
          const double j_new = gate();
          if (j_new < current_j) {
            current_j = j_new;
            if (trace) trace->record(j_new);
            accepted = true;
          } else {
            rollback(u, v, snap);
          }
        }
        if (accepted) {
          any_accept = true;
          break;  // next row
        }
      }
    }
    // stagnating passes hand control back so the other factors get their turn
    if (any_accept && pass_rel_eps > 0.0 && pass_start_j > 0.0 &&
        (pass_start_j - current_j) < pass_rel_eps * pass_start_j)
      return;
  }
}

void map_fixed_init(const FixedInit& fixed, const PreprocessRecord& rec,
                    MaskedMatrix& g1, MaskedMatrix& s, MaskedMatrix& g2) {
  if (rec.transposed) {
    g1 = apply_perm_rows(fixed.g2.transposed(), rec.perm);
    s = fixed.s.transposed();
    g2 = fixed.g1.transposed();
  } else {
    g1 = apply_perm_rows(fixed.g1, rec.perm);
    s = fixed.s;
    g2 = fixed.g2;
  }
}

}  // namespace detail

MaskedMatrix cfl(const MaskedMatrix& r, const MaskedMatrix& g1,
                 const MaskedMatrix& s, const MaskedMatrix& g2,
                 const FitClock& clock, double& current_j,
                 TraceRecorder* trace, double pass_rel_eps) {
  MaskedMatrix u = g1;
  // Gate against the frozen S ⊗ G2; Q is a working copy whose mutations are
  // discarded at return.
  const MaskedMatrix w = maxplus_matmul(s, g2);
  MaskedMatrix q = w;
  detail::gated_row_passes(
      r, u, q, [&] { return residual_b_norm(r, u, w); }, clock, current_j,
      trace, pass_rel_eps);
  return u;
}

MaskedMatrix cfr(const MaskedMatrix& r, const MaskedMatrix& g1,
                 const MaskedMatrix& s, const MaskedMatrix& g2,
                 const FitClock& clock, double& current_j,
                 TraceRecorder* trace, double pass_rel_eps) {
  const MaskedMatrix w = maxplus_matmul(g1, s);
  MaskedMatrix q = w;
  MaskedMatrix v = g2;
  detail::gated_row_passes(
      r, q, v, [&] { return residual_b_norm(r, w, v); }, clock, current_j,
      trace, pass_rel_eps);
  return v;
}

FitResult tri_fast_stmf(const MaskedMatrix& r, std::size_t r1, std::size_t r2,
                        const FitConfig& config) {
  if (r.empty()) throw std::invalid_argument("tri_fast_stmf: empty matrix");
  if (r1 == 0 || r2 == 0)
    throw std::invalid_argument("tri_fast_stmf: ranks must be positive");
  if (r.observed_count() == 0)
    throw std::invalid_argument("tri_fast_stmf: no observed entries");
  if (config.init == InitStrategy::kFixed && !config.fixed)
    throw std::invalid_argument("tri_fast_stmf: fixed init without factors");

  const FitClock clock = FitClock::with_budget(config.budget_seconds);
  std::mt19937_64 rng(config.seed);

  auto [rp, rec] = preprocess(r, rng);
  const std::size_t er1 = rec.transposed ? r2 : r1;
  const std::size_t er2 = rec.transposed ? r1 : r2;

  MaskedMatrix g1, s, g2;
  if (config.init == InitStrategy::kRandomAcol) {
    std::tie(g1, g2) =
        random_acol_init(rp, er1, er2, rng, config.acol_sample_count);
    s = compute_middle(g1, rp, g2, nullptr);
  } else {
    const FixedInit& fx = *config.fixed;
    if (fx.g1.rows() != r.rows() || fx.g1.cols() != r1 ||
        fx.s.rows() != r1 || fx.s.cols() != r2 || fx.g2.rows() != r2 ||
        fx.g2.cols() != r.cols())
      throw std::invalid_argument("tri_fast_stmf: fixed init shapes");
    detail::map_fixed_init(fx, rec, g1, s, g2);
  }

  MetricsRecord record;
  record.method = "triFastSTMF";
  record.seed = config.seed;
  record.rank_exceeds_dim = r1 >= std::min(r.rows(), r.cols()) ||
                            r2 >= std::min(r.rows(), r.cols());
  TraceRecorder trace(record.trace, clock);

  double j = residual_b_norm(rp, g1, maxplus_matmul(s, g2));
  trace.record_initial(j);

  std::size_t iter = 0;
  while (!clock.expired() && iter < config.max_outer_iters) {
    const double j_before = j;
    g1 = cfl(rp, g1, s, g2, clock, j, &trace, config.phase_rel_eps);
    if (clock.expired()) break;
    g2 = cfr(rp, g1, s, g2, clock, j, &trace, config.phase_rel_eps);
    if (clock.expired()) break;
    MaskedMatrix s_cand = compute_middle(g1, rp, g2, &s);
    const double j_cand = residual_b_norm(rp, g1, maxplus_matmul(s_cand, g2));
    if (j_cand < j) {
      s = std::move(s_cand);
      j = j_cand;
      trace.record(j);
    }
    ++iter;
    if (j_before <= 0.0) break;
    if ((j_before - j) / j_before < config.rel_improvement_eps) break;
  }

  FitResult out;
  out.factors = postprocess(g1, s, g2, rec);
  record.extra["outer_iters"] = static_cast<double>(iter);
  record.final_b_norm = j;
  record.elapsed_seconds =
      config.budget_seconds <= 0.0 ? 0.0 : clock.elapsed_seconds();
  record.rmse_a = rmse_observed(out.factors.product(), r);
  out.record = std::move(record);
  return out;
}

}  // namespace tristmf
