#include "tristmf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tristmf/eval.hpp"
#include "tristmf/ops.hpp"
#include "tristmf/solvers.hpp"

namespace tristmf {

namespace {

// Fit wall-clock that continues an outer budget: used by the consecutive
// phases so both phases share one global deadline semantics.
double remaining_budget(const FitClock& clock, double total) {
  return std::max(0.0, total - clock.elapsed_seconds());
}

void shift_phase_trace(std::vector<TracePoint>& into,
                       const std::vector<TracePoint>& phase,
                       double offset_seconds, int phase_label) {
  for (const TracePoint& p : phase) {
    TracePoint q = p;
    q.elapsed_seconds += offset_seconds;
    q.phase = phase_label;
    if (!into.empty() && q.elapsed_seconds <= into.back().elapsed_seconds)
      q.elapsed_seconds = into.back().elapsed_seconds + 1e-9;
    into.push_back(q);
  }
}

// STMF-style update: exact path at (i,j,k), then full greatest-subsolution
// refreshes of both the touched row of V and column of U.
void slow_ulf(const MaskedMatrix& r, MaskedMatrix& u, MaskedMatrix& v,
              std::size_t i, std::size_t j, std::size_t k) {
  const double vkj = v.at(k, j);
  if (std::isfinite(vkj)) u.at(i, k) = r.at(i, j) - vkj;
  detail::refresh_v_row(r, u, v, k);
  detail::refresh_u_col(r, u, v, k);
}

void slow_urf(const MaskedMatrix& r, MaskedMatrix& u, MaskedMatrix& v,
              std::size_t i, std::size_t j, std::size_t k) {
  const double uik = u.at(i, k);
  if (std::isfinite(uik)) v.at(k, j) = r.at(i, j) - uik;
  detail::refresh_u_col(r, u, v, k);
  detail::refresh_v_row(r, u, v, k);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over the combined value
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

MaskedMatrix TwoFactorization::product() const {
  return maxplus_matmul(u, v);
}

TwoFactorResult fast_stmf(const MaskedMatrix& r, std::size_t rank,
                          const FitConfig& config) {
  if (r.empty()) throw std::invalid_argument("fast_stmf: empty matrix");
  if (rank == 0) throw std::invalid_argument("fast_stmf: rank must be >= 1");
  if (r.observed_count() == 0)
    throw std::invalid_argument("fast_stmf: no observed entries");

  const FitClock clock = FitClock::with_budget(config.budget_seconds);
  std::mt19937_64 rng(config.seed);

  auto [rp, rec] = preprocess(r, rng);

  MaskedMatrix u, v;
  if (config.init == InitStrategy::kRandomAcol) {
    std::tie(u, v) = random_acol_init(rp, rank, rank, rng,
                                      config.acol_sample_count);
  } else {
    if (!config.fixed)
      throw std::invalid_argument("fast_stmf: fixed init without factors");
    // two-factor fixed init travels in (g1, g2); s is ignored
    const FixedInit& fx = *config.fixed;
    if (fx.g1.rows() != r.rows() || fx.g1.cols() != rank ||
        fx.g2.rows() != rank || fx.g2.cols() != r.cols())
      throw std::invalid_argument("fast_stmf: fixed init shapes");
    if (rec.transposed) {
      MaskedMatrix g1fit = fx.g2.transposed();
      MaskedMatrix out(g1fit.rows(), g1fit.cols());
      for (std::size_t i = 0; i < g1fit.rows(); ++i)
        for (std::size_t j = 0; j < g1fit.cols(); ++j)
          out.set(i, j, g1fit.at(rec.perm[i], j),
                  g1fit.observed(rec.perm[i], j));
      u = out;
      v = fx.g1.transposed();
    } else {
      MaskedMatrix out(fx.g1.rows(), fx.g1.cols());
      for (std::size_t i = 0; i < fx.g1.rows(); ++i)
        for (std::size_t j = 0; j < fx.g1.cols(); ++j)
          out.set(i, j, fx.g1.at(rec.perm[i], j),
                  fx.g1.observed(rec.perm[i], j));
      u = out;
      v = fx.g2;
    }
  }

  MetricsRecord record;
  record.method = "FastSTMF";
  record.seed = config.seed;
  record.rank_exceeds_dim = rank >= std::min(r.rows(), r.cols());
  TraceRecorder trace(record.trace, clock);

  double j = residual_b_norm(rp, u, v);
  trace.record_initial(j);

  detail::gated_row_passes(
      rp, u, v, [&] { return residual_b_norm(rp, u, v); }, clock, j, &trace);

  TwoFactorResult out;
  const std::vector<std::size_t> inv = rec.inverse_perm();
  MaskedMatrix u_unperm(u.rows(), u.cols());
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t jj = 0; jj < u.cols(); ++jj)
      u_unperm.set(i, jj, u.at(inv[i], jj), u.observed(inv[i], jj));
  if (rec.transposed) {
    out.factors.u = v.transposed();
    out.factors.v = u_unperm.transposed();
  } else {
    out.factors.u = u_unperm;
    out.factors.v = v;
  }
  out.factors.r = rank;
  record.final_b_norm = j;
  record.elapsed_seconds =
      config.budget_seconds <= 0.0 ? 0.0 : clock.elapsed_seconds();
  record.rmse_a = rmse_observed(out.factors.product(), r);
  out.record = std::move(record);
  return out;
}

namespace {

FitResult consecutive(const MaskedMatrix& r, std::size_t r1, std::size_t r2,
                      const FitConfig& config, bool left_first) {
  if (config.init == InitStrategy::kFixed)
    throw std::invalid_argument(
        "consecutive strategies run with Random Acol initialization; the "
        "phase shapes do not admit a fixed tri-factor init");
  const FitClock clock = FitClock::with_budget(config.budget_seconds);

  FitConfig phase1 = config;
  phase1.budget_seconds = config.budget_seconds / 2.0;
  phase1.seed = derive_seed(config.seed, 1);
  const std::size_t rank1 = left_first ? r1 : r2;
  TwoFactorResult first = fast_stmf(r, rank1, phase1);

  FitConfig phase2 = config;
  phase2.budget_seconds = remaining_budget(clock, config.budget_seconds);
  phase2.seed = derive_seed(config.seed, 2);
  phase2.init = InitStrategy::kRandomAcol;  // phase 2 runs on a factor matrix
  phase2.fixed.reset();

  FitResult out;
  double phase_boundary = clock.elapsed_seconds();
  if (left_first) {
    // factor V (r1×n) into S (r1×r2) and G2 (r2×n)
    TwoFactorResult second = fast_stmf(first.factors.v, r2, phase2);
    out.factors.g1 = first.factors.u;
    out.factors.s = second.factors.u;
    out.factors.g2 = second.factors.v;
    out.record.method = "lrConsecutive";
    shift_phase_trace(out.record.trace, first.record.trace, 0.0, 1);
    shift_phase_trace(out.record.trace, second.record.trace, phase_boundary,
                      2);
  } else {
    // factor U (m×r2) into G1 (m×r1) and S (r1×r2)
    TwoFactorResult second = fast_stmf(first.factors.u, r1, phase2);
    out.factors.g1 = second.factors.u;
    out.factors.s = second.factors.v;
    out.factors.g2 = first.factors.v;
    out.record.method = "rlConsecutive";
    shift_phase_trace(out.record.trace, first.record.trace, 0.0, 1);
    shift_phase_trace(out.record.trace, second.record.trace, phase_boundary,
                      2);
  }
  out.factors.r1 = r1;
  out.factors.r2 = r2;
  out.record.seed = config.seed;
  out.record.rank_exceeds_dim = r1 >= std::min(r.rows(), r.cols()) ||
                                r2 >= std::min(r.rows(), r.cols());
  out.record.elapsed_seconds =
      config.budget_seconds <= 0.0 ? 0.0 : clock.elapsed_seconds();
  out.record.final_b_norm = b_norm(r, out.factors.product());
  out.record.rmse_a = rmse_observed(out.factors.product(), r);
  out.record.extra["phase1_budget_seconds"] = phase1.budget_seconds;
  out.record.extra["phase2_budget_seconds"] = phase2.budget_seconds;
  return out;
}

}  // namespace

FitResult lr_consecutive(const MaskedMatrix& r, std::size_t r1,
                         std::size_t r2, const FitConfig& config) {
  return consecutive(r, r1, r2, config, true);
}

FitResult rl_consecutive(const MaskedMatrix& r, std::size_t r1,
                         std::size_t r2, const FitConfig& config) {
  return consecutive(r, r1, r2, config, false);
}

FitResult tri_stmf(const MaskedMatrix& r, std::size_t r1, std::size_t r2,
                   const FitConfig& config, TriStmfMode mode) {
  if (r.empty()) throw std::invalid_argument("tri_stmf: empty matrix");
  if (r1 == 0 || r2 == 0)
    throw std::invalid_argument("tri_stmf: ranks must be positive");
  if (r.observed_count() == 0)
    throw std::invalid_argument("tri_stmf: no observed entries");
  if (config.init == InitStrategy::kFixed && !config.fixed)
    throw std::invalid_argument("tri_stmf: fixed init without factors");

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
    detail::map_fixed_init(*config.fixed, rec, g1, s, g2);
  }

  MetricsRecord record;
  record.method =
      mode == TriStmfMode::kBothTd ? "triSTMF-BothTD" : "triSTMF-RandomTD";
  record.seed = config.seed;
  record.rank_exceeds_dim = r1 >= std::min(r.rows(), r.cols()) ||
                            r2 >= std::min(r.rows(), r.cols());
  TraceRecorder trace(record.trace, clock);

  double j = residual_b_norm(rp, g1, maxplus_matmul(s, g2));
  trace.record_initial(j);

  std::uint64_t steps = 0;
  std::uint64_t view_evals = 0;
  std::uniform_int_distribution<int> coin(0, 1);

  bool any_accept = true;
  while (any_accept && !clock.expired()) {
    any_accept = false;
    for (std::size_t i = 0; i < rp.rows(); ++i) {
      if (clock.expired()) break;
      ++steps;

      // view true: (G1⊗S, G2); view false: (G1, S⊗G2)
      bool use_left_view;
      TdaResult tda;
      MaskedMatrix uv, vv;
      if (mode == TriStmfMode::kBothTd) {
        MaskedMatrix ul = maxplus_matmul(g1, s);
        TdaResult tl = td_a(rp, ul, g2, i);
        MaskedMatrix vr = maxplus_matmul(s, g2);
        TdaResult tr = td_a(rp, g1, vr, i);
        view_evals += 2;
        double eps_l = 0.0, eps_r = 0.0;
        for (double e : tl.errors) eps_l += e;
        for (double e : tr.errors) eps_r += e;
        use_left_view = eps_l <= eps_r;
        if (use_left_view) {
          uv = std::move(ul);
          vv = g2;
          tda = std::move(tl);
        } else {
          uv = g1;
          vv = std::move(vr);
          tda = std::move(tr);
        }
      } else {
        use_left_view = coin(rng) == 0;
        ++view_evals;
        if (use_left_view) {
          uv = maxplus_matmul(g1, s);
          vv = g2;
        } else {
          uv = g1;
          vv = maxplus_matmul(s, g2);
        }
        tda = td_a(rp, uv, vv, i);
      }

      const std::size_t latent = uv.cols();
      const std::vector<std::size_t> order =
          detail::decreasing_error_order(tda.errors);
      for (std::size_t jj : order) {
        if (clock.expired()) break;
        if (!rp.observed(i, jj)) continue;
        const std::size_t k = detail::argmax_multiplicity(
            tda.row_indices, tda.column_indices[jj], latent);

        bool accepted = false;
        for (int variant = 0; variant < 2 && !accepted; ++variant) {
          if (clock.expired()) break;
          MaskedMatrix u_try = uv;
          MaskedMatrix v_try = vv;
          if (variant == 0)
            slow_ulf(rp, u_try, v_try, i, jj, k);
          else
            slow_urf(rp, u_try, v_try, i, jj, k);

          // split the composite back through the untouched real factor
          MaskedMatrix g1_cand = g1, s_cand = s, g2_cand = g2;
          if (use_left_view) {
            g2_cand = v_try;
            s_cand = greatest_subsolution_left(g1, u_try);
            cap_non_finite(s_cand, &s);
          } else {
            g1_cand = u_try;
            s_cand = greatest_subsolution_right(g2, v_try);
            cap_non_finite(s_cand, &s);
          }
          const double j_new =
              residual_b_norm(rp, g1_cand, maxplus_matmul(s_cand, g2_cand));
          if (j_new < j) {
            g1 = std::move(g1_cand);
            s = std::move(s_cand);
            g2 = std::move(g2_cand);
            j = j_new;
            trace.record(j);
            accepted = true;
          }
        }
        if (accepted) {
          any_accept = true;
          break;
        }
      }
    }
  }

  FitResult out;
  out.factors = postprocess(g1, s, g2, rec);
  record.final_b_norm = j;
  record.elapsed_seconds =
      config.budget_seconds <= 0.0 ? 0.0 : clock.elapsed_seconds();
  record.rmse_a = rmse_observed(out.factors.product(), r);
  record.extra["steps"] = static_cast<double>(steps);
  record.extra["view_evals"] = static_cast<double>(view_evals);
  out.record = std::move(record);
  return out;
}

}  // namespace tristmf
