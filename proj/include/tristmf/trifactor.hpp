#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "tristmf/matrix.hpp"
#include "tristmf/metrics.hpp"

// The tri-factorization fitter and its building blocks.  R ≈ G1 ⊗ S ⊗ G2 is
// fitted by alternating gated row updates of G1 and G2 with closed-form
// greatest-subsolution refreshes of S, all under a single wall-clock deadline.
// Every trial update is kept only if the full ‖R - G1⊗S⊗G2‖_b decreases, so
// the accepted objective trace is non-increasing by construction.

namespace tristmf {

struct TriFactorization {
  MaskedMatrix g1;  // m×r1, fully observed
  MaskedMatrix s;   // r1×r2
  MaskedMatrix g2;  // r2×n
  std::size_t r1 = 0;
  std::size_t r2 = 0;

  /// G1 ⊗ (S ⊗ G2); the canonical association used for all objectives.
  MaskedMatrix product() const;
};

struct FixedInit {
  MaskedMatrix g1, s, g2;
};

enum class InitStrategy { kRandomAcol, kFixed };

struct FitConfig {
  double budget_seconds = 300.0;
  std::size_t max_outer_iters = static_cast<std::size_t>(-1);
  double rel_improvement_eps = 1e-6;
  /// CFL/CFR yield back to the outer loop once a full pass improves the
  /// objective by less than this relative amount; 0 keeps each phase running
  /// until a pass accepts nothing.
  double phase_rel_eps = 1e-2;
  std::uint64_t seed = 0;
  InitStrategy init = InitStrategy::kRandomAcol;
  std::optional<FixedInit> fixed;  // required when init == kFixed
  std::size_t acol_sample_count = 5;
};

// Orientation bookkeeping: wide means cols >= rows, so square inputs are
// never transposed.  perm maps fit-space rows to input rows:
// R'[i,:] = R_in[perm[i],:] (after the optional transpose).
struct PreprocessRecord {
  bool transposed = false;
  std::vector<std::size_t> perm;

  std::vector<std::size_t> inverse_perm() const;
};

std::pair<MaskedMatrix, PreprocessRecord> preprocess(const MaskedMatrix& r,
                                                     std::mt19937_64& rng);

/// Undoes preprocess on fitted factors; swaps the ranks back when the input
/// had been transposed.
TriFactorization postprocess(const MaskedMatrix& g1, const MaskedMatrix& s,
                             const MaskedMatrix& g2,
                             const PreprocessRecord& rec);

/// Random Acol: each G1 column is the entrywise mean of sample_count random
/// columns of R (observed entries only), each G2 row the mean of
/// sample_count random rows.  Entries with no observed contributor are 0.
std::pair<MaskedMatrix, MaskedMatrix> random_acol_init(const MaskedMatrix& r,
                                                       std::size_t r1,
                                                       std::size_t r2,
                                                       std::mt19937_64& rng,
                                                       std::size_t sample_count);

/// S = (-G1)^T ⊗* R ⊗* (-G2)^T with non-finite entries replaced from
/// fallback (nullptr: 0, the first-call initialization value).
MaskedMatrix compute_middle(const MaskedMatrix& g1, const MaskedMatrix& r,
                            const MaskedMatrix& g2,
                            const MaskedMatrix* fallback);

/// Smallest k attaining max_k (U_ik + V_kj).
std::size_t winner_index(const MaskedMatrix& u, const MaskedMatrix& v,
                         std::size_t i, std::size_t j);

struct TdaResult {
  std::vector<double> errors;  // per column: Σ_s observed |R_sj - (U⊗V)_sj|
  std::vector<std::size_t> row_indices;  // winners along row i
  std::vector<std::vector<std::size_t>> column_indices;  // winners per column
};

TdaResult td_a(const MaskedMatrix& r, const MaskedMatrix& u,
               const MaskedMatrix& v, std::size_t i);

// Rollback state for one trial update: column k of U and row k of V as they
// were before the call.
struct UpdateSnapshot {
  std::size_t k = 0;
  std::vector<double> u_col;
  std::vector<double> v_row;
};

/// Exact path at (i,j,k): U_ik := R_ij - V_kj, then greatest-subsolution
/// refresh of row k of V (empty reductions keep the old entry).
UpdateSnapshot f_ulf(const MaskedMatrix& r, MaskedMatrix& u, MaskedMatrix& v,
                     std::size_t i, std::size_t j, std::size_t k);

/// Mirror: V_kj := R_ij - U_ik, then refresh of column k of U.
UpdateSnapshot f_urf(const MaskedMatrix& r, MaskedMatrix& u, MaskedMatrix& v,
                     std::size_t i, std::size_t j, std::size_t k);

void rollback(MaskedMatrix& u, MaskedMatrix& v, const UpdateSnapshot& snap);

// Wall-clock control shared by all phases of one fit.
class FitClock {
 public:
  static FitClock with_budget(double seconds);
  bool expired() const;
  double elapsed_seconds() const;

 private:
  std::chrono::steady_clock::time_point start_;
  std::chrono::steady_clock::time_point deadline_;
};

// Appends accepted-update samples; keeps timestamps strictly increasing.
class TraceRecorder {
 public:
  TraceRecorder(std::vector<TracePoint>& out, const FitClock& clock)
      : out_(&out), clock_(&clock) {}
  void record(double b_norm);
  /// The initialization sample, pinned at elapsed 0 so budget-0 runs are
  /// reproducible byte for byte.
  void record_initial(double b_norm);
  void set_phase(int phase) { phase_ = phase; }

 private:
  std::vector<TracePoint>* out_;
  const FitClock* clock_;
  int phase_ = 1;
  double last_elapsed_ = -1.0;
};

/// One CFL run: gated row updates of G1 against the frozen composite
/// Q = S ⊗ G2, until a full pass accepts nothing, a pass improves by less
/// than pass_rel_eps relative, or the deadline passes.  current_j is the
/// accepted objective, updated in place.
MaskedMatrix cfl(const MaskedMatrix& r, const MaskedMatrix& g1,
                 const MaskedMatrix& s, const MaskedMatrix& g2,
                 const FitClock& clock, double& current_j,
                 TraceRecorder* trace, double pass_rel_eps = 0.0);

/// Mirror of cfl for G2 with Q = G1 ⊗ S.
MaskedMatrix cfr(const MaskedMatrix& r, const MaskedMatrix& g1,
                 const MaskedMatrix& s, const MaskedMatrix& g2,
                 const FitClock& clock, double& current_j,
                 TraceRecorder* trace, double pass_rel_eps = 0.0);

struct FitResult {
  TriFactorization factors;
  MetricsRecord record;
};

FitResult tri_fast_stmf(const MaskedMatrix& r, std::size_t r1, std::size_t r2,
                        const FitConfig& config);

namespace detail {

/// Greatest V_kt with U_sk ⊗ V_kt ⪯ R_st over observed entries, for every
/// column t; empty reductions keep the current value.
void refresh_v_row(const MaskedMatrix& r, const MaskedMatrix& u,
                   MaskedMatrix& v, std::size_t k);

/// Mirror for column k of U.
void refresh_u_col(const MaskedMatrix& r, MaskedMatrix& u,
                   const MaskedMatrix& v, std::size_t k);

// Shared gated coordinate-descent engine.  Runs passes over the rows of R on
// the working pair (U, V); after every trial update gate() is compared
// against current_j and the trial is rolled back unless it strictly
// decreases.  Stops after a pass with no accepted update or at the deadline.
void gated_row_passes(const MaskedMatrix& r, MaskedMatrix& u, MaskedMatrix& v,
                      const std::function<double()>& gate,
                      const FitClock& clock, double& current_j,
                      TraceRecorder* trace, double pass_rel_eps = 0.0);

std::size_t argmax_multiplicity(const std::vector<std::size_t>& row_indices,
                                const std::vector<std::size_t>& col_indices,
                                std::size_t latent_dim);

std::vector<std::size_t> decreasing_error_order(
    const std::vector<double>& errors);

// Maps fixed-init factors into fit space (transpose + row permutation).
void map_fixed_init(const FixedInit& fixed, const PreprocessRecord& rec,
                    MaskedMatrix& g1, MaskedMatrix& s, MaskedMatrix& g2);

}  // namespace detail

}  // namespace tristmf
