#pragma once

#include "tristmf/trifactor.hpp"

// Tropical comparison strategies: the plain two-factor fitter, the two
// consecutive strategies built from it, and the slow composite-view strategy.
// All share the acceptance gate, so every accepted trace is non-increasing.

namespace tristmf {

struct TwoFactorization {
  MaskedMatrix u;  // m×r
  MaskedMatrix v;  // r×n
  std::size_t r = 0;

  MaskedMatrix product() const;
};

struct TwoFactorResult {
  TwoFactorization factors;
  MetricsRecord record;
};

/// Two-factor fitter: gated row updates on (U, V) under the budget, with the
/// same preprocessing/postprocessing as the tri-factor fitter.
TwoFactorResult fast_stmf(const MaskedMatrix& r, std::size_t rank,
                          const FitConfig& config);

/// Phase 1 factors R (rank r1, half the budget); phase 2 factors V (rank r2,
/// the remaining budget): G1 = U, (S, G2) from V.
FitResult lr_consecutive(const MaskedMatrix& r, std::size_t r1,
                         std::size_t r2, const FitConfig& config);

/// Mirror: phase 1 at rank r2, then U is factored into (G1, S); G2 = V.
FitResult rl_consecutive(const MaskedMatrix& r, std::size_t r1, std::size_t r2,
                         const FitConfig& config);

enum class TriStmfMode { kBothTd, kRandomTd };

/// Slow strategy on the composite two-factor views (G1⊗S, G2) and
/// (G1, S⊗G2).  kBothTd scores both views per step and takes the smaller
/// error; kRandomTd picks one view uniformly.  The updated composite is
/// split back through a one-sided greatest subsolution and the result is
/// kept only if the tri-product b-norm decreases.
FitResult tri_stmf(const MaskedMatrix& r, std::size_t r1, std::size_t r2,
                   const FitConfig& config, TriStmfMode mode);

/// Seed for an internal phase, derived so that each phase is a pure function
/// of its own inputs.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace tristmf
