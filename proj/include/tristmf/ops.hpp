#pragma once

#include "tristmf/matrix.hpp"

// Matrix-level (max,+)/(min,+) algebra, the partial order and the b-norm.

namespace tristmf {

/// (A ⊗ B)_ij = max_k (A_ik + B_kj).  Both operands must be fully observed.
MaskedMatrix maxplus_matmul(const MaskedMatrix& a, const MaskedMatrix& b);

/// (A ⊗* B)_ij = min_k (A_ik + B_kj).  Masked operand entries are skipped in
/// the reduction; an empty reduction yields the +inf marker (observed).
MaskedMatrix minplus_matmul(const MaskedMatrix& a, const MaskedMatrix& b);

/// Entry (i,j) = -A_ji.  -inf maps to the +inf marker.  A must be fully
/// observed.
MaskedMatrix neg_transpose(const MaskedMatrix& a);

/// A ⪯ B on entries observed in both; unobserved pairs are skipped.
bool matrix_leq(const MaskedMatrix& a, const MaskedMatrix& b);

/// Σ |A_ij - B_ij| over entries observed in both.
double b_norm(const MaskedMatrix& a, const MaskedMatrix& b);

/// Σ |A_ij| over observed entries (the norm of a residual matrix).
double b_norm(const MaskedMatrix& a);

/// ‖R - U ⊗ V‖_b over the observed entries of R, without materialising the
/// product.  U and V must be fully observed.
double residual_b_norm(const MaskedMatrix& r, const MaskedMatrix& u,
                       const MaskedMatrix& v);

}  // namespace tristmf
