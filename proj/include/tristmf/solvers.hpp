#pragma once

#include "tristmf/matrix.hpp"

// Greatest-subsolution solvers.  Each returns the componentwise-maximal X
// with the stated product ⪯ C on the observed entries of C; masked entries
// of C impose no constraint.  Entries of the result that end up unconstrained
// carry the +inf marker, which the caller must replace before use.

namespace tristmf {

/// Greatest X with A ⊗ X ⪯ C, i.e. X = (-A)^T ⊗* C.  A fully observed, m×n;
/// C m×p, possibly masked; X is n×p.
MaskedMatrix greatest_subsolution_left(const MaskedMatrix& a,
                                       const MaskedMatrix& c);

/// Greatest Z with Z ⊗ B ⪯ C, i.e. Z = C ⊗* (-B)^T.  B fully observed, p×q;
/// C m×q; Z is m×p.
MaskedMatrix greatest_subsolution_right(const MaskedMatrix& b,
                                        const MaskedMatrix& c);

/// Greatest X with A ⊗ X ⊗ B ⪯ C, i.e. X = (-A)^T ⊗* C ⊗* (-B)^T.
/// A m×n, B p×q, C m×q; X is n×p.
MaskedMatrix greatest_subsolution_sandwich(const MaskedMatrix& a,
                                           const MaskedMatrix& b,
                                           const MaskedMatrix& c);

/// Replaces non-finite entries of m with the matching entry of fallback,
/// or with fallback_value when fallback is null.
void cap_non_finite(MaskedMatrix& m, const MaskedMatrix* fallback,
                    double fallback_value = 0.0);

}  // namespace tristmf
