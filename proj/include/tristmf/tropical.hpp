#pragma once

#include <cmath>
#include <limits>

// Scalar (max,+) and (min,+) arithmetic over the extended reals.
//
// The carrier is R ∪ {-inf}: -inf is the tropical zero (neutral for ⊕,
// absorbing for ⊗).  +inf never appears in stored data; it is the transient
// marker produced by negating -inf inside min-plus reductions and by empty
// masked reductions, and callers of the subsolution solvers are expected to
// replace it before the value escapes.

namespace tristmf {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Tropical addition: max.
inline double trop_add(double a, double b) { return a > b ? a : b; }

/// Tropical multiplication: ordinary +, with -inf absorbing (even against
/// the +inf marker, where IEEE addition would produce NaN).
inline double trop_mul(double a, double b) {
  if (a == kNegInf || b == kNegInf) return kNegInf;
  return a + b;
}

/// (min,+) multiplication term: +inf absorbs; it means "no constraint".
inline double minplus_mul(double a, double b) {
  if (a == kPosInf || b == kPosInf) return kPosInf;
  return a + b;
}

inline bool is_finite(double v) { return std::isfinite(v); }

}  // namespace tristmf
