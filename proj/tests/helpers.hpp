#pragma once

#include <string>

#include "simquad/precision.hpp"

namespace simquad::testing {

inline ExtReal rel_err(const ExtReal& got, const ExtReal& want) {
  if (want.is_zero()) return abs(got);
  return abs(got - want) / abs(want);
}

// |got - want| <= 10^log10_tol * max(1, |want|)
inline bool close(const ExtReal& got, const ExtReal& want, int log10_tol,
                  const PrecisionContext& ctx) {
  ExtReal scale = max(ExtReal::from_long(1, ctx.working_bits()), abs(want));
  return abs(got - want) <= ctx.pow10(log10_tol) * scale;
}

// Published tables mix round-to-nearest and truncation in their final
// printed digit; accept either.
inline bool matches_printed(const ExtReal& value, const std::string& printed, int fractional) {
  return value.fixed(fractional, MPFR_RNDN) == printed ||
         value.fixed(fractional, MPFR_RNDZ) == printed;
}

}  // namespace simquad::testing
