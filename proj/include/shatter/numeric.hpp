#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace shatter {

/// Exact rational. All probabilities in the CSP layer are of this type;
/// floating point never enters the satisfiability arguments.
using Rat = mpq_class;

/// num/den with canonicalization (mpq_class does not reduce on its own).
Rat make_rat(long num, long den);

/// r^k for integer k (k < 0 inverts; r must be nonzero then).
Rat rat_pow(const Rat& r, long k);

/// Exact q^k as an integer-valued rational, k >= 0.
Rat rat_ipow(long q, long k);

double rat_to_double(const Rat& r);

std::string rat_to_string(const Rat& r);

enum class Cmp { Less, Equal, Greater };

struct NumericConfig {
    unsigned start_bits = 64;    ///< first interval precision tried
    unsigned cap_bits = 1 << 14; ///< hard cap; exceeded -> precision_error
};

/// Compares an exact rational `lhs` against `scale * e^k` (scale a nonnegative
/// rational, k an integer). For k != 0 and nonzero operands the target is
/// irrational, so no tie exists and the result is Less or Greater; the
/// comparison runs in interval arithmetic with precision escalating from
/// start_bits until the interval excludes lhs. Equal can only be returned when
/// both sides are rational (k == 0 or a side is zero). Throws precision_error
/// at the cap with a diagnostic instead of guessing.
Cmp compare_rat_e_power(const Rat& lhs, long k, const Rat& scale,
                        const NumericConfig& cfg = {},
                        unsigned* bits_used = nullptr);

/// Double approximation of scale * e^k (for margin reports only).
double approx_e_power(long k, const Rat& scale);

/// Exact rational binary approximation of e^k at the given precision
/// (round-to-nearest mantissa*2^exp). Used by stress tests to construct
/// near-threshold inputs.
Rat rat_near_e_power(long k, unsigned bits);

}  // namespace shatter
