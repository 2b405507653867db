#include "shatter/numeric.hpp"

#include <mpfr.h>

#include <sstream>
#include <stdexcept>

#include "shatter/util.hpp"

namespace shatter {

Rat make_rat(long num, long den) {
    if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat rat_pow(const Rat& r, long k) {
    if (k == 0) return Rat(1);
    bool invert = k < 0;
    unsigned long e = invert ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
    if (invert && r == 0) throw std::invalid_argument("rat_pow: 0 to a negative power");
    Rat out;
    mpz_pow_ui(out.get_num_mpz_t(), r.get_num().get_mpz_t(), e);
    mpz_pow_ui(out.get_den_mpz_t(), r.get_den().get_mpz_t(), e);
    if (invert) {
        Rat inv;
        mpq_inv(inv.get_mpq_t(), out.get_mpq_t());
        return inv;
    }
    return out;
}

Rat rat_ipow(long q, long k) {
    if (q < 0 || k < 0) throw std::invalid_argument("rat_ipow: negative input");
    Rat out;
    mpz_ui_pow_ui(out.get_num_mpz_t(), static_cast<unsigned long>(q),
                  static_cast<unsigned long>(k));
    return out;
}

double rat_to_double(const Rat& r) { return r.get_d(); }

std::string rat_to_string(const Rat& r) {
    std::ostringstream out;
    out << r;
    return out.str();
}

namespace {

// RAII wrapper so every early return cleans up.
struct MpfrVal {
    mpfr_t v;
    explicit MpfrVal(unsigned bits) { mpfr_init2(v, bits); }
    ~MpfrVal() { mpfr_clear(v); }
    MpfrVal(const MpfrVal&) = delete;
    MpfrVal& operator=(const MpfrVal&) = delete;
};

}  // namespace

Cmp compare_rat_e_power(const Rat& lhs, long k, const Rat& scale,
                        const NumericConfig& cfg, unsigned* bits_used) {
    if (scale < 0) throw std::invalid_argument("compare_rat_e_power: negative scale");
    auto record = [&](unsigned b) {
        if (bits_used) *bits_used = b;
    };
    if (scale == 0) {
        record(0);
        int c = cmp(lhs, Rat(0));
        return c < 0 ? Cmp::Less : (c > 0 ? Cmp::Greater : Cmp::Equal);
    }
    if (k == 0) {
        record(0);
        int c = cmp(lhs, scale);
        return c < 0 ? Cmp::Less : (c > 0 ? Cmp::Greater : Cmp::Equal);
    }
    // Target scale * e^k is strictly positive and irrational.
    if (lhs <= 0) {
        record(0);
        return Cmp::Less;
    }
    for (unsigned bits = cfg.start_bits; bits <= cfg.cap_bits; bits *= 4) {
        MpfrVal lo(bits), hi(bits);
        mpfr_set_si(lo.v, k, MPFR_RNDD);
        mpfr_exp(lo.v, lo.v, MPFR_RNDD);
        mpfr_mul_q(lo.v, lo.v, scale.get_mpq_t(), MPFR_RNDD);
        mpfr_set_si(hi.v, k, MPFR_RNDU);
        mpfr_exp(hi.v, hi.v, MPFR_RNDU);
        mpfr_mul_q(hi.v, hi.v, scale.get_mpq_t(), MPFR_RNDU);
        if (mpfr_cmp_q(lo.v, lhs.get_mpq_t()) > 0) {
            record(bits);
            return Cmp::Less;  // lhs < lower bound <= target
        }
        if (mpfr_cmp_q(hi.v, lhs.get_mpq_t()) < 0) {
            record(bits);
            return Cmp::Greater;  // lhs > upper bound >= target
        }
    }
    throw precision_error(
        "compare_rat_e_power: undecided at precision cap (lhs=" + rat_to_string(lhs) +
        ", target=" + rat_to_string(scale) + "*e^" + std::to_string(k) +
        ", cap=" + std::to_string(cfg.cap_bits) + " bits)");
}

double approx_e_power(long k, const Rat& scale) {
    MpfrVal x(64);
    mpfr_set_si(x.v, k, MPFR_RNDN);
    mpfr_exp(x.v, x.v, MPFR_RNDN);
    mpfr_mul_q(x.v, x.v, scale.get_mpq_t(), MPFR_RNDN);
    return mpfr_get_d(x.v, MPFR_RNDN);
}

Rat rat_near_e_power(long k, unsigned bits) {
    MpfrVal x(bits);
    mpfr_set_si(x.v, k, MPFR_RNDN);
    mpfr_exp(x.v, x.v, MPFR_RNDN);
    mpz_class mant;
    mpfr_exp_t e2 = mpfr_get_z_2exp(mant.get_mpz_t(), x.v);
    Rat out(mant);
    if (e2 >= 0) {
        mpz_class shift;
        mpz_ui_pow_ui(shift.get_mpz_t(), 2, static_cast<unsigned long>(e2));
        out *= Rat(shift);
    } else {
        mpz_class shift;
        mpz_ui_pow_ui(shift.get_mpz_t(), 2, static_cast<unsigned long>(-e2));
        out /= Rat(shift);
    }
    out.canonicalize();
    return out;
}

}  // namespace shatter
