// Directed-rounding evaluation of the strict permanent and factorial
// sandwiches. Every expression is evaluated twice, once rounded entirely
// upward and once downward, so a comparison against the exact integer side
// is conclusive rather than a float artifact.

#include <gmpxx.h>
#include <mpfr.h>

#include "tristoch/census.hpp"

namespace tristoch {

namespace {

struct Hp {
    mpfr_t v;
    explicit Hp(mpfr_prec_t prec) { mpfr_init2(v, prec); }
    ~Hp() { mpfr_clear(v); }
    Hp(const Hp&) = delete;
    Hp& operator=(const Hp&) = delete;
};

mpz_class to_mpz(unsigned __int128 value) {
    mpz_class high(static_cast<unsigned long>(value >> 64));
    mpz_class low(static_cast<unsigned long>(value & ~0ULL));
    return (high << 64) + low;
}

// (d/e)^m with every operation rounded in direction `up`.
void pow_d_over_e(Hp& out, int d, int m, bool up, mpfr_prec_t prec) {
    // Rounding e the opposite way makes d/e round in direction `up`.
    Hp e(prec);
    mpfr_set_ui(e.v, 1, MPFR_RNDN);
    mpfr_exp(e.v, e.v, up ? MPFR_RNDD : MPFR_RNDU);
    mpfr_ui_div(out.v, static_cast<unsigned long>(d), e.v, up ? MPFR_RNDU : MPFR_RNDD);
    mpfr_pow_ui(out.v, out.v, static_cast<unsigned long>(m), up ? MPFR_RNDU : MPFR_RNDD);
}

// (e d)^{m/d} with every operation rounded in direction `up`; e d > 1 so
// pow is increasing in both arguments.
void pow_ed(Hp& out, int d, int m, bool up, mpfr_prec_t prec) {
    mpfr_rnd_t dir = up ? MPFR_RNDU : MPFR_RNDD;
    Hp base(prec), expo(prec);
    mpfr_set_ui(base.v, 1, MPFR_RNDN);
    mpfr_exp(base.v, base.v, dir);
    mpfr_mul_ui(base.v, base.v, static_cast<unsigned long>(d), dir);
    mpfr_set_ui(expo.v, static_cast<unsigned long>(m), MPFR_RNDN);
    mpfr_div_ui(expo.v, expo.v, static_cast<unsigned long>(d), dir);
    mpfr_pow(out.v, base.v, expo.v, dir);
}

StrictVerdict decide_less_than_int(const std::function<void(Hp&, bool, mpfr_prec_t)>& expr,
                                   const mpz_class& rhs) {
    // expr < rhs?
    for (mpfr_prec_t prec : {128, 256, 512, 1024}) {
        Hp hi(prec), lo(prec);
        expr(hi, true, prec);
        expr(lo, false, prec);
        if (mpfr_cmp_z(hi.v, rhs.get_mpz_t()) < 0) return StrictVerdict::ProvenTrue;
        if (mpfr_cmp_z(lo.v, rhs.get_mpz_t()) >= 0) return StrictVerdict::ProvenFalse;
    }
    return StrictVerdict::Undecided;
}

StrictVerdict decide_greater_than_int(const std::function<void(Hp&, bool, mpfr_prec_t)>& expr,
                                      const mpz_class& rhs) {
    // expr > rhs?
    for (mpfr_prec_t prec : {128, 256, 512, 1024}) {
        Hp hi(prec), lo(prec);
        expr(hi, true, prec);
        expr(lo, false, prec);
        if (mpfr_cmp_z(lo.v, rhs.get_mpz_t()) > 0) return StrictVerdict::ProvenTrue;
        if (mpfr_cmp_z(hi.v, rhs.get_mpz_t()) <= 0) return StrictVerdict::ProvenFalse;
    }
    return StrictVerdict::Undecided;
}

double approx(const std::function<void(Hp&, bool, mpfr_prec_t)>& expr) {
    Hp v(128);
    expr(v, true, 128);
    return mpfr_get_d(v.v, MPFR_RNDN);
}

}  // namespace

SandwichCheck permanent_sandwich_check(const ZeroOneMatrix& matrix, int d) {
    if (matrix.regular_degree() != d)
        throw std::invalid_argument("permanent_sandwich_check: matrix is not d-regular");
    SandwichCheck check;
    check.m = matrix.m;
    check.d = d;
    PermanentValue per = permanent(matrix);
    check.per = per.to_string();
    mpz_class per_z = to_mpz(per.value);

    auto lower_expr = [&](Hp& out, bool up, mpfr_prec_t prec) {
        pow_d_over_e(out, d, matrix.m, up, prec);
    };
    auto upper_expr = [&](Hp& out, bool up, mpfr_prec_t prec) {
        Hp a(prec), b(prec);
        pow_d_over_e(a, d, matrix.m, up, prec);
        pow_ed(b, d, matrix.m, up, prec);
        mpfr_mul(out.v, a.v, b.v, up ? MPFR_RNDU : MPFR_RNDD);
    };
    check.lower_strict = decide_less_than_int(lower_expr, per_z);     // (d/e)^m < per
    check.upper_strict = decide_greater_than_int(upper_expr, per_z);  // upper > per
    check.lower = approx(lower_expr);
    check.upper = approx(upper_expr);
    return check;
}

bool stirling_sandwich_check(unsigned m) {
    if (m < 2) throw std::invalid_argument("stirling_sandwich_check needs m >= 2");
    mpz_class factorial;
    mpz_fac_ui(factorial.get_mpz_t(), m);

    auto core = [&](Hp& out, bool up, mpfr_prec_t prec) {
        // (m/e)^m
        Hp e(prec);
        mpfr_set_ui(e.v, 1, MPFR_RNDN);
        mpfr_exp(e.v, e.v, up ? MPFR_RNDD : MPFR_RNDU);
        mpfr_ui_div(out.v, m, e.v, up ? MPFR_RNDU : MPFR_RNDD);
        mpfr_pow_ui(out.v, out.v, m, up ? MPFR_RNDU : MPFR_RNDD);
    };
    auto upper = [&](Hp& out, bool up, mpfr_prec_t prec) {
        mpfr_rnd_t dir = up ? MPFR_RNDU : MPFR_RNDD;
        Hp e(prec), c(prec);
        mpfr_set_ui(e.v, 1, MPFR_RNDN);
        mpfr_exp(e.v, e.v, dir);
        core(c, up, prec);
        mpfr_mul(out.v, e.v, c.v, dir);
        mpfr_mul_ui(out.v, out.v, m, dir);
    };
    return decide_less_than_int(core, factorial) == StrictVerdict::ProvenTrue &&
           decide_greater_than_int(upper, factorial) == StrictVerdict::ProvenTrue;
}

}  // namespace tristoch
