#ifndef TRISTOCH_RATIONAL_HPP
#define TRISTOCH_RATIONAL_HPP

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace tristoch {

// Exact rational scalar. mpq_class keeps values canonical: denominator > 0,
// gcd(|num|, den) = 1. All array arithmetic in this library is exact; floats
// appear only inside the LP solver and the high-precision bound checks.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline const Rational& rat_zero() {
    static const Rational z(0);
    return z;
}

inline Rational rat_half() { return rat(1, 2); }

// Canonical text form: "p" when the denominator is 1, otherwise "p/q".
inline std::string rat_to_string(const Rational& q) {
    return q.get_str();
}

inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    Rational q;
    if (q.set_str(text, 10) != 0)
        throw std::invalid_argument("bad rational literal: '" + text + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator in rational literal: '" + text + "'");
    q.canonicalize();
    return q;
}

}  // namespace tristoch

#endif
