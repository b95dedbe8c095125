#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "mahler/errors.hpp"

namespace mahler {

using Integer = mpz_class;
using Rational = mpq_class;

inline Integer pow_int(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rational pow_rat(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    Rational r;
    unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), a);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), a);
    if (e < 0) {
        if (base == 0) throw Error("pow_rat: zero base with negative exponent");
        r = Rational(1) / r;
    }
    r.canonicalize();
    return r;
}

/// Parses "p", "p/q" or decimal-free signed integer strings.  Accepts both
/// ASCII '-' and the typographic minus sign U+2212.
inline Rational parse_rational(const std::string& text) {
    std::string s;
    s.reserve(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        // U+2212 encodes as 0xE2 0x88 0x92
        if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
            static_cast<unsigned char>(text[i + 1]) == 0x88 &&
            static_cast<unsigned char>(text[i + 2]) == 0x92) {
            s += '-';
            i += 2;
        } else if (!std::isspace(static_cast<unsigned char>(text[i]))) {
            s += text[i];
        }
    }
    if (s.empty()) throw ParseError("empty rational literal");
    Rational r;
    if (r.set_str(s, 10) != 0) throw ParseError("malformed rational '" + text + "'");
    if (r.get_den() == 0) throw ParseError("malformed rational '" + text + "': zero denominator");
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// log2 |x| as a double; requires x != 0.
inline double log2_abs(const Integer& x) {
    long exp = 0;
    double m = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log2(std::fabs(m)) + static_cast<double>(exp);
}

inline double log2_abs(const Rational& x) {
    return log2_abs(x.get_num()) - log2_abs(x.get_den());
}

inline double log10_abs(const Rational& x) { return log2_abs(x) * 0.30102999566398119521; }

}  // namespace mahler
