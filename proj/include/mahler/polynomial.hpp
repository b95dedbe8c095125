#pragma once

#include <algorithm>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "mahler/degree.hpp"
#include "mahler/rational.hpp"

namespace mahler {

/// Dense univariate polynomial over Q in canonical form: coefficient i is the
/// coefficient of z^i and the top stored coefficient is nonzero.  The zero
/// polynomial stores no coefficients and has degree minus-infinity.
class Polynomial {
  public:
    Polynomial() = default;
    Polynomial(const Rational& c) {
        if (c != 0) coeff_.push_back(c);
    }
    Polynomial(long c) : Polynomial(Rational(c)) {}
    explicit Polynomial(std::vector<Rational> coeffs) : coeff_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<long> coeffs) {
        for (long c : coeffs) coeff_.emplace_back(c);
        trim();
    }
    Polynomial(std::initializer_list<Rational> coeffs) : coeff_(coeffs) { trim(); }

    /// Monomial c * z^e.
    static Polynomial monomial(const Rational& c, size_t e) {
        if (c == 0) return Polynomial();
        std::vector<Rational> v(e + 1);
        v[e] = c;
        return Polynomial(std::move(v));
    }
    static Polynomial x() { return monomial(1, 1); }

    bool is_zero() const { return coeff_.empty(); }
    bool is_constant() const { return coeff_.size() <= 1; }

    Degree degree() const {
        return coeff_.empty() ? Degree::minus_infinity()
                              : Degree(static_cast<long>(coeff_.size()) - 1);
    }

    /// Coefficient of z^i (zero outside the stored range).
    const Rational& coeff(long i) const {
        static const Rational kZero(0);
        if (i < 0 || i >= static_cast<long>(coeff_.size())) return kZero;
        return coeff_[static_cast<size_t>(i)];
    }

    const Rational& leading() const {
        if (coeff_.empty()) throw Error("leading coefficient of zero polynomial");
        return coeff_.back();
    }

    const std::vector<Rational>& coefficients() const { return coeff_; }

    /// Number of trailing zero coefficients (valuation at z = 0); 0 for the
    /// zero polynomial by convention of the callers that guard it.
    long valuation() const {
        for (size_t i = 0; i < coeff_.size(); ++i)
            if (coeff_[i] != 0) return static_cast<long>(i);
        return 0;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.coeff_ == b.coeff_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& c : r.coeff_) c = -c;
        return r;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<Rational> v(std::max(a.coeff_.size(), b.coeff_.size()));
        for (size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) + b.coeff(i);
        return Polynomial(std::move(v));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<Rational> v(std::max(a.coeff_.size(), b.coeff_.size()));
        for (size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) - b.coeff(i);
        return Polynomial(std::move(v));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<Rational> v(a.coeff_.size() + b.coeff_.size() - 1, Rational(0));
        for (size_t i = 0; i < a.coeff_.size(); ++i) {
            if (a.coeff_[i] == 0) continue;
            for (size_t j = 0; j < b.coeff_.size(); ++j) {
                if (b.coeff_[j] == 0) continue;
                v[i + j] += a.coeff_[i] * b.coeff_[j];
            }
        }
        return Polynomial(std::move(v));
    }
    friend Polynomial operator*(const Polynomial& a, const Rational& s) {
        if (s == 0) return Polynomial();
        Polynomial r = a;
        for (auto& c : r.coeff_) c *= s;
        return r;
    }
    friend Polynomial operator*(const Rational& s, const Polynomial& a) { return a * s; }

    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    /// Multiply by z^k.
    Polynomial shifted(size_t k) const {
        if (is_zero() || k == 0) return *this;
        std::vector<Rational> v(coeff_.size() + k, Rational(0));
        std::copy(coeff_.begin(), coeff_.end(), v.begin() + static_cast<long>(k));
        return Polynomial(std::move(v));
    }

    /// p(z^e) for e >= 1.
    Polynomial compose_power(unsigned long e) const {
        if (e == 0) throw Error("compose_power: exponent must be >= 1");
        if (is_zero() || e == 1) return *this;
        std::vector<Rational> v((coeff_.size() - 1) * e + 1, Rational(0));
        for (size_t i = 0; i < coeff_.size(); ++i) v[i * e] = coeff_[i];
        return Polynomial(std::move(v));
    }

    Polynomial pow(unsigned long e) const {
        Polynomial r(1), base = *this;
        while (e) {
            if (e & 1) r *= base;
            base = (e >>= 1) ? base * base : base;
        }
        return r;
    }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (size_t i = coeff_.size(); i-- > 0;) acc = acc * x + coeff_[i];
        return acc;
    }
    Rational eval(const Integer& x) const { return eval(Rational(x)); }

    Polynomial derivative() const {
        if (coeff_.size() <= 1) return Polynomial();
        std::vector<Rational> v(coeff_.size() - 1);
        for (size_t i = 1; i < coeff_.size(); ++i) v[i - 1] = coeff_[i] * Rational(static_cast<long>(i));
        return Polynomial(std::move(v));
    }

    Polynomial monic() const {
        if (is_zero()) throw Error("monic of zero polynomial");
        return *this * (Rational(1) / leading());
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::string s;
        for (size_t i = coeff_.size(); i-- > 0;) {
            if (coeff_[i] == 0) continue;
            if (!s.empty()) s += " + ";
            s += coeff_[i].get_str();
            if (i >= 1) s += "*z" + (i > 1 ? "^" + std::to_string(i) : std::string());
        }
        return s;
    }

  private:
    void trim() {
        while (!coeff_.empty() && coeff_.back() == 0) coeff_.pop_back();
    }

    std::vector<Rational> coeff_;
};

/// Quotient and remainder with a = q*b + r and deg r < deg b.
inline std::pair<Polynomial, Polynomial> poly_divrem(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw Error("zero divisor");
    if (a.degree() < b.degree()) return {Polynomial(), a};
    long db = b.degree().value();
    std::vector<Rational> rem(a.coefficients());
    std::vector<Rational> quo(rem.size() - static_cast<size_t>(db), Rational(0));
    const Rational& lead = b.leading();
    for (long i = static_cast<long>(rem.size()) - 1; i >= db; --i) {
        if (rem[static_cast<size_t>(i)] == 0) continue;
        Rational c = rem[static_cast<size_t>(i)] / lead;
        quo[static_cast<size_t>(i - db)] = c;
        for (long j = 0; j <= db; ++j) {
            rem[static_cast<size_t>(i - db + j)] -= c * b.coeff(j);
        }
    }
    return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

inline Polynomial poly_rem(const Polynomial& a, const Polynomial& b) {
    return poly_divrem(a, b).second;
}

/// Exact division; throws if the remainder is nonzero.
inline Polynomial poly_divexact(const Polynomial& a, const Polynomial& b) {
    auto [q, r] = poly_divrem(a, b);
    if (!r.is_zero()) throw Error("poly_divexact: division not exact");
    return q;
}

inline bool poly_divides(const Polynomial& d, const Polynomial& a) {
    if (d.is_zero()) return a.is_zero();
    return poly_rem(a, d).is_zero();
}

/// Least common multiple of the coefficient denominators.
inline Integer denominator_lcm(const Polynomial& p) {
    Integer l(1);
    for (const auto& c : p.coefficients()) {
        Integer g;
        mpz_lcm(g.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
        l = g;
    }
    return l;
}

/// Gcd of the numerators of an integer-coefficient polynomial.
inline Integer integer_content(const Polynomial& p) {
    Integer g(0);
    for (const auto& c : p.coefficients()) {
        Integer n;
        mpz_gcd(n.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
        g = n;
        if (g == 1) break;
    }
    return g;
}

/// Integer-coefficient scalar multiple of p with content 1 and positive
/// leading coefficient.
inline Polynomial clear_denominators(const Polynomial& p) {
    if (p.is_zero()) throw Error("clear_denominators of zero polynomial");
    Polynomial q = p * Rational(denominator_lcm(p));
    Integer content = integer_content(q);
    q = q * (Rational(1) / Rational(content));
    if (q.leading() < 0) q = -q;
    return q;
}

namespace detail {

/// Primitive pseudo-remainder sequence over the cleared-denominator images;
/// keeps intermediate coefficients at subresultant scale.
inline Polynomial primitive_prs_gcd(Polynomial a, Polynomial b);

}  // namespace detail

/// Fraction-free pseudo-division: scale * a = quo * b + rem with
/// scale = lc(b)^(deg a - deg b + 1).  Integer inputs stay integer
/// throughout, which keeps remainder sequences at subresultant size.
struct PseudoDivision {
    Polynomial quo, rem;
    Rational scale;
};

inline PseudoDivision pseudo_divrem(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw Error("zero divisor");
    if (a.degree() < b.degree()) return {Polynomial(), a, Rational(1)};
    const Rational l = b.leading();
    long delta = a.degree().value() - b.degree().value();
    long steps = delta + 1;
    Polynomial q, r = a;
    while (!r.is_zero() && r.degree() >= b.degree()) {
        Polynomial t = Polynomial::monomial(
            r.leading(), static_cast<size_t>(r.degree().value() - b.degree().value()));
        q = q * l + t;
        r = r * l - t * b;
        --steps;
    }
    if (steps > 0) {
        Rational ls = pow_rat(l, steps);
        q = q * ls;
        r = r * ls;
    }
    return {std::move(q), std::move(r), pow_rat(l, delta + 1)};
}

namespace detail {

/// Primitive pseudo-remainder sequence over the cleared-denominator images;
/// keeps intermediate coefficients at subresultant scale.
inline Polynomial primitive_prs_gcd(Polynomial a, Polynomial b) {
    a = clear_denominators(a);
    b = clear_denominators(b);
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        if (b.is_constant()) return Polynomial(1);
        Polynomial r = pseudo_divrem(a, b).rem;
        if (!r.is_zero()) r = clear_denominators(r);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

}  // namespace detail

/// Monic greatest common divisor.
inline Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() && b.is_zero()) throw Error("undefined gcd");
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    return detail::primitive_prs_gcd(a, b).monic();
}

/// z^n mod m computed by repeated squaring (m non-constant).
inline Polynomial powmod_x(const Integer& n, const Polynomial& m) {
    if (m.degree() <= 0) throw Error("powmod_x: modulus must be non-constant");
    Polynomial result(1);
    Polynomial base = poly_rem(Polynomial::x(), m);
    Integer e = n;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = poly_rem(result * base, m);
        e >>= 1;
        if (e > 0) base = poly_rem(base * base, m);
    }
    return result;
}

/// p(z^n) mod m without expanding the composition.
inline Polynomial compose_power_mod(const Polynomial& p, const Integer& n, const Polynomial& m) {
    Polynomial xe = powmod_x(n, m);
    Polynomial acc;
    for (size_t i = p.coefficients().size(); i-- > 0;) {
        acc = poly_rem(acc * xe, m) + Polynomial(p.coefficients()[i]);
    }
    return acc;
}

}  // namespace mahler
