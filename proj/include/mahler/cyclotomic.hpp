#pragma once

#include <map>
#include <mutex>
#include <numeric>
#include <vector>

#include "mahler/polynomial.hpp"

namespace mahler {

/// Product of the distinct prime divisors; rad(1) = 1.
inline long rad(long n) {
    if (n < 1) throw Error("rad: need n >= 1");
    long r = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            r *= p;
            while (n % p == 0) n /= p;
        }
    }
    return r * (n > 1 ? n : 1);
}

inline long totient(long n) {
    if (n < 1) throw Error("totient: need n >= 1");
    long result = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            result -= result / p;
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

/// r(m, n): the largest divisor of m coprime to n, and s = m / r (whose prime
/// factors all divide n).
inline std::pair<long, long> r_s_split(long m, long n) {
    if (m < 1 || n < 1) throw Error("r_s_split: need m, n >= 1");
    long r = m;
    while (true) {
        long g = std::gcd(r, n);
        if (g == 1) break;
        r /= g;
    }
    return {r, m / r};
}

/// The n-th cyclotomic polynomial, by exact division of z^n - 1 by the
/// lower-index factors; results memoized.
inline Polynomial cyclotomic_poly(long n) {
    if (n < 1) throw Error("cyclotomic_poly: need n >= 1");
    static std::map<long, Polynomial> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    std::vector<Rational> xn(static_cast<size_t>(n) + 1, Rational(0));
    xn[0] = -1;
    xn[static_cast<size_t>(n)] = 1;
    Polynomial result{std::move(xn)};
    for (long d = 1; d < n; ++d) {
        if (n % d == 0) result = poly_divexact(result, cyclotomic_poly(d));
    }
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(n, result);
    return result;
}

/// Indices of the factorization Phi_n(z^d) = prod_{r | r(d,n)} Phi_{r n s(d,n)},
/// sorted ascending.
inline std::vector<long> phi_compose_factorization(long n, long d) {
    auto [r_dn, s_dn] = r_s_split(d, n);
    std::vector<long> out;
    for (long r = 1; r <= r_dn; ++r)
        if (r_dn % r == 0) out.push_back(r * n * s_dn);
    return out;
}

/// Largest e with P^e | Q, by repeated exact division.
inline long sigma_multiplicity(const Polynomial& P, const Polynomial& Q) {
    if (P.degree() <= 0) throw Error("sigma_multiplicity: P must be non-constant");
    if (Q.is_zero()) throw Error("sigma_multiplicity: Q must be nonzero");
    long e = 0;
    Polynomial rest = Q;
    while (true) {
        auto [quo, rem] = poly_divrem(rest, P);
        if (!rem.is_zero()) return e;
        rest = std::move(quo);
        ++e;
        if (rest.is_constant()) return e;
    }
}

}  // namespace mahler
