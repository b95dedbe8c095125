#pragma once

#include <map>
#include <string>
#include <vector>

#include "mahler/polynomial.hpp"

namespace mahler {

/// Seed assignments for free series coefficients, keyed by the index k of
/// z^-k in f(z) = sum f_k z^-k.
using SeedMap = std::map<long, Rational>;

/// The functional equation f(z) = (A(z) f(z^d) + C(z)) / B(z).
///
/// A, B, C are stored jointly rescaled to integer coefficients with overall
/// content 1 and positive leading coefficient of B; the rescaling leaves the
/// equation unchanged.  C = 0 is permitted only when `allow_homogeneous` is
/// set (the homogeneous case is handled by prior work; the engine supports it
/// for transforms and reductions).
class MahlerEquation {
  public:
    MahlerEquation(Polynomial A, Polynomial B, Polynomial C, long d,
                   bool allow_homogeneous = false)
        : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), d_(d) {
        if (d_ < 2) throw Error("MahlerEquation: radix d must be >= 2");
        if (A_.is_zero() || B_.is_zero())
            throw Error("MahlerEquation: A(z) B(z) must be nonzero");
        if (C_.is_zero() && !allow_homogeneous)
            throw Error("MahlerEquation: C(z) = 0 requires the homogeneous opt-in");
        normalize();
    }

    const Polynomial& A() const { return A_; }
    const Polynomial& B() const { return B_; }
    const Polynomial& C() const { return C_; }
    long d() const { return d_; }
    bool homogeneous() const { return C_.is_zero(); }

    long r_a() const { return A_.degree().value(); }
    long r_b() const { return B_.degree().value(); }
    /// Degree of C, or -1 for C = 0 (callers in the homogeneous regime treat
    /// the C-side as absent).
    long r_c() const { return C_.degree().value_or(-1); }

    const Rational& alpha() const { return A_.leading(); }
    const Rational& beta() const { return B_.leading(); }

    friend bool operator==(const MahlerEquation& x, const MahlerEquation& y) {
        return x.d_ == y.d_ && x.A_ == y.A_ && x.B_ == y.B_ && x.C_ == y.C_;
    }

    std::string str() const {
        return "f(z) = ((" + A_.str() + ")*f(z^" + std::to_string(d_) + ") + (" + C_.str() +
               ")) / (" + B_.str() + ")";
    }

  private:
    void normalize() {
        Integer l = denominator_lcm(A_);
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), denominator_lcm(B_).get_mpz_t());
        if (!C_.is_zero())
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), denominator_lcm(C_).get_mpz_t());
        Rational scale{l};
        A_ = A_ * scale;
        B_ = B_ * scale;
        C_ = C_ * scale;
        Integer g = integer_content(A_);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), integer_content(B_).get_mpz_t());
        if (!C_.is_zero())
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), integer_content(C_).get_mpz_t());
        Rational inv = Rational(1) / Rational(g);
        if (B_.leading() < 0) inv = -inv;
        A_ = A_ * inv;
        B_ = B_ * inv;
        C_ = C_ * inv;
    }

    Polynomial A_, B_, C_;
    long d_;
};

/// Every integer K consistent with the degree balance
///   deg(B) + K = deg(A f(z^d) + C),
/// i.e. r_b + K = max(r_a + dK, r_c), including the collapse case
/// r_a + dK = r_c where leading cancellation can push the right side lower.
/// Sorted descending; empty when no degree balances.
inline std::vector<long> infer_degree(const MahlerEquation& eq) {
    long ra = eq.r_a(), rb = eq.r_b(), rc = eq.r_c(), d = eq.d();
    long w = ra + rb + std::max(rc, 0L) + 2;
    std::vector<long> out;
    for (long K = w; K >= -w; --K) {
        long lhs = rb + K;
        long a_side = ra + d * K;
        bool c_present = !eq.homogeneous();
        long rhs = c_present ? std::max(a_side, rc) : a_side;
        if (lhs == rhs) {
            out.push_back(K);
        } else if (c_present && a_side == rc && lhs < rc) {
            out.push_back(K);  // max may collapse through cancellation
        }
    }
    return out;
}

}  // namespace mahler
