#pragma once

#include <optional>
#include <vector>

#include "mahler/cfrac.hpp"

namespace mahler {

inline Rational frac(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Consecutive elements [u, v] of Phi(f), the set of denominator degrees.
struct Gap {
    long u = 0, v = 0;
    long size() const { return v - u; }
    friend bool operator==(const Gap& a, const Gap& b) { return a.u == b.u && a.v == b.v; }
};

/// Big gap test: (v - u)(d - 1) > r_a + r_b.
inline bool is_big_gap(const Gap& g, const MahlerEquation& eq) {
    return g.size() * (eq.d() - 1) > eq.r_a() + eq.r_b();
}

struct GapRecord {
    Gap gap;
    Convergent conv;  // the convergent with deg q = u
    bool big = false;
    bool primitive = false;
    std::optional<size_t> successor_of;  // index of the predecessor big gap
};

/// All gaps [d_k, d_{k+1}] with d_k <= up_to_u, in order.  The expansion must
/// be certified past up_to_u so the gap list is complete.
inline std::vector<GapRecord> enumerate_gaps(const CFExpansion& cf, long up_to_u) {
    if (!cf.terminated() && cf.max_den_degree() <= up_to_u)
        throw Error("enumerate_gaps: expansion not certified past degree " +
                    std::to_string(up_to_u));
    std::vector<GapRecord> out;
    const auto& cv = cf.convergents();
    for (size_t k = 0; k + 1 < cv.size(); ++k) {
        if (cv[k].den_degree > up_to_u) break;
        GapRecord rec;
        rec.gap = {cv[k].den_degree, cv[k + 1].den_degree};
        rec.conv = cv[k];
        out.push_back(std::move(rec));
    }
    return out;
}

/// Simplified Lemma-2.1 successor data for a big gap.
struct Successor {
    Polynomial p, q;  // the new convergent, gcd removed
    Gap gap;
    long r_g = 0;  // degree of the removed gcd
};

namespace detail {

/// gcd(P, B q_u(z^d)) where P = A p_u(z^d) + C q_u(z^d), computed against the
/// small support polynomial T = B * gcd(A, q_u(z^d)): every irreducible
/// factor of the gcd divides T (p_u, q_u coprime), and its degree is at most
/// r_a + r_b, so reducing mod T^(r_a+r_b+1) decides it exactly.
inline Polynomial successor_gcd(const Polynomial& P, const Polynomial& q_comp,
                                const MahlerEquation& eq) {
    Polynomial H(1);
    if (eq.r_a() >= 1) {
        Polynomial qc_mod_a = poly_rem(q_comp, eq.A());
        H = qc_mod_a.is_zero() ? eq.A().monic() : poly_gcd(eq.A(), qc_mod_a);
    }
    Polynomial T = eq.B() * H;
    if (T.degree() <= 0) return Polynomial(1);
    unsigned long cap = static_cast<unsigned long>(eq.r_a() + eq.r_b() + 1);
    Polynomial W = T.pow(cap);
    Polynomial gp_red = poly_rem(P, W);
    Polynomial gq_red = poly_rem(eq.B() * poly_rem(q_comp, W), W);
    Polynomial GP = gp_red.is_zero() ? W.monic() : poly_gcd(gp_red, W);
    Polynomial GQ = gq_red.is_zero() ? W.monic() : poly_gcd(gq_red, W);
    if (GP.degree() <= 0 || GQ.degree() <= 0) return Polynomial(1);
    return poly_gcd(GP, GQ);
}

inline Successor successor_core(const Polynomial& p_u, const Polynomial& q_u, const Gap& gap,
                                const MahlerEquation& eq) {
    long d = eq.d();
    Polynomial p_comp = p_u.compose_power(static_cast<unsigned long>(d));
    Polynomial q_comp = q_u.compose_power(static_cast<unsigned long>(d));
    Polynomial P = eq.A() * p_comp + eq.C() * q_comp;
    Polynomial G = successor_gcd(P, q_comp, eq);
    Successor s;
    s.r_g = G.degree().value_or(0);
    if (s.r_g == 0) {
        s.p = std::move(P);
        s.q = eq.B() * q_comp;
    } else {
        s.p = poly_divexact(P, G);
        s.q = poly_divexact(eq.B() * q_comp, G);
    }
    s.gap = {d * gap.u + eq.r_b() - s.r_g, d * gap.v - eq.r_a() + s.r_g};
    return s;
}

}  // namespace detail

/// Lemma-2.1 successor of a big gap: the simplified fraction
/// (A p_u(z^d) + C q_u(z^d)) / (B q_u(z^d)), its gap and the gcd degree.
inline Successor direct_successor(const GapRecord& rec, const MahlerEquation& eq) {
    if (!is_big_gap(rec.gap, eq))
        throw Error("direct_successor: gap [" + std::to_string(rec.gap.u) + ", " +
                    std::to_string(rec.gap.v) + "] is not big");
    return detail::successor_core(rec.conv.p, rec.conv.q, rec.gap, eq);
}

/// Fills big/primitive flags.  A gap is primitive when it is big and is not
/// the direct successor of any earlier big gap; successor matching uses exact
/// (u, v) equality plus rational-function equality of the convergents.
inline void classify(std::vector<GapRecord>& records, const MahlerEquation& eq) {
    for (auto& r : records) {
        r.big = is_big_gap(r.gap, eq);
        r.primitive = false;
        r.successor_of.reset();
    }
    for (size_t j = 0; j < records.size(); ++j) {
        if (!records[j].big) continue;
        Successor s = detail::successor_core(records[j].conv.p, records[j].conv.q,
                                             records[j].gap, eq);
        for (size_t i = j + 1; i < records.size(); ++i) {
            if (!(records[i].gap == s.gap)) continue;
            if (records[i].conv.p * s.q == records[i].conv.q * s.p)
                records[i].successor_of = j;
            break;
        }
    }
    for (auto& r : records) r.primitive = r.big && !r.successor_of;
}

/// One step of a primitive gap sequence.  r_g is the gcd degree removed on
/// the transition to the next step (-1 on the final stored step).
struct PrimitiveStep {
    long u = 0, v = 0;
    long r_g = -1;
    Polynomial p, q;       // empty when dropped by the storage bound
    bool polys_stored = false;
};

struct PrimitiveSequence {
    std::vector<PrimitiveStep> steps;
    bool degree_capped = false;  // iteration stopped by the polynomial budget
};

struct IterateOptions {
    long max_poly_degree = 300000;  // stop before deg q exceeds this
    long store_poly_degree = 20000; // keep step polynomials up to this degree
};

/// Repeated direct_successor from a primitive gap, recording (u_n, v_n),
/// r_{g,n} and the convergent polynomials.
inline PrimitiveSequence iterate_primitive(const GapRecord& rec, const MahlerEquation& eq,
                                           long steps, const IterateOptions& opt = {}) {
    if (!is_big_gap(rec.gap, eq))
        throw Error("iterate_primitive: gap is not big");
    PrimitiveSequence seq;
    Polynomial p = rec.conv.p, q = rec.conv.q;
    Gap gap = rec.gap;
    auto push = [&](const Polynomial& pp, const Polynomial& qq) {
        PrimitiveStep st;
        st.u = gap.u;
        st.v = gap.v;
        if (qq.degree().value_or(0) <= opt.store_poly_degree) {
            st.p = pp;
            st.q = qq;
            st.polys_stored = true;
        }
        seq.steps.push_back(std::move(st));
    };
    push(p, q);
    for (long n = 0; n < steps; ++n) {
        long next_deg = eq.d() * q.degree().value() + eq.r_b();
        if (next_deg > opt.max_poly_degree) {
            seq.degree_capped = true;
            break;
        }
        Successor s = detail::successor_core(p, q, gap, eq);
        seq.steps.back().r_g = s.r_g;
        p = std::move(s.p);
        q = std::move(s.q);
        gap = s.gap;
        push(p, q);
    }
    return seq;
}

/// Lemma-2.4 bounds on limsup v_n/u_n for the sequence through this gap.
struct ContributionBounds {
    Rational lower;
    std::optional<Rational> upper;
};

inline ContributionBounds contribution_bounds(const Gap& gap, const MahlerEquation& eq) {
    long d = eq.d();
    Rational ra = frac(eq.r_a(), d - 1);
    Rational rb = frac(eq.r_b(), d - 1);
    if (gap.u == 0 && eq.r_b() == 0) throw Error("lower bound undefined: u = 0 and r_b = 0");
    ContributionBounds out;
    out.lower = (Rational(gap.v) - ra) / (Rational(gap.u) + rb);
    if (Rational(gap.u) > ra) out.upper = (Rational(gap.v) + rb) / (Rational(gap.u) - ra);
    return out;
}

/// Largest u at which a later primitive gap could still raise the supremum
/// anchored at first_big: u satisfies
///   (u + S + r_b/(d-1)) / (u - r_a/(d-1)) > (v0 - r_a/(d-1)) / (u0 + r_b/(d-1))
/// with S = (2d-1)(r_a+r_b)/(d-1), the primitive-size bound.  The exact
/// rational S is used rather than its integer floor, which can only enlarge
/// the horizon.
inline long search_horizon(const Gap& first_big, const MahlerEquation& eq) {
    long d = eq.d();
    Rational ra = frac(eq.r_a(), d - 1);
    Rational rb = frac(eq.r_b(), d - 1);
    if (first_big.u == 0 && eq.r_b() == 0)
        throw Error("search_horizon: anchor bound undefined (u = 0, r_b = 0)");
    Rational rhs = (Rational(first_big.v) - ra) / (Rational(first_big.u) + rb);
    Rational S = frac((2 * d - 1) * (eq.r_a() + eq.r_b()), d - 1);
    // inequality <=> u (rhs - 1) < S + rb + rhs*ra, and rhs > 1 for a big gap
    Rational bound = (S + rb + rhs * ra) / (rhs - Rational(1));
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), bound.get_num().get_mpz_t(), bound.get_den().get_mpz_t());
    long u_max = static_cast<long>(fl.get_si());
    if (Rational(u_max) == bound) --u_max;  // strict inequality
    return u_max;
}

}  // namespace mahler
