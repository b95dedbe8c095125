#pragma once

#include <cmath>
#include <vector>

#include "mahler/cfrac.hpp"
#include "mahler/equation.hpp"

namespace mahler {

/// Exact partial sum of f at an integer point, with a heuristic geometric
/// bound on the dropped tail.
struct EvalResult {
    Rational partial_sum;
    long terms_used = 0;
    double tail_log10 = -1e308;  // log10 of the tail estimate
    bool heuristic = true;       // false only for exact (complete) series
};

namespace detail {

/// Geometric growth estimate log2(limsup |f_j|^(1/j)) over the last 32
/// nonzero known coefficients.
inline double growth_log2(const LaurentSeries& f) {
    long n = f.known_count();
    double best = -1e308;
    int seen = 0;
    for (long j = n - 1; j >= 1 && seen < 32; --j) {
        const Rational& c = f.coeff_by_offset(j);
        if (c == 0) continue;
        ++seen;
        best = std::max(best, log2_abs(c) / static_cast<double>(j));
    }
    return seen ? best : -1e308;
}

}  // namespace detail

/// Evaluates f(b) as the exact rational partial sum of enough coefficients
/// that the geometric tail estimate drops below 10^-digits.
inline EvalResult eval_f(LaurentSeries& f, long b, long digits, long max_terms = 2000000) {
    if (b > -2 && b < 2) throw Error("eval_f: need |b| >= 2");
    EvalResult out;
    if (f.is_zero()) {
        out.partial_sum = 0;
        out.heuristic = false;
        return out;
    }
    const double log2b = std::log2(std::fabs(static_cast<double>(b)));
    long n;
    if (f.exact()) {
        n = f.known_count();
        out.heuristic = false;
    } else {
        f.extend(std::max<long>(64, f.known_count()));
        double growth = detail::growth_log2(f);
        if (growth >= log2b - 0.01)
            throw BudgetExhausted(
                "eval_f: coefficient growth defeats the target precision at b = " +
                std::to_string(b));
        const double digits_bits = static_cast<double>(digits) * 3.3219280948873623;
        double denom = log2b - std::max(growth, 0.0);
        n = static_cast<long>(digits_bits / denom) + 64;
        if (n > max_terms)
            throw BudgetExhausted("eval_f: " + std::to_string(n) +
                                  " terms exceed the evaluation budget");
        f.extend(n);
        // re-estimate on the actual tail coefficients
        growth = detail::growth_log2(f);
        if (growth >= log2b - 0.01)
            throw BudgetExhausted(
                "eval_f: coefficient growth defeats the target precision at b = " +
                std::to_string(b));
        out.tail_log10 = (-static_cast<double>(n) * (log2b - std::max(growth, 0.0)) +
                          static_cast<double>(f.degree_value()) * log2b + 8) *
                         0.30102999566398119521;
    }
    out.terms_used = n;

    // Horner from the lowest kept term: sum_j g_j b^(K-j)
    Rational binv = Rational(1) / Rational(b);
    Rational acc(0);
    for (long j = n - 1; j >= 0; --j) {
        acc *= binv;
        acc += f.coeff_by_offset(j);
    }
    acc *= pow_rat(Rational(b), f.degree_value());
    out.partial_sum = std::move(acc);
    return out;
}

/// Explicit rational approximation p_{k,m}(b)/q_{k,m}(b) built from a
/// convergent by m-fold application of the functional equation:
///   q_{k,m}(z) = q_k(z^(d^m)) prod_{t<m} B(z^(d^t))
///   p_{k,m}(z) = p_k(z^(d^m)) prod_{t<m} A(z^(d^t))
///              + q_k(z^(d^m)) sum_{u<m} [prod_{t<u} A][C at d^u][prod_{u<t<m} B].
struct ApproximationRecord {
    long k = 0, m = 0;
    Rational p_val, q_val;
    double log_abs_q = 0;
    double log_abs_err = 0;  // log10 |f(b) - p/q|, the approximation quality
    bool heuristic_tail = true;

    double log_abs_linear_err() const { return log_abs_err + log_abs_q; }  // log10 |q f - p|
};

inline ApproximationRecord build_approx(const Convergent& c, const MahlerEquation& eq, long b,
                                        long m, LaurentSeries& f, long digits) {
    if (m < 1) throw Error("build_approx: need m >= 1");
    long d = eq.d();
    double dm_log = static_cast<double>(m) * std::log2(static_cast<double>(d));
    if (dm_log > 40) throw BudgetExhausted("build_approx: d^m too large");
    unsigned long dm = 1;
    for (long t = 0; t < m; ++t) dm *= static_cast<unsigned long>(d);

    Integer bpow;  // b^(d^m)
    mpz_pow_ui(bpow.get_mpz_t(), Integer(b).get_mpz_t(), dm);

    // prod_{t<m} A(b^(d^t)), prod B, and the mixed sum, left to right
    std::vector<Rational> a_at(static_cast<size_t>(m)), b_at(static_cast<size_t>(m)),
        c_at(static_cast<size_t>(m));
    {
        Integer x(b);
        for (long t = 0; t < m; ++t) {
            a_at[static_cast<size_t>(t)] = eq.A().eval(x);
            b_at[static_cast<size_t>(t)] = eq.B().eval(x);
            c_at[static_cast<size_t>(t)] = eq.C().eval(x);
            Integer next;
            mpz_pow_ui(next.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(d));
            x = next;
        }
    }
    Rational prod_a(1), prod_b(1);
    for (long t = 0; t < m; ++t) {
        prod_a *= a_at[static_cast<size_t>(t)];
        prod_b *= b_at[static_cast<size_t>(t)];
    }
    // sum_{u<m} (prod_{t<u} A) C_u (prod_{u<t<m} B) via suffix products of B
    std::vector<Rational> b_suffix(static_cast<size_t>(m) + 1, Rational(1));
    for (long t = m - 1; t >= 0; --t)
        b_suffix[static_cast<size_t>(t)] =
            b_at[static_cast<size_t>(t)] * b_suffix[static_cast<size_t>(t) + 1];
    Rational mixed(0), a_prefix(1);
    for (long u = 0; u < m; ++u) {
        mixed += a_prefix * c_at[static_cast<size_t>(u)] * b_suffix[static_cast<size_t>(u) + 1];
        a_prefix *= a_at[static_cast<size_t>(u)];
    }

    ApproximationRecord rec;
    rec.k = c.k;
    rec.m = m;
    Rational qk_at = c.q.eval(bpow);
    rec.q_val = qk_at * prod_b;
    rec.p_val = c.p.eval(bpow) * prod_a + qk_at * mixed;
    if (rec.q_val == 0)
        throw Error("build_approx: q_{k,m}(b) = 0 (admissibility must have failed)");
    rec.log_abs_q = log10_abs(rec.q_val);

    // |q f(b) - p| needs f(b) resolved well below the approximation error
    long dig = digits;
    for (int attempt = 0;; ++attempt) {
        EvalResult ev = eval_f(f, b, dig);
        rec.heuristic_tail = ev.heuristic;
        Rational err = rec.q_val * ev.partial_sum - rec.p_val;
        double tail_bound = rec.log_abs_q + ev.tail_log10;
        if (err != 0 && (!ev.heuristic || log10_abs(err) > tail_bound + 3)) {
            rec.log_abs_err = log10_abs(err) - rec.log_abs_q;
            return rec;
        }
        if (attempt >= 4)
            throw BudgetExhausted("build_approx: evaluation precision exhausted at " +
                                  std::to_string(dig) + " digits");
        dig *= 2;
    }
}

/// Lower-bound witness for mu from explicit approximations:
/// max over records of -log|q f - p| / log|q|.
inline double empirical_exponent(const std::vector<ApproximationRecord>& records) {
    if (records.empty()) throw Error("empirical_exponent: no records");
    double best = 0;
    for (const auto& r : records) best = std::max(best, -r.log_abs_err / r.log_abs_q);
    return best;
}

}  // namespace mahler
