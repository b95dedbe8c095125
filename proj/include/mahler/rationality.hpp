#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mahler/cyclotomic.hpp"
#include "mahler/factor.hpp"
#include "mahler/gaps.hpp"

namespace mahler {

/// B = scalar * B0 * Bm * Bc with B0 a power of z, Bc the cyclotomic part and
/// Bm the non-cyclotomic remainder; the parts are monic and pairwise coprime.
struct FactorSplit {
    Polynomial B0{1}, Bm{1}, Bc{1};
    Rational scalar{1};
    std::vector<std::pair<long, long>> cyclotomic_indices;  // (n, multiplicity)
};

/// Cyclotomicity is decided by bounded exact division: totient(n) >= sqrt(n/2)
/// caps the candidate indices at 2 deg^2.
inline FactorSplit split_factors(const Polynomial& B) {
    if (B.is_zero()) throw Error("split_factors of zero polynomial");
    FactorSplit out;
    out.scalar = B.leading();
    Polynomial work = B.monic();
    long val = work.valuation();
    if (val > 0) {
        out.B0 = Polynomial::monomial(1, static_cast<size_t>(val));
        std::vector<Rational> shifted(work.coefficients().begin() + val,
                                      work.coefficients().end());
        work = Polynomial{std::move(shifted)};
    }
    long deg = work.degree().value();
    for (long n = 1; n <= 2 * deg * deg && deg > 0; ++n) {
        if (totient(n) > deg) continue;
        Polynomial phi = cyclotomic_poly(n);
        if (!poly_rem(work, phi).is_zero()) continue;
        long mult = 0;
        do {
            work = poly_divexact(work, phi);
            ++mult;
        } while (poly_rem(work, phi).is_zero());
        out.Bc *= phi.pow(static_cast<unsigned long>(mult));
        out.cyclotomic_indices.emplace_back(n, mult);
        deg = work.degree().value();
    }
    out.Bm = work;
    return out;
}

/// The z^K transform g = f z^K with the smallest K >= 0 clearing every power
/// of z from A after common cancellation:
///   g(z) = (A(z) g(z^d) + C(z) z^(dK)) / (B(z) z^((d-1)K)).
inline std::pair<MahlerEquation, long> strip_z_powers(const MahlerEquation& eq) {
    long ka = eq.A().valuation();
    if (ka == 0) return {eq, 0};
    long d = eq.d();
    auto ceil_div = [](long a, long b) { return a >= 0 ? (a + b - 1) / b : a / b; };
    long vb = eq.B().valuation();
    long K = std::max(0L, ceil_div(ka - vb, d - 1));
    if (!eq.homogeneous()) K = std::max(K, ceil_div(ka - eq.C().valuation(), d));
    Polynomial B2 = eq.B().shifted(static_cast<size_t>((d - 1) * K));
    Polynomial C2 = eq.homogeneous() ? Polynomial()
                                     : eq.C().shifted(static_cast<size_t>(d * K));
    long common = std::min(ka, B2.valuation());
    if (!eq.homogeneous()) common = std::min(common, C2.valuation());
    auto drop = [&](const Polynomial& p) {
        if (p.is_zero()) return p;
        std::vector<Rational> c(p.coefficients().begin() + common, p.coefficients().end());
        return Polynomial{std::move(c)};
    };
    return {MahlerEquation(drop(eq.A()), drop(B2), drop(C2), d, eq.homogeneous()), K};
}

/// The Phi_n transform g = f Phi_n for gcd(n, d) = 1 when Phi_n divides both
/// A and B: using Phi_n(z^d) = prod_{r | d} Phi_{rn},
///   g = ((A/Phi_n) g(z^d) + C P') / ((B/Phi_n) P'),  P' = prod_{r|d, r>1} Phi_{rn}.
/// Each of A, B ends up with one fewer Phi_n factor.
inline MahlerEquation strip_common_cyclotomic(const MahlerEquation& eq, long n) {
    if (std::gcd(n, eq.d()) != 1)
        throw Error("strip_common_cyclotomic: n must be coprime to d");
    Polynomial phi = cyclotomic_poly(n);
    if (!poly_rem(eq.A(), phi).is_zero() || !poly_rem(eq.B(), phi).is_zero())
        throw Error("strip_common_cyclotomic: Phi_n must divide A and B");
    Polynomial pprime{1};
    for (long r = 2; r <= eq.d(); ++r)
        if (eq.d() % r == 0) pprime *= cyclotomic_poly(r * n);
    Polynomial A2 = poly_divexact(eq.A(), phi);
    Polynomial B2 = poly_divexact(eq.B(), phi) * pprime;
    Polynomial C2 = eq.homogeneous() ? Polynomial() : eq.C() * pprime;
    return MahlerEquation(A2, B2, C2, eq.d(), eq.homogeneous());
}

namespace detail {

/// Dense exact linear solve M x = rhs; returns any solution.
inline std::optional<std::vector<Rational>> solve_dense(std::vector<std::vector<Rational>> M,
                                                        std::vector<Rational> rhs) {
    size_t rows = M.size();
    size_t cols = rows ? M[0].size() : 0;
    std::vector<long> pivot_col(rows, -1);
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t sel = r;
        while (sel < rows && M[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(M[sel], M[r]);
        std::swap(rhs[sel], rhs[r]);
        Rational inv = Rational(1) / M[r][c];
        for (size_t j = c; j < cols; ++j) M[r][j] *= inv;
        rhs[r] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || M[i][c] == 0) continue;
            Rational f = M[i][c];
            for (size_t j = c; j < cols; ++j) M[i][j] -= f * M[r][j];
            rhs[i] -= f * rhs[r];
        }
        pivot_col[r] = static_cast<long>(c);
        ++r;
    }
    for (size_t i = r; i < rows; ++i)
        if (rhs[i] != 0) return std::nullopt;
    std::vector<Rational> x(cols, Rational(0));
    for (size_t i = 0; i < r; ++i) x[static_cast<size_t>(pivot_col[i])] = rhs[i];
    return x;
}

/// All monic divisors of B with degree in [1, deg_bound].
inline std::vector<Polynomial> monic_divisors(const Polynomial& B, long deg_bound,
                                              long factor_cap) {
    auto factors = factor_over_q(B, factor_cap);
    std::vector<Polynomial> out{Polynomial(1)};
    for (const auto& f : factors) {
        std::vector<Polynomial> next;
        for (const auto& base : out) {
            Polynomial acc = base;
            next.push_back(acc);
            for (long e = 1; e <= f.multiplicity; ++e) {
                acc *= f.factor;
                if (acc.degree().value() > deg_bound) break;
                next.push_back(acc);
            }
        }
        out = std::move(next);
    }
    std::vector<Polynomial> filtered;
    for (auto& p : out)
        if (p.degree() >= 1) filtered.push_back(std::move(p));
    std::sort(filtered.begin(), filtered.end(), [](const Polynomial& a, const Polynomial& b) {
        return a.degree() < b.degree();
    });
    filtered.erase(std::unique(filtered.begin(), filtered.end()), filtered.end());
    return filtered;
}

}  // namespace detail

/// Searches for lambda_1 (monic divisor of B, or 1) and lambda_2 with
///   lambda_1(z) lambda_1(z^d) C(z) + lambda_1(z^d) lambda_2(z) B(z)
///     = lambda_1(z) lambda_2(z^d) A(z),
/// which reduces f to the homogeneous case via g = lambda_1 f + lambda_2.
/// The identity is linear in lambda_2 once lambda_1 is fixed; any returned
/// pair is re-verified by exact polynomial arithmetic.
inline std::optional<std::pair<Polynomial, Polynomial>> lambda_reduction_search(
    const MahlerEquation& eq, long deg_bound, long factor_cap = 16) {
    if (eq.homogeneous()) return std::make_pair(Polynomial(1), Polynomial());
    auto dd = static_cast<unsigned long>(eq.d());
    std::vector<Polynomial> candidates{Polynomial(1)};
    for (auto& p : detail::monic_divisors(eq.B(), deg_bound, factor_cap))
        candidates.push_back(std::move(p));

    for (const auto& l1 : candidates) {
        Polynomial l1d = l1.compose_power(dd);
        Polynomial lhs_factor = l1d * eq.B();   // multiplies lambda_2(z)
        Polynomial rhs_factor = l1 * eq.A();    // multiplies lambda_2(z^d)
        Polynomial target = -(l1 * l1d * eq.C());
        long D = deg_bound;
        long max_deg = std::max({lhs_factor.degree().value() + D,
                                 rhs_factor.degree().value() + eq.d() * D,
                                 target.degree().value_or(0)});
        size_t rows = static_cast<size_t>(max_deg) + 1;
        size_t cols = static_cast<size_t>(D) + 1;
        std::vector<std::vector<Rational>> M(rows, std::vector<Rational>(cols, Rational(0)));
        std::vector<Rational> rhs(rows, Rational(0));
        for (size_t j = 0; j < cols; ++j) {
            Polynomial col = lhs_factor.shifted(j) -
                             rhs_factor.shifted(static_cast<size_t>(eq.d()) * j);
            for (long i = 0; i <= col.degree().value_or(-1); ++i)
                M[static_cast<size_t>(i)][j] = col.coeff(i);
        }
        for (long i = 0; i <= target.degree().value_or(-1); ++i)
            rhs[static_cast<size_t>(i)] = target.coeff(i);
        auto sol = detail::solve_dense(std::move(M), std::move(rhs));
        if (!sol) continue;
        Polynomial l2{*sol};
        // exact re-verification of the displayed identity
        Polynomial check = l1 * l1d * eq.C() + l1d * l2 * eq.B() -
                           l1 * l2.compose_power(dd) * eq.A();
        if (check.is_zero()) return std::make_pair(l1, l2);
    }
    return std::nullopt;
}

enum class ConditionStatus { satisfied, failed, inconclusive, vacuous };

inline const char* to_string(ConditionStatus s) {
    switch (s) {
        case ConditionStatus::satisfied: return "satisfied";
        case ConditionStatus::failed: return "failed";
        case ConditionStatus::inconclusive: return "inconclusive";
        default: return "vacuous";
    }
}

struct ConditionOutcome {
    ConditionStatus status = ConditionStatus::vacuous;
    std::string evidence;
};

struct Lemma42Report {
    bool vacuous = true;  // no non-cyclotomic part
    ConditionOutcome a, b, c, d;

    bool all_satisfied() const {
        if (vacuous) return true;
        auto ok = [](const ConditionOutcome& o) {
            return o.status == ConditionStatus::satisfied ||
                   o.status == ConditionStatus::vacuous;
        };
        return ok(a) && ok(b) && ok(c) && ok(d);
    }
};

namespace detail {

inline double max_root_modulus(const std::vector<RootEstimate>& roots) {
    double m = 0;
    for (const auto& r : roots) m = std::max(m, r.value.abs_double() + r.error);
    return m;
}

inline double min_nonzero_root_modulus(const std::vector<RootEstimate>& roots) {
    double m = 1e300;
    for (const auto& r : roots) m = std::min(m, std::max(r.value.abs_double() - r.error, 0.0));
    return m;
}

/// Condition (a): exact gcd tests for every t inside the window where the
/// Bm-root annulus raised to d^t can still meet the root moduli of A.
inline ConditionOutcome lemma42_condition_a(const MahlerEquation& eq, const Polynomial& Bm,
                                            const std::vector<RootEstimate>& bm_roots,
                                            unsigned prec) {
    if (eq.A().degree() <= 0)
        return {ConditionStatus::satisfied, "A is constant"};
    Polynomial a_nz = eq.A();
    long va = a_nz.valuation();
    if (va > 0) {
        std::vector<Rational> c(a_nz.coefficients().begin() + va, a_nz.coefficients().end());
        a_nz = Polynomial{std::move(c)};
    }
    double amax = 0, amin = 1e300;
    if (a_nz.degree() > 0) {
        auto a_roots = complex_roots(a_nz, prec);
        amax = max_root_modulus(a_roots);
        amin = min_nonzero_root_modulus(a_roots);
    }
    const double eps = 1e-9;
    long t_cap = 40;
    long t_star = -1;
    for (long t = 0; t <= t_cap; ++t) {
        bool overlap = false;
        for (const auto& r : bm_roots) {
            double lo = std::max(r.value.abs_double() - r.error - eps, 1e-12);
            double hi = r.value.abs_double() + r.error + eps;
            double dt = std::pow(static_cast<double>(eq.d()), static_cast<double>(t));
            double plo = dt * std::log(lo), phi_ = dt * std::log(hi);
            if (phi_ >= std::log(std::max(amin, 1e-300)) - eps &&
                plo <= std::log(amax + eps) + eps)
                overlap = true;
        }
        if (!overlap) {
            t_star = t;
            break;
        }
    }
    if (t_star < 0)
        return {ConditionStatus::inconclusive,
                "root-modulus window did not close below t = " + std::to_string(t_cap) +
                    "; gcd verified for t < 12 only"};
    for (long t = 0; t < std::max(t_star, 1L); ++t) {
        Integer dt = pow_int(Integer(eq.d()), static_cast<unsigned long>(t));
        Polynomial reduced = compose_power_mod(eq.A(), dt, Bm);
        Polynomial g = reduced.is_zero() ? Bm.monic() : poly_gcd(Bm, reduced);
        if (g.degree() > 0)
            return {ConditionStatus::failed,
                    "gcd(Bm, A(z^(d^" + std::to_string(t) + "))) = " + g.str()};
    }
    return {ConditionStatus::satisfied,
            "exact gcd tests for t < " + std::to_string(std::max(t_star, 1L)) +
                "; modulus window closed"};
}

struct ConditionDContext {
    ConditionOutcome outcome;
};

/// Condition (d) at one root: sum_k prod_{t=u}^{k-1} ratio(t) with
/// ratio(t) = C(z0^(d^(t+1))) A(z0^(d^t)) / (C(z0^(d^t)) B(z0^(d^(t+1)))),
/// summed until the doubly-exponentially vanishing ratios certify the tail.
inline ConditionOutcome lemma42_condition_d(const MahlerEquation& eq, const Complex& z0,
                                            unsigned prec) {
    mpf_class tiny(1, prec);
    mpf_div_2exp(tiny.get_mpf_t(), tiny.get_mpf_t(), prec / 2);
    mpf_class tiny2 = tiny * tiny;
    double max_root = 1.0;
    for (const auto& poly : {eq.B(), eq.C()}) {
        Polynomial p = poly;
        long v = p.valuation();
        if (v > 0) {
            std::vector<Rational> c(p.coefficients().begin() + v, p.coefficients().end());
            p = Polynomial{std::move(c)};
        }
        if (p.degree() > 0)
            max_root = std::max(max_root, max_root_modulus(complex_roots(p, prec)));
    }

    // powers z0^(d^t) while zeros of B or C are still reachable
    std::vector<Complex> powers{z0};
    long u = 0;
    for (long t = 0;; ++t) {
        const Complex& x = powers.back();
        double mag = x.abs_double();
        Complex bx = eval_complex(eq.B(), x, prec);
        Complex cx = eval_complex(eq.C(), x, prec);
        mpf_class babs = bx.abs2();
        mpf_class cabs = cx.abs2();
        bool near_zero = (t > 0 && babs < tiny2) || cabs < tiny2;
        if (near_zero) u = t + 1;
        if (mag > max_root + 1 || t > 60) break;
        Complex next = x;
        for (long i = 1; i < eq.d(); ++i) next = next * x;
        powers.push_back(next);
    }
    // exponent cap: z0^(d^t) must stay far below the mpf exponent range
    double lz = std::log2(std::max(z0.abs_double(), 1.0 + 1e-9));
    long t_cap = 0;
    for (double bits = lz; bits * eq.d() <= 4.0e9 && t_cap < 100; ++t_cap) bits *= eq.d();

    auto power_at = [&](long t) {
        while (static_cast<long>(powers.size()) <= t) {
            Complex next = powers.back();
            const Complex& base = powers.back();
            for (long i = 1; i < eq.d(); ++i) next = next * base;
            powers.push_back(next);
        }
        return powers[static_cast<size_t>(t)];
    };

    Complex sum{mpf_class(1, prec), mpf_class(0, prec)};  // k = 0 term
    Complex term{mpf_class(1, prec), mpf_class(0, prec)};
    bool all_positive = true;
    double last_ratio = 1;
    for (long k = 1; k <= 80; ++k) {
        long t = u + k - 1;
        if (t + 1 > t_cap)
            return {ConditionStatus::inconclusive,
                    "exponent budget reached before the tail certificate"};
        if (k >= 12 && last_ratio > 0.9)
            return {ConditionStatus::inconclusive,
                    "term ratios do not decay (hypotheses likely violated)"};
        Complex num = eval_complex(eq.C(), power_at(t + 1), prec) *
                      eval_complex(eq.A(), power_at(t), prec);
        Complex den = eval_complex(eq.C(), power_at(t), prec) *
                      eval_complex(eq.B(), power_at(t + 1), prec);
        if (den.abs2() == 0)
            return {ConditionStatus::inconclusive, "zero denominator inside the sum"};
        Complex ratio = num / den;
        last_ratio = ratio.abs_double();
        term = term * ratio;
        sum = sum + term;
        if (std::fabs(term.im.get_d()) > 1e-30 || term.re.get_d() < 0) all_positive = false;
        if (last_ratio < 0.5) {
            double tail = 2.0 * term.abs_double() * last_ratio;
            double s_abs = sum.abs_double();
            if (s_abs > 4 * tail + 1e-60 + 4 * tiny.get_d()) {
                if (all_positive)
                    return {ConditionStatus::satisfied, "monotone sum of positive terms"};
                return {ConditionStatus::satisfied,
                        "partial sum " + std::to_string(s_abs) + " clears tail bound " +
                            std::to_string(tail) + " after " + std::to_string(k) + " terms"};
            }
            if (s_abs + tail < 4 * tiny.get_d())
                return {ConditionStatus::inconclusive, "sum is zero within precision"};
        }
    }
    return {ConditionStatus::inconclusive, "tail certificate not reached in 80 terms"};
}

}  // namespace detail

/// Per-condition outcomes of the non-cyclotomic lemma for the given equation;
/// K is the degree of the (transformed) series.
inline Lemma42Report lemma42_report(const MahlerEquation& eq, long K, long digits,
                                    long factor_cap = 16) {
    Lemma42Report rep;
    FactorSplit split = split_factors(eq.B());
    if (split.Bm.degree() <= 0) {
        rep.vacuous = true;
        rep.a = rep.b = rep.c = rep.d = {ConditionStatus::vacuous,
                                         "no non-cyclotomic part in B"};
        return rep;
    }
    rep.vacuous = false;
    unsigned prec = static_cast<unsigned>(std::max(128L, digits * 10 / 3 + 64));

    // (c) exact degree comparison
    long rc = eq.homogeneous() ? -1 : eq.r_c();
    bool c_ok = rc > eq.d() * K + eq.r_a();
    rep.c = {c_ok ? ConditionStatus::satisfied : ConditionStatus::failed,
             "deg C = " + std::to_string(rc) + " vs dK + deg A = " +
                 std::to_string(eq.d() * K + eq.r_a())};

    auto factors = factor_over_q(split.Bm, factor_cap);
    auto bm_roots = complex_roots(split.Bm, prec);
    rep.a = detail::lemma42_condition_a(eq, split.Bm, bm_roots, prec);

    // (b) and (d) per irreducible factor
    ConditionStatus b_status = ConditionStatus::satisfied;
    ConditionStatus d_status = ConditionStatus::satisfied;
    std::string b_evidence, d_evidence;
    for (const auto& f : factors) {
        auto roots = complex_roots(f.factor, prec);
        const RootEstimate* best = nullptr;
        for (const auto& r : roots)
            if (!best || r.value.abs_double() > best->value.abs_double()) best = &r;
        if (!best) continue;
        double lo = best->value.abs_double() - best->error;
        double hi = best->value.abs_double() + best->error;
        if (lo > 1 + 1e-12) {
            b_evidence += "(" + f.factor.str() + "): |z0| = " + std::to_string(hi) + "; ";
            if (!eq.homogeneous() && c_ok) {
                auto dres = detail::lemma42_condition_d(eq, best->value, prec);
                if (dres.status != ConditionStatus::satisfied)
                    d_status = dres.status;
                d_evidence += "(" + f.factor.str() + "): " + dres.evidence + "; ";
            } else {
                d_status = ConditionStatus::inconclusive;
                d_evidence += "(" + f.factor.str() + "): skipped, (c) not satisfied; ";
            }
        } else if (hi < 1 - 1e-12) {
            b_status = ConditionStatus::failed;
            b_evidence += "(" + f.factor.str() + "): all roots inside the unit circle; ";
            d_status = ConditionStatus::inconclusive;
        } else {
            b_status = ConditionStatus::inconclusive;
            b_evidence += "(" + f.factor.str() + "): root modulus not separated from 1; ";
            d_status = ConditionStatus::inconclusive;
        }
    }
    rep.b = {b_status, b_evidence};
    rep.d = {d_status, d_evidence};
    return rep;
}

enum class RationalityVerdict { certified_rational, conditions_met, inconclusive };

inline const char* to_string(RationalityVerdict v) {
    switch (v) {
        case RationalityVerdict::certified_rational: return "certified-rational";
        case RationalityVerdict::conditions_met: return "conditions-met";
        default: return "inconclusive";
    }
}

struct RationalityConfig {
    long digits = 80;
    long lambda_deg_bound = 6;
    long horizon = 48;
    long steps = 10;
    long factor_degree_cap = 16;
    long max_poly_degree = 4000;
    CFConfig cf;
};

struct RationalityReport {
    long z_power_strip = 0;
    std::vector<long> phi_strips;
    std::optional<MahlerEquation> transformed;
    FactorSplit split;
    std::optional<std::pair<Polynomial, Polynomial>> lambda;
    Lemma42Report lemma42;
    bool bc_vacuous = true;
    long bc_steps_checked = 0;
    bool bc_all_coprime = true;
    long bc_first_violation = -1;
    bool big_gap_found = false;
    RationalityVerdict verdict = RationalityVerdict::inconclusive;
    std::vector<std::string> notes;
};

/// Ch.-5 pipeline: exponent-preserving transforms, factor split of B, the
/// lambda reduction search, the non-cyclotomic condition report and the
/// empirical cyclotomic-coprimality premise along computed primitive
/// sequences.
inline RationalityReport rationality_verdict(const MahlerEquation& eq, LaurentSeries& series,
                                             const RationalityConfig& cfg = {}) {
    RationalityReport rep;
    series.extend(std::max<long>(series.known_count(), 64));
    long n_known = std::min<long>(series.known_count(), 64);

    // transformed series prefix, updated alongside the equation transforms
    long Kg = series.degree_value();
    std::vector<Rational> g(static_cast<size_t>(n_known));
    for (long j = 0; j < n_known; ++j) g[static_cast<size_t>(j)] = series.coeff_by_offset(j);

    auto verify_residual = [&](const MahlerEquation& e) {
        auto prefix = LaurentSeries::from_coefficients(Kg, g, false);
        if (residual_degree(e, prefix).is_finite())
            throw Error("internal: transformed series violates the transformed equation");
    };

    auto [eq1, Kz] = strip_z_powers(eq);
    rep.z_power_strip = Kz;
    MahlerEquation cur = eq1;
    Kg += Kz;  // g = f z^K: same coefficients, shifted degree
    verify_residual(cur);
    if (Kz > 0)
        rep.notes.push_back("applied g = f z^" + std::to_string(Kz) +
                            "; the exponent is preserved");

    // strip common cyclotomic factors of A and B with index coprime to d
    while (true) {
        auto a_split = split_factors(cur.A());
        auto b_split = split_factors(cur.B());
        long found = 0;
        for (auto& [n, ma] : a_split.cyclotomic_indices) {
            if (std::gcd(n, cur.d()) != 1) continue;
            for (auto& [nb, mb] : b_split.cyclotomic_indices) {
                if (nb == n) {
                    found = n;
                    break;
                }
            }
            if (found) break;
        }
        if (!found) break;
        cur = strip_common_cyclotomic(cur, found);
        rep.phi_strips.push_back(found);
        // g' = g Phi_n: convolve the prefix
        Polynomial phi = cyclotomic_poly(found);
        long m = phi.degree().value();
        std::vector<Rational> g2(static_cast<size_t>(n_known), Rational(0));
        for (long j = 0; j < n_known; ++j) {
            Rational acc(0);
            for (long i = 0; i <= m; ++i) {
                long off = j - (m - i);
                if (off >= 0 && off < n_known)
                    acc += phi.coeff(i) * g[static_cast<size_t>(off)];
            }
            g2[static_cast<size_t>(j)] = std::move(acc);
        }
        g = std::move(g2);
        Kg += m;
        verify_residual(cur);
        rep.notes.push_back("applied g = f Phi_" + std::to_string(found) +
                            "; the exponent is preserved");
    }
    rep.transformed = cur;
    rep.split = split_factors(cur.B());

    rep.lambda = lambda_reduction_search(eq, cfg.lambda_deg_bound, cfg.factor_degree_cap);
    rep.lemma42 = lemma42_report(cur, Kg, cfg.digits, cfg.factor_degree_cap);

    // cyclotomic premise of the periodicity lemma: the successor numerator
    // stays coprime to Bc along computed primitive sequences
    rep.bc_vacuous = rep.split.Bc.degree() <= 0;
    if (!rep.bc_vacuous) {
        try {
            // extendable series for the transformed equation, pinned by seeds
            SeedMap seeds;
            for (long j = 0; j < n_known; ++j) seeds[j - Kg] = g[static_cast<size_t>(j)];
            auto gs = LaurentSeries::expand(cur, Kg, n_known, seeds);
            CFConfig cf = cfg.cf;
            auto cfe = cf_expand(gs, std::min(cfg.horizon, 16L) + 1, cf);
            long H = std::min(cfg.horizon, 16L);
            std::vector<GapRecord> gaps;
            std::optional<size_t> fb;
            while (true) {
                cfe = cf_expand(gs, H + 1, cf);
                gaps = enumerate_gaps(cfe, H);
                for (size_t i = 0; i < gaps.size(); ++i)
                    if (is_big_gap(gaps[i].gap, cur)) {
                        fb = i;
                        break;
                    }
                if (fb || H >= cfg.horizon) break;
                H = std::min(2 * H, cfg.horizon);
            }
            if (fb) {
                rep.big_gap_found = true;
                classify(gaps, cur);
                const auto& aa = cur.A();
                const auto& cc = cur.C();
                for (const auto& grec : gaps) {
                    if (!grec.primitive) continue;
                    Polynomial p = grec.conv.p, q = grec.conv.q;
                    Gap gap = grec.gap;
                    for (long step = 0; step < cfg.steps; ++step) {
                        if (cur.d() * q.degree().value() + cur.r_b() > cfg.max_poly_degree)
                            break;
                        auto dd = static_cast<unsigned long>(cur.d());
                        Polynomial P = aa * p.compose_power(dd) + cc * q.compose_power(dd);
                        Polynomial pm = poly_rem(P, rep.split.Bc);
                        Polynomial gcd_bc =
                            pm.is_zero() ? rep.split.Bc : poly_gcd(rep.split.Bc, pm);
                        ++rep.bc_steps_checked;
                        if (gcd_bc.degree() > 0 && rep.bc_first_violation < 0) {
                            rep.bc_all_coprime = false;
                            rep.bc_first_violation = step;
                        }
                        auto s = detail::successor_core(p, q, gap, cur);
                        p = std::move(s.p);
                        q = std::move(s.q);
                        gap = s.gap;
                    }
                }
            } else {
                rep.notes.push_back(
                    "no big gap found up to the horizon; if none exist the exponent is 2 "
                    "(rational), but absence is not provable here");
            }
        } catch (const Error& e) {
            rep.notes.push_back(std::string("cyclotomic premise check skipped: ") + e.what());
        }
    }

    if (rep.lambda) {
        rep.verdict = RationalityVerdict::certified_rational;
    } else if (rep.lemma42.all_satisfied() &&
               (rep.bc_vacuous || (rep.big_gap_found && rep.bc_all_coprime &&
                                   rep.bc_steps_checked > 0))) {
        rep.verdict = RationalityVerdict::conditions_met;
        if (!rep.bc_vacuous)
            rep.notes.push_back(
                "cyclotomic coprimality holds at every computed step (empirical evidence, "
                "not a proof)");
    } else {
        rep.verdict = RationalityVerdict::inconclusive;
    }
    return rep;
}

}  // namespace mahler
