#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "mahler/gaps.hpp"

namespace mahler {

struct RunConfig {
    long horizon = 200;         // how far Phi is scanned for a first big gap
    long primitive_steps = 24;  // successor iterations per primitive sequence
    long period_window = 8;     // full periods required to confirm a period
    long digits = 5000;         // evaluation precision for numeric experiments
    std::vector<long> b_values;
    long max_poly_degree = 300000;  // degree cap on primitive iteration
    CFConfig cf;

    void validate() const {
        if (horizon < 1) throw Error("config: horizon must be >= 1");
        if (digits < 50) throw Error("config: digits must be >= 50");
        if (primitive_steps < 1) throw Error("config: steps must be >= 1");
        if (period_window < 1) throw Error("config: window must be >= 1");
        for (long b : b_values)
            if (b > -2 && b < 2) throw Error("config: every |b| must be >= 2");
    }
};

/// The hypothesis A(b^(d^t)) B(b^(d^t)) != 0 for all t >= 0, decided exactly:
/// once |b|^(d^t) clears the Cauchy root bound of A*B no further t can hit a
/// root.
struct Admissibility {
    bool ok = true;
    long failing_t = -1;
    long t_checked = 0;  // number of exact evaluations that were needed
};

inline Admissibility check_b_admissible(const MahlerEquation& eq, long b) {
    if (b > -2 && b < 2) throw Error("check_b_admissible: need |b| >= 2");
    Polynomial P = eq.A() * eq.B();
    Rational bound(1);
    const Rational& lead = P.leading();
    for (const auto& c : P.coefficients()) {
        Rational q = abs(c / lead);
        if (Rational(1) + q > bound) bound = Rational(1) + q;
    }
    Admissibility out;
    Integer x(b);
    for (long t = 0;; ++t) {
        if (Rational(abs(x)) >= bound) break;  // beyond every root of A*B
        out.t_checked = t + 1;
        if (P.eval(x) == 0) {
            out.ok = false;
            out.failing_t = t;
            return out;
        }
        Integer next;
        mpz_pow_ui(next.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(eq.d()));
        x = next;
    }
    return out;
}

struct PeriodDetection {
    long n0 = 0;
    long period = 1;
};

/// Smallest (n0, P), n0 first, with r_g[n0+k] = r_g[n0+k+P] for all k in
/// [0, window); none when no such pair fits the data.
inline std::optional<PeriodDetection> detect_period(const std::vector<long>& r_g, long window) {
    long n = static_cast<long>(r_g.size());
    for (long n0 = 0; n0 + window < n; ++n0) {
        for (long P = 1; n0 + window + P <= n; ++P) {
            bool ok = true;
            for (long k = 0; k < window && ok; ++k)
                ok = r_g[static_cast<size_t>(n0 + k)] == r_g[static_cast<size_t>(n0 + k + P)];
            if (ok) return PeriodDetection{n0, P};
        }
    }
    return std::nullopt;
}

namespace detail {

/// Smallest (n0, P) consistent with the entire tail of the data, plus the
/// number of full periods the data actually verifies.
struct FullPeriodScan {
    PeriodDetection det;
    long confirmed_periods = 0;
};

inline std::optional<FullPeriodScan> detect_period_full(const std::vector<long>& r_g) {
    long n = static_cast<long>(r_g.size());
    for (long n0 = 0; n0 < n; ++n0) {
        for (long P = 1; n0 + 2 * P <= n; ++P) {
            bool ok = true;
            for (long i = n0; i + P < n && ok; ++i)
                ok = r_g[static_cast<size_t>(i)] == r_g[static_cast<size_t>(i + P)];
            if (ok) {
                FullPeriodScan scan;
                scan.det = {n0, P};
                scan.confirmed_periods = (n - n0) / P - 1;
                return scan;
            }
        }
    }
    return std::nullopt;
}

}  // namespace detail

struct DegenerateOrbit : Error {
    explicit DegenerateOrbit(const std::string& what) : Error(what) {}
};

/// Exact limit of v_n/u_n along a periodic orbit of
///   u_{n+1} = d u_n + r_b - r_g[n],  v_{n+1} = d v_n - r_a + r_g[n]
/// with r_g periodic of period P = window size, starting from (u0, v0):
///   limit = (v0 - r_v/(d^P - 1)) / (u0 + r_u/(d^P - 1))
/// where r_u = r_b (d^P-1)/(d-1) - sum d^(P-1-k) r_g[k] and r_v is the same
/// with r_a.  (Derived from the superstep identities; validated against the
/// direct-iteration oracle.)
inline Rational periodic_limit(long u0, long v0, const std::vector<long>& r_g_window,
                               const MahlerEquation& eq) {
    if (r_g_window.empty()) throw Error("periodic_limit: empty window");
    long d = eq.d();
    long P = static_cast<long>(r_g_window.size());
    Integer dP = pow_int(Integer(d), static_cast<unsigned long>(P));
    Integer geo = (dP - 1) / (d - 1);  // 1 + d + ... + d^(P-1)
    Integer weighted(0);
    Integer w(1);
    for (long k = P - 1; k >= 0; --k) {
        weighted += w * r_g_window[static_cast<size_t>(k)];
        w *= d;
    }
    Rational r_u = Rational(eq.r_b() * geo - weighted);
    Rational r_v = Rational(eq.r_a() * geo - weighted);
    Rational denom = Rational(u0) + r_u / Rational(dP - 1);
    if (denom == 0)
        throw DegenerateOrbit("degenerate orbit: u_n does not grow (limsup v/u is infinite)");
    return (Rational(v0) - r_v / Rational(dP - 1)) / denom;
}

enum class ResultKind { exact, enclosure, conjectural };

inline const char* to_string(ResultKind k) {
    switch (k) {
        case ResultKind::exact: return "exact";
        case ResultKind::enclosure: return "enclosure";
        default: return "conjectural";
    }
}

/// Per-sequence certificate entry.
struct SequenceContribution {
    Gap start;
    std::vector<long> u_trail, v_trail;
    std::vector<long> r_g;
    bool degree_capped = false;
    std::optional<PeriodDetection> period;
    long confirmed_periods = 0;
    ResultKind kind = ResultKind::enclosure;
    bool unbounded = false;  // limsup v/u diverges (degenerate orbit)
    Rational lo, hi;         // bounds on limsup v_n/u_n; lo == hi when pinned
};

struct GapSummary {
    Gap gap;
    bool big = false, primitive = false;
    std::optional<size_t> successor_of;
};

struct MuCertificate {
    long series_degree = 0;
    Admissibility admissibility;
    std::vector<GapSummary> gaps;
    std::optional<Gap> first_big;
    bool anchor_u_zero_caveat = false;  // Lemma 2.4 proviso held via r_b != 0
    std::optional<long> u_max;
    long horizon_scanned = 0;
    std::vector<SequenceContribution> sequences;
    std::vector<std::string> warnings;
    bool empirical_confirmation = false;  // exactness rests on observed periods
};

struct ExponentResult {
    ResultKind kind = ResultKind::enclosure;
    bool infinite = false;
    Rational value;    // point value (exact or conjectural), when !infinite
    Rational lo, hi;   // enclosure bounds (always filled; lo = hi for points)
    MuCertificate certificate;
};

struct InadmissibleB : Error {
    long failing_t;
    InadmissibleB(long b, long t)
        : Error("b = " + std::to_string(b) + " inadmissible: A(b^(d^t)) B(b^(d^t)) = 0 at t = " +
                std::to_string(t)),
          failing_t(t) {}
};

namespace detail {

/// Heuristic disc-of-convergence gate: limsup |f_j|^(1/j) over the known
/// prefix, compared against |b|.  Warning only, never a hard failure.
inline std::optional<std::string> convergence_warning(const LaurentSeries& f, long b) {
    long n = f.known_count();
    if (n < 16) return std::nullopt;
    double best = 0.0;
    for (long j = n / 2; j < n; ++j) {
        const Rational& c = f.coeff_by_offset(j);
        if (c == 0) continue;
        double r = log2_abs(c) / static_cast<double>(j);
        best = std::max(best, r);
    }
    double logb = std::log2(std::fabs(static_cast<double>(b)));
    if (best >= logb - 1e-9)
        return "coefficient growth estimate " + std::to_string(std::exp2(best)) +
               " does not clearly place b inside the disc of convergence";
    return std::nullopt;
}

inline SequenceContribution analyze_sequence(const GapRecord& rec, const MahlerEquation& eq,
                                             const RunConfig& cfg) {
    SequenceContribution out;
    out.start = rec.gap;
    IterateOptions opt;
    opt.max_poly_degree = cfg.max_poly_degree;
    PrimitiveSequence seq = iterate_primitive(rec, eq, cfg.primitive_steps, opt);
    out.degree_capped = seq.degree_capped;
    for (const auto& st : seq.steps) {
        out.u_trail.push_back(st.u);
        out.v_trail.push_back(st.v);
        if (st.r_g >= 0) out.r_g.push_back(st.r_g);
    }

    auto scan = detect_period_full(out.r_g);
    if (scan) {
        out.period = scan->det;
        out.confirmed_periods = scan->confirmed_periods;
        long n0 = scan->det.n0, P = scan->det.period;
        std::vector<long> block(out.r_g.begin() + n0, out.r_g.begin() + n0 + P);
        // limsup = max over the P orbit offsets of the periodic limit
        std::optional<Rational> best;
        bool degenerate = false;
        for (long i = 0; i < P; ++i) {
            std::vector<long> rotated(block.begin() + i, block.end());
            rotated.insert(rotated.end(), block.begin(), block.begin() + i);
            try {
                Rational lim = periodic_limit(out.u_trail[static_cast<size_t>(n0 + i)],
                                              out.v_trail[static_cast<size_t>(n0 + i)],
                                              rotated, eq);
                if (!best || lim > *best) best = lim;
            } catch (const DegenerateOrbit&) {
                degenerate = true;
            }
        }
        if (degenerate && !best) {
            out.unbounded = true;
            out.kind = scan->confirmed_periods >= cfg.period_window ? ResultKind::exact
                                                                    : ResultKind::conjectural;
            return out;
        }
        out.lo = out.hi = *best;
        out.kind = scan->confirmed_periods >= cfg.period_window ? ResultKind::exact
                                                                : ResultKind::conjectural;
        return out;
    }

    // no period visible: rigorous Lemma-2.4 enclosure from the computed gaps
    out.kind = ResultKind::enclosure;
    bool have_lo = false, have_hi = false;
    long d = eq.d();
    Rational ra = frac(eq.r_a(), d - 1);
    Rational rb = frac(eq.r_b(), d - 1);
    for (size_t n = 0; n < out.u_trail.size(); ++n) {
        Rational u(out.u_trail[n]), v(out.v_trail[n]);
        if (u + rb > 0) {
            Rational lo = (v - ra) / (u + rb);
            if (!have_lo || lo > out.lo) out.lo = lo, have_lo = true;
        }
        if (u > ra) {
            Rational hi = (v + rb) / (u - ra);
            if (!have_hi || hi < out.hi) out.hi = hi, have_hi = true;
        }
    }
    if (!have_lo) out.lo = 1;
    if (!have_hi) out.unbounded = true;
    return out;
}

}  // namespace detail

/// Full pipeline: admissibility, certified expansion, gap classification,
/// search horizon, primitive-sequence iteration, period detection and the
/// final assembly mu = 1 + sup over contributing sequences of limsup v_n/u_n.
inline ExponentResult compute_mu(const MahlerEquation& eq, LaurentSeries& series, long b,
                                 const RunConfig& cfg = {}) {
    cfg.validate();
    ExponentResult res;
    MuCertificate& cert = res.certificate;
    cert.series_degree = series.degree_value();

    cert.admissibility = check_b_admissible(eq, b);
    if (!cert.admissibility.ok) throw InadmissibleB(b, cert.admissibility.failing_t);

    series.extend(std::max<long>(series.known_count(), 64));
    if (auto w = detail::convergence_warning(series, b)) cert.warnings.push_back(*w);

    long d = eq.d();
    Rational ra = frac(eq.r_a(), d - 1);
    Rational rb = frac(eq.r_b(), d - 1);

    // scan for the first big gap within the configured horizon
    std::vector<GapRecord> gaps;
    std::optional<size_t> first_big;
    long H = std::min(cfg.horizon, 16L);
    while (true) {
        auto cf = cf_expand(series, H + 1, cfg.cf);
        gaps = enumerate_gaps(cf, H);
        first_big.reset();
        for (size_t i = 0; i < gaps.size(); ++i) {
            if (is_big_gap(gaps[i].gap, eq)) {
                first_big = i;
                break;
            }
        }
        if (first_big || H >= cfg.horizon) break;
        H = std::min(2 * H, cfg.horizon);
    }
    cert.horizon_scanned = H;

    if (!first_big) {
        // no big gap up to the horizon: enclosure [2, 1 + (H + S + rb)/(H - ra)]
        long He = H;
        while (Rational(He) <= ra) ++He;  // bound valid once H (d-1) > r_a
        Rational S = frac((2 * d - 1) * (eq.r_a() + eq.r_b()), d - 1);
        res.kind = ResultKind::enclosure;
        res.lo = 2;
        res.hi = Rational(1) + (Rational(He) + S + rb) / (Rational(He) - ra);
        for (const auto& g : gaps) cert.gaps.push_back({g.gap, false, false, {}});
        return res;
    }

    // anchor for the horizon inequality: first big gap with u != 0 or r_b != 0
    Gap anchor = gaps[*first_big].gap;
    if (anchor.u == 0 && eq.r_b() == 0) {
        // Lemma 2.4's proviso fails at u = 0: the anchored sequence has
        // u_n = 0 for all n (degenerate); look for the next big gap
        std::optional<Gap> alt;
        for (size_t i = *first_big + 1; i < gaps.size(); ++i)
            if (is_big_gap(gaps[i].gap, eq) && gaps[i].gap.u > 0) {
                alt = gaps[i].gap;
                break;
            }
        if (alt) anchor = *alt;
    }
    cert.first_big = gaps[*first_big].gap;
    cert.anchor_u_zero_caveat = (anchor.u == 0);

    long u_max = gaps[*first_big].gap.u;
    if (anchor.u != 0 || eq.r_b() != 0) {
        u_max = std::max(u_max, search_horizon(anchor, eq));
        cert.u_max = u_max;
    }

    // complete, classified gap list up to u_max
    long u_target = std::max(u_max, gaps[*first_big].gap.u);
    auto cf = cf_expand(series, u_target + 1, cfg.cf);
    gaps = enumerate_gaps(cf, u_target);
    classify(gaps, eq);
    for (const auto& g : gaps) cert.gaps.push_back({g.gap, g.big, g.primitive, g.successor_of});

    // contributing sequences: primitive gaps with u <= u_max (the first big
    // gap is primitive by definition and always included)
    bool any_unbounded_exact = false, any_unbounded_conj = false;
    std::optional<Rational> best_lo, best_hi;
    bool hi_unbounded = false;
    std::vector<ResultKind> kinds;
    for (const auto& g : gaps) {
        if (!g.primitive || g.gap.u > u_max) continue;
        auto contrib = detail::analyze_sequence(g, eq, cfg);
        if (contrib.unbounded) {
            hi_unbounded = true;
            (contrib.kind == ResultKind::exact ? any_unbounded_exact : any_unbounded_conj) =
                true;
        } else {
            if (!best_lo || contrib.lo > *best_lo) best_lo = contrib.lo;
            if (!best_hi || contrib.hi > *best_hi) best_hi = contrib.hi;
        }
        kinds.push_back(contrib.kind);
        cert.sequences.push_back(std::move(contrib));
    }
    if (cert.sequences.empty()) throw Error("internal: no contributing sequence collected");

    if (hi_unbounded) {
        res.infinite = true;
        res.kind = any_unbounded_exact ? ResultKind::exact : ResultKind::conjectural;
        res.lo = best_lo ? Rational(1) + *best_lo : Rational(2);
        cert.empirical_confirmation = true;
        return res;
    }

    Rational limsup_lo = std::max(*best_lo, Rational(1));
    Rational limsup_hi = std::max(*best_hi, Rational(1));
    res.lo = Rational(1) + limsup_lo;
    res.hi = Rational(1) + limsup_hi;
    if (res.lo < 2) res.lo = 2;
    if (res.hi < res.lo) res.hi = res.lo;  // Dirichlet floor clip
    if (limsup_lo == limsup_hi) {
        res.value = Rational(1) + limsup_hi;
        if (res.value < 2) res.value = 2;
        bool all_exact = std::all_of(kinds.begin(), kinds.end(),
                                     [](ResultKind k) { return k == ResultKind::exact; });
        res.kind = all_exact ? ResultKind::exact : ResultKind::conjectural;
        cert.empirical_confirmation = true;
    } else {
        res.kind = ResultKind::enclosure;
    }
    return res;
}

}  // namespace mahler
