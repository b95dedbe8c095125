#pragma once

#include <optional>
#include <vector>

#include "mahler/series.hpp"

namespace mahler {

struct CFConfig {
    /// Hard cap on series coefficients consumed while certifying quotients or
    /// refuting an apparent rational.
    long max_coefficients = 200000;
};

/// Convergent p_k/q_k of a continued fraction, stored raw from the recurrence
/// (no rescaling) so that p_k q_{k-1} - p_{k-1} q_k = (-1)^(k-1) holds
/// literally.
struct Convergent {
    long k = 0;
    Polynomial p, q;
    long den_degree = 0;  // deg q_k
};

/// Certified prefix of the continued-fraction expansion of a Laurent series.
///
/// Every stored quotient is insensitive to the truncation used to compute it:
/// quotient k is kept only when d_k + d_{k+1} <= N - 1 - K for the N-known,
/// degree-K prefix (a perturbation of f below the known window cannot change
/// it).  `next_den_degree` pins deg(q) of the first convergent beyond the
/// stored prefix; it is absent only for exactly terminated expansions.
class CFExpansion {
  public:
    const std::vector<Polynomial>& quotients() const { return quotients_; }
    const std::vector<Convergent>& convergents() const { return convergents_; }
    long certified_count() const { return static_cast<long>(quotients_.size()); }
    bool terminated() const { return terminated_; }
    std::optional<long> next_den_degree() const { return next_den_degree_; }
    long coefficients_used() const { return prefix_used_; }

    /// Largest certified denominator degree (-1 when empty).
    long max_den_degree() const {
        return convergents_.empty() ? -1 : convergents_.back().den_degree;
    }

    friend CFExpansion cf_expand(LaurentSeries& series, long target_den_degree,
                                 const CFConfig& cfg);

  private:
    std::vector<Polynomial> quotients_;
    std::vector<Convergent> convergents_;
    bool terminated_ = false;
    std::optional<long> next_den_degree_;
    long prefix_used_ = 0;
};

namespace detail {

struct EuclidRun {
    std::vector<Polynomial> quotients;
    std::vector<Convergent> convergents;
    bool exhausted = false;  // remainder hit exactly zero
};

/// Continued fraction of the rational truncation f_trunc = P / z^M by the
/// Euclidean algorithm.  Remainders are kept as primitive integer polynomials
/// with an exact rational scale on the side, so coefficient sizes stay at
/// subresultant scale; the true quotients are reconstructed from the scales.
///
/// With stop_sum >= 0 the run stops once consecutive denominator degrees
/// satisfy d_{k-1} + d_k > stop_sum: past that point no further quotient can
/// be certified against truncation, and the junk quotients beyond the
/// frontier carry uselessly tall coefficients.
inline EuclidRun euclid_cf(const LaurentSeries& f, long prefix_len, long stop_sum) {
    long K = f.degree_value();
    long M = prefix_len - 1 - K;
    std::vector<Rational> pc(static_cast<size_t>(M + K) + 1, Rational(0));
    for (long j = 0; j < prefix_len; ++j) pc[static_cast<size_t>(M + K - j)] = f.coeff_by_offset(j);
    Polynomial num{std::move(pc)};

    // num = s_prev * P_prev, den = s_cur * P_cur with primitive integer parts
    Polynomial P_prev = clear_denominators(num);
    Rational s_prev = num.leading() / P_prev.leading();
    Polynomial P_cur = Polynomial::monomial(1, static_cast<size_t>(M));
    Rational s_cur(1);

    EuclidRun run;
    Polynomial p_prev(1), q_prev;  // p_{-1} = 1, q_{-1} = 0
    Polynomial p_cur, q_cur;
    while (true) {
        if (stop_sum >= 0 && !run.convergents.empty()) {
            // the upcoming quotient has degree deg P_prev - deg P_cur, so the
            // next denominator degree is known before dividing
            long d_cur = run.convergents.back().den_degree;
            long delta = P_prev.degree().value() - P_cur.degree().value();
            if (d_cur + (d_cur + delta) > stop_sum) break;
        }
        auto pd = pseudo_divrem(P_prev, P_cur);
        // true quotient of (s_prev P_prev) / (s_cur P_cur)
        Polynomial a = pd.quo * (s_prev / (s_cur * pd.scale));
        Rational s_next = s_prev / pd.scale;
        Polynomial P_next;
        if (!pd.rem.is_zero()) {
            P_next = clear_denominators(pd.rem);
            s_next *= pd.rem.leading() / P_next.leading();
        }

        Polynomial p_next = run.quotients.empty() ? a : a * p_cur + p_prev;
        Polynomial q_next = run.quotients.empty() ? Polynomial(1) : a * q_cur + q_prev;
        if (!run.quotients.empty()) {
            p_prev = std::move(p_cur);
            q_prev = std::move(q_cur);
        }
        p_cur = std::move(p_next);
        q_cur = std::move(q_next);
        long dk = q_cur.degree().value();
        run.convergents.push_back(
            {static_cast<long>(run.quotients.size()), p_cur, q_cur, dk});
        run.quotients.push_back(std::move(a));

        P_prev = std::move(P_cur);
        s_prev = std::move(s_cur);
        P_cur = std::move(P_next);
        s_cur = std::move(s_next);
        if (P_cur.is_zero()) {
            run.exhausted = true;
            break;
        }
        if (stop_sum >= 0 && dk > stop_sum) break;
    }
    return run;
}

}  // namespace detail

/// True iff every coefficient of q f - p over the currently known window of f
/// is zero (evidence that f equals p/q).
inline bool residual_zero_on_window(const Polynomial& p, const Polynomial& q,
                                    const LaurentSeries& f) {
    if (q.is_zero()) return false;
    long dq = q.degree().value();
    long K = f.is_zero() ? 0 : f.degree_value();
    long lo = f.is_zero() ? 0 : f.known_exponent_floor() + dq;
    long hi = std::max(K + dq, p.degree().value_or(0));
    for (long e = hi; e >= lo; --e) {
        Rational acc(0);
        for (long i = 0; i <= dq; ++i) {
            if (q.coeff(i) == 0) continue;
            long x = e - i;
            if (!f.is_zero() && x <= K && x >= f.known_exponent_floor())
                acc += q.coeff(i) * f.coeff_at_exponent(x);
        }
        acc -= p.coeff(e);
        if (acc != 0) return false;
    }
    return true;
}

/// One certification pass over a fixed prefix length: quotients of the
/// truncation with the certified cut applied.  Exposed for the truncation
/// stability checks; cf_expand drives this with doubling.
struct CertifiedPass {
    std::vector<Polynomial> quotients;
    std::vector<Convergent> convergents;  // one past the certified cut included
    long certified = 0;
    bool exhausted = false;
};

inline CertifiedPass cf_certified_prefix(const LaurentSeries& series, long prefix_len) {
    long K = series.degree_value();
    long M = prefix_len - 1 - K;
    if (M < 1) throw Error("cf_certified_prefix: prefix too short");
    if (prefix_len > series.known_count()) throw Error("cf_certified_prefix: prefix unknown");
    auto run = detail::euclid_cf(series, prefix_len, M);
    CertifiedPass pass;
    pass.exhausted = run.exhausted;
    long certified = 0;
    while (certified + 1 < static_cast<long>(run.convergents.size()) &&
           run.convergents[certified].den_degree + run.convergents[certified + 1].den_degree <=
               M)
        ++certified;
    pass.certified = certified;
    run.quotients.resize(static_cast<size_t>(
        std::min<long>(certified + 1, static_cast<long>(run.quotients.size()))));
    run.convergents.resize(static_cast<size_t>(
        std::min<long>(certified + 1, static_cast<long>(run.convergents.size()))));
    pass.quotients = std::move(run.quotients);
    pass.convergents = std::move(run.convergents);
    return pass;
}

/// Expands the continued fraction of `series` until the certified prefix
/// reaches denominator degree >= target_den_degree, auto-extending the series
/// (doubling) as needed.  Rational inputs terminate with their exact finite
/// expansion; for extendable series whose remainders keep vanishing the
/// budgeted verdict is the AppearsRational error.
inline CFExpansion cf_expand(LaurentSeries& series, long target_den_degree,
                             const CFConfig& cfg = {}) {
    CFExpansion out;
    if (series.is_zero()) {
        out.quotients_.push_back(Polynomial());
        out.convergents_.push_back({0, Polynomial(), Polynomial(1), 0});
        out.terminated_ = true;
        return out;
    }
    long K = series.degree_value();

    if (series.exact()) {
        long n = series.known_count();
        auto run = detail::euclid_cf(series, n, -1);
        out.quotients_ = std::move(run.quotients);
        out.convergents_ = std::move(run.convergents);
        out.terminated_ = true;  // exact representation of a rational input
        out.prefix_used_ = n;
        return out;
    }

    long prefix = std::max({K + 2, 2 * target_den_degree + K + 8, 8L});
    std::vector<Convergent> frontier;  // last certified and first uncertified
    while (true) {
        if (prefix > cfg.max_coefficients) {
            // A convergent whose residual vanishes on the whole known window
            // is the rational signature; anything else is a plain budget stop.
            for (const auto& c : frontier) {
                if (residual_zero_on_window(c.p, c.q, series))
                    throw AppearsRational(
                        "series appears rational: zero remainder past denominator degree " +
                        std::to_string(c.den_degree) + " at full known precision (" +
                        std::to_string(series.known_count()) + " coefficients)");
            }
            throw BudgetExhausted("cf_expand: coefficient budget exhausted before certifying "
                                  "denominator degree " +
                                  std::to_string(target_den_degree));
        }
        series.extend(prefix);
        auto pass = cf_certified_prefix(series, prefix);

        if (pass.certified > 0 &&
            pass.convergents[static_cast<size_t>(pass.certified - 1)].den_degree >=
                target_den_degree) {
            // d_{certified} is pinned by the certification of quotient certified-1
            out.next_den_degree_ =
                pass.convergents[static_cast<size_t>(pass.certified)].den_degree;
            pass.quotients.resize(static_cast<size_t>(pass.certified));
            pass.convergents.resize(static_cast<size_t>(pass.certified));
            out.quotients_ = std::move(pass.quotients);
            out.convergents_ = std::move(pass.convergents);
            out.prefix_used_ = prefix;
            return out;
        }
        frontier.clear();
        if (pass.certified > 0)
            frontier.push_back(pass.convergents[static_cast<size_t>(pass.certified - 1)]);
        if (pass.certified < static_cast<long>(pass.convergents.size()))
            frontier.push_back(pass.convergents[static_cast<size_t>(pass.certified)]);
        prefix *= 2;
    }
}

namespace detail {

/// Coefficient of z^e in q(z) f(z) - p(z), extending f as needed.
inline Rational residue_coefficient(const Polynomial& p, const Polynomial& q,
                                    LaurentSeries& f, long e, const CFConfig& cfg) {
    long dq = q.degree().value();
    long K = f.degree_value();
    if (!f.exact()) {
        long need = K - (e - dq) + 1;  // lowest f-exponent touched is e - dq
        if (need > f.known_count()) {
            if (need > cfg.max_coefficients)
                throw BudgetExhausted("precision budget exhausted resolving degree of q f - p");
            f.extend(need);
        }
    }
    Rational acc(0);
    for (long i = 0; i <= dq; ++i) {
        if (q.coeff(i) == 0) continue;
        acc += q.coeff(i) * f.coeff_at_exponent(e - i);
    }
    acc -= p.coeff(e);
    return acc;
}

}  // namespace detail

/// deg(q f - p), exactly.  For convergents of a certified expansion this is
/// -d_{k+1}.  Minus-infinity when p/q equals an exact series.
inline Degree error_degree(const Convergent& c, LaurentSeries& f, const CFConfig& cfg = {}) {
    if (c.q.is_zero()) throw Error("error_degree: zero denominator");
    if (f.is_zero())
        return c.p.is_zero() ? Degree::minus_infinity() : c.p.degree();
    long K = f.degree_value();
    long dq = c.q.degree().value();
    long e = std::max(K + dq, c.p.degree().value_or(K + dq));
    while (true) {
        if (f.exact() && e < std::min(f.known_exponent_floor(), 0L))
            return Degree::minus_infinity();
        Rational r = detail::residue_coefficient(c.p, c.q, f, e, cfg);
        if (r != 0) return Degree(e);
        --e;
    }
}

/// Best-approximation criterion: true iff deg(q f - p) < -deg(q).  Callers
/// normalize to gcd(p, q) constant first.
inline bool convergent_check(const Polynomial& p, const Polynomial& q, LaurentSeries& f,
                             const CFConfig& cfg = {}) {
    if (q.is_zero()) throw Error("convergent_check: zero denominator");
    long dq = q.degree().value();
    if (f.is_zero()) return p.is_zero();
    long K = f.degree_value();
    long top = std::max(K + dq, p.degree().value_or(K + dq));
    for (long e = top; e >= -dq; --e) {
        if (detail::residue_coefficient(p, q, f, e, cfg) != 0) return false;
    }
    return true;
}

}  // namespace mahler
