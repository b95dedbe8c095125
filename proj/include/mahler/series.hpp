#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "mahler/equation.hpp"

namespace mahler {

/// Truncated, extendable Laurent series f(z) = sum_{j>=0} g_j z^(K-j) with
/// g_0 != 0.  A series either carries its source equation (extendable to any
/// number of exact coefficients) or is exact: the stored coefficients are the
/// entire support and everything below is zero.
///
/// Extension never changes previously computed coefficients.  Values are
/// plain data; copies are independent snapshots.
class LaurentSeries {
  public:
    /// Literal series from a coefficient list (top first).  With exact=true
    /// the list is the entire support (everything below is zero); with
    /// exact=false it is a bare non-extendable prefix.
    static LaurentSeries from_coefficients(long K, std::vector<Rational> coeffs,
                                           bool exact = true) {
        size_t lead = 0;
        while (lead < coeffs.size() && coeffs[lead] == 0) ++lead;
        coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(lead));
        LaurentSeries s;
        s.K_ = K - static_cast<long>(lead);
        s.g_ = std::move(coeffs);
        s.exact_ = exact;
        return s;
    }

    /// Expands the Laurent-series solution of eq with deg f = K to at least n
    /// coefficients.  Throws InconsistentEquation when no series of degree K
    /// satisfies the equation and FreeParameter when the head system is
    /// underdetermined and the seeds do not pin it down.
    static LaurentSeries expand(const MahlerEquation& eq, long K, long n,
                                const SeedMap& seeds = {});

    bool is_zero() const { return g_.empty(); }
    bool exact() const { return exact_; }
    bool extendable() const { return source_ != nullptr; }

    Degree top_degree() const {
        return g_.empty() ? Degree::minus_infinity() : Degree(K_);
    }
    long degree_value() const { return top_degree().value(); }

    long known_count() const { return static_cast<long>(g_.size()); }

    const MahlerEquation& source_equation() const {
        if (!source_) throw Error("series has no source equation");
        return source_->eq;
    }
    long source_degree() const { return K_; }
    const SeedMap& seeds() const {
        static const SeedMap kEmpty;
        return source_ ? source_->seeds : kEmpty;
    }

    /// j-th coefficient from the top (coefficient of z^(K-j)).
    const Rational& coeff_by_offset(long j) const {
        static const Rational kZero(0);
        if (j < 0) return kZero;
        if (j >= known_count()) {
            if (exact()) return kZero;
            throw Error("coefficient offset beyond known prefix; extend first");
        }
        return g_[static_cast<size_t>(j)];
    }

    /// Coefficient of z^e; for extendable series e must be within the known
    /// prefix (exponent >= K - known_count + 1).
    const Rational& coeff_at_exponent(long e) const {
        static const Rational kZero(0);
        if (g_.empty()) return kZero;
        if (e > K_) return kZero;
        return coeff_by_offset(K_ - e);
    }

    /// Lowest exponent whose coefficient is known (for exact series every
    /// exponent is known).
    long known_exponent_floor() const { return K_ - known_count() + 1; }

    /// Ensures known_count() >= n.  Grows by doubling.
    void extend(long n) {
        if (n <= known_count()) return;
        if (!extendable()) throw Error("cannot extend a literal series");
        long target = std::max(n, 2 * known_count());
        extend_to(target);
    }

    friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
        return a.K_ == b.K_ && a.g_ == b.g_;
    }

  private:
    struct Source {
        MahlerEquation eq;
        SeedMap seeds;
    };

    LaurentSeries() = default;

    void extend_to(long target);

    long K_ = 0;
    std::vector<Rational> g_;
    bool exact_ = false;
    std::shared_ptr<const Source> source_;
};

namespace detail {

/// Sparse row of the head linear system: sum coeff[j]*g_j = rhs.
struct Row {
    std::map<long, Rational> lhs;
    Rational rhs{0};

    bool empty() const { return lhs.empty(); }
    long lead() const { return lhs.rbegin()->first; }

    void add_scaled(const Row& other, const Rational& s) {
        for (const auto& [j, c] : other.lhs) {
            Rational& slot = lhs[j];
            slot += s * c;
            if (slot == 0) lhs.erase(j);
        }
        rhs += s * other.rhs;
    }
};

/// Coefficient-match equation of B f - A f(z^d) - C at z^e, as a row over the
/// unknowns g_j.
inline Row match_equation(const MahlerEquation& eq, long K, long e) {
    Row row;
    const Polynomial& B = eq.B();
    for (long i = 0; i <= eq.r_b(); ++i) {
        if (B.coeff(i) == 0) continue;
        long j = i + K - e;
        if (j < 0) continue;  // exponent above the series top
        Rational& slot = row.lhs[j];
        slot += B.coeff(i);
        if (slot == 0) row.lhs.erase(j);
    }
    const Polynomial& A = eq.A();
    long d = eq.d();
    for (long i = 0; i <= eq.r_a(); ++i) {
        if (A.coeff(i) == 0) continue;
        long t = i + d * K - e;
        if (t < 0 || t % d != 0) continue;
        long j = t / d;
        Rational& slot = row.lhs[j];
        slot -= A.coeff(i);
        if (slot == 0) row.lhs.erase(j);
    }
    row.rhs = eq.C().coeff(e);
    return row;
}

/// First offset from which every match equation introduces its B-side unknown
/// as the strictly largest index (the steady regime).
inline long steady_offset(const MahlerEquation& eq, long K) {
    // j > K + (r_a - r_b)/(d-1)  <=>  (d-1)j > (d-1)K + r_a - r_b
    long d = eq.d();
    long num = (d - 1) * K + eq.r_a() - eq.r_b();
    long j = num / (d - 1);
    while ((d - 1) * j <= num) ++j;
    return std::max(j, 0L);
}

/// Steady-regime recursion: value of g_j from already known coefficients.
inline Rational steady_coefficient(const MahlerEquation& eq, long K,
                                   const std::vector<Rational>& g, long j) {
    long e = eq.r_b() + K - j;
    Rational acc = eq.C().coeff(e);
    const Polynomial& A = eq.A();
    long d = eq.d();
    for (long i = 0; i <= eq.r_a(); ++i) {
        if (A.coeff(i) == 0) continue;
        long t = i + d * K - e;
        if (t < 0 || t % d != 0) continue;
        long ref = t / d;
        if (ref >= 0 && ref < static_cast<long>(g.size()))
            acc += A.coeff(i) * g[static_cast<size_t>(ref)];
    }
    const Polynomial& B = eq.B();
    for (long i = 0; i < eq.r_b(); ++i) {
        if (B.coeff(i) == 0) continue;
        long ref = i + K - e;
        if (ref >= 0 && ref < static_cast<long>(g.size()))
            acc -= B.coeff(i) * g[static_cast<size_t>(ref)];
    }
    return acc / eq.B().leading();
}

}  // namespace detail

inline LaurentSeries LaurentSeries::expand(const MahlerEquation& eq, long K, long n,
                                           const SeedMap& seeds) {
    if (n < 1) throw Error("expand: need n >= 1");
    using detail::Row;

    const long head_end = detail::steady_offset(eq, K) + 2;  // solve g_0..g_head_end
    long e_top = std::max(eq.r_b() + K, eq.r_a() + eq.d() * K);
    if (!eq.homogeneous()) e_top = std::max(e_top, eq.r_c());
    const long e_bottom = eq.r_b() + K - head_end;

    std::map<long, Row> pivots;
    auto insert_row = [&](Row row) {
        while (!row.empty()) {
            long lead = row.lead();
            auto it = pivots.find(lead);
            if (it == pivots.end()) {
                Rational inv = Rational(1) / row.lhs.rbegin()->second;
                for (auto& [j, c] : row.lhs) c *= inv;
                row.rhs *= inv;
                pivots.emplace(lead, std::move(row));
                return;
            }
            Rational factor = -row.lhs.rbegin()->second;  // pivot rows are monic
            row.add_scaled(it->second, factor);
        }
        if (row.rhs != 0)
            throw InconsistentEquation("inconsistent: no degree-" + std::to_string(K) +
                                       " series satisfies the equation");
    };

    // Seeds first: a seed for f_k pins g_{k+K}.
    for (const auto& [k, val] : seeds) {
        long j = k + K;
        if (j < 0) {
            if (val != 0)
                throw InconsistentEquation("seed above the series top at position " +
                                           std::to_string(k));
            continue;
        }
        if (j > head_end) continue;  // checked later against the recursion
        Row row;
        row.lhs[j] = 1;
        row.rhs = val;
        insert_row(std::move(row));
    }
    for (long e = e_top; e >= e_bottom; --e) insert_row(detail::match_equation(eq, K, e));

    std::vector<Rational> g(static_cast<size_t>(head_end) + 1);
    std::vector<bool> resolved(static_cast<size_t>(head_end) + 1, false);
    std::vector<long> free_positions;
    bool any_unresolved = false;
    for (long j = 0; j <= head_end; ++j) {
        auto it = pivots.find(j);
        if (it == pivots.end()) {
            // genuinely free; dependents of it stay unresolved but follow
            // once this one is seeded, so only the root is reported
            free_positions.push_back(j - K);
            any_unresolved = true;
            continue;
        }
        Rational value = it->second.rhs;
        bool ok = true;
        for (const auto& [i, c] : it->second.lhs) {
            if (i == j) continue;
            if (i > head_end || !resolved[static_cast<size_t>(i)]) {
                ok = false;
                break;
            }
            value -= c * g[static_cast<size_t>(i)];
        }
        if (!ok) {
            any_unresolved = true;
            continue;
        }
        g[static_cast<size_t>(j)] = std::move(value);
        resolved[static_cast<size_t>(j)] = true;
    }
    if (any_unresolved) throw FreeParameter(std::move(free_positions));
    if (g[0] == 0)
        throw InconsistentEquation(
            "inconsistent: leading coefficient vanishes, no series of degree " +
            std::to_string(K));

    LaurentSeries s;
    s.K_ = K;
    s.g_ = std::move(g);
    s.source_ = std::make_shared<const Source>(Source{eq, seeds});
    if (n > s.known_count()) s.extend_to(n);
    return s;
}

inline void LaurentSeries::extend_to(long target) {
    const MahlerEquation& eq = source_->eq;
    g_.reserve(static_cast<size_t>(target));
    for (long j = known_count(); j < target; ++j) {
        Rational value = detail::steady_coefficient(eq, K_, g_, j);
        auto seed = source_->seeds.find(j - K_);
        if (seed != source_->seeds.end() && seed->second != value)
            throw InconsistentEquation("seed at position " + std::to_string(j - K_) +
                                       " contradicts the recursion");
        g_.push_back(std::move(value));
    }
}

/// Degree of B f - A f(z^d) - C over all coefficient positions fully
/// determined by the known prefix; minus-infinity when every computable
/// position vanishes.
inline Degree residual_degree(const MahlerEquation& eq, const LaurentSeries& f) {
    if (f.is_zero()) {
        // residual is -C (a polynomial); exact for the zero series
        if (eq.C().is_zero()) return Degree::minus_infinity();
        return eq.C().degree();
    }
    long K = f.degree_value();
    long N = f.known_count();
    long d = eq.d();
    long e_top = std::max({eq.r_b() + K, eq.r_a() + d * K, eq.homogeneous() ? eq.r_b() + K : eq.r_c()});
    long e_bottom;
    if (f.exact()) {
        e_bottom = std::min({K - N + 1, d * (K - N + 1), 0L});
    } else {
        e_bottom = std::max(eq.r_b() + K - N + 1, eq.r_a() + d * K - d * (N - 1));
    }
    for (long e = e_top; e >= e_bottom; --e) {
        Rational acc(0);
        for (long i = 0; i <= eq.r_b(); ++i)
            acc += eq.B().coeff(i) * f.coeff_at_exponent(e - i);
        for (long i = 0; i <= eq.r_a(); ++i) {
            long t = e - i;
            if (t > d * K || (t % d) != 0) continue;
            acc -= eq.A().coeff(i) * f.coeff_at_exponent(t / d);
        }
        acc -= eq.C().coeff(e);
        if (acc != 0) return Degree(e);
    }
    return Degree::minus_infinity();
}

}  // namespace mahler
