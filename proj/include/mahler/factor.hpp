#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mahler/polynomial.hpp"

namespace mahler {

/// Complex number over GMP floats, precision carried by the components.
/// Arithmetic sticks to single-level gmpxx expressions: the temporaries of a
/// plain binary op inherit the larger operand precision, nested expression
/// trees do not.
struct Complex {
    mpf_class re, im;

    Complex() = default;
    Complex(mpf_class r, mpf_class i) : re(std::move(r)), im(std::move(i)) {}

    friend Complex operator+(const Complex& a, const Complex& b) {
        mpf_class r = a.re + b.re;
        mpf_class i = a.im + b.im;
        return {std::move(r), std::move(i)};
    }
    friend Complex operator-(const Complex& a, const Complex& b) {
        mpf_class r = a.re - b.re;
        mpf_class i = a.im - b.im;
        return {std::move(r), std::move(i)};
    }
    friend Complex operator*(const Complex& a, const Complex& b) {
        mpf_class t1 = a.re * b.re;
        mpf_class t2 = a.im * b.im;
        mpf_class t3 = a.re * b.im;
        mpf_class t4 = a.im * b.re;
        mpf_class r = t1 - t2;
        mpf_class i = t3 + t4;
        return {std::move(r), std::move(i)};
    }
    friend Complex operator/(const Complex& a, const Complex& b) {
        mpf_class n = b.abs2();
        mpf_class t1 = a.re * b.re;
        mpf_class t2 = a.im * b.im;
        mpf_class t3 = a.im * b.re;
        mpf_class t4 = a.re * b.im;
        mpf_class r = t1 + t2;
        r /= n;
        mpf_class i = t3 - t4;
        i /= n;
        return {std::move(r), std::move(i)};
    }
    mpf_class abs2() const {
        mpf_class t1 = re * re;
        mpf_class t2 = im * im;
        mpf_class s = t1 + t2;
        return s;
    }
    double abs_double() const { return std::sqrt(abs2().get_d()); }
};

inline Complex eval_complex(const Polynomial& p, const Complex& z, unsigned prec) {
    Complex acc{mpf_class(0, prec), mpf_class(0, prec)};
    for (size_t i = p.coefficients().size(); i-- > 0;) {
        acc = acc * z;
        mpf_class c(p.coefficients()[i].get_num(), prec);
        mpf_class den(p.coefficients()[i].get_den(), prec);
        c /= den;
        acc.re += c;
    }
    return acc;
}

/// Yun square-free decomposition: pairs (monic square-free factor,
/// multiplicity), multiplicities ascending.  The scalar content is dropped.
inline std::vector<std::pair<Polynomial, long>> squarefree_decomposition(const Polynomial& p) {
    if (p.is_zero()) throw Error("squarefree_decomposition of zero polynomial");
    std::vector<std::pair<Polynomial, long>> out;
    if (p.degree() <= 0) return out;
    Polynomial f = p.monic();
    Polynomial fp = f.derivative();
    Polynomial g = poly_gcd(f, fp);
    Polynomial w = poly_divexact(f, g);
    Polynomial y = poly_divexact(fp, g);
    long i = 1;
    while (w.degree() > 0) {
        Polynomial z = y - w.derivative();
        Polynomial gi = z.is_zero() ? w.monic() : poly_gcd(w, z);
        if (gi.degree() > 0) out.emplace_back(gi, i);
        w = poly_divexact(w, gi);
        y = z.is_zero() ? Polynomial() : poly_divexact(z, gi);
        ++i;
    }
    return out;
}

/// Durand-Kerner roots of a square-free polynomial at the given precision.
/// The returned estimates carry an a-posteriori error from the last
/// Weierstrass correction.
struct RootEstimate {
    Complex value;
    double error = 0;  // magnitude of the final correction
};

inline std::vector<RootEstimate> complex_roots(const Polynomial& poly, unsigned prec) {
    if (poly.degree() <= 0) return {};
    Polynomial p = poly.monic();
    long n = p.degree().value();

    double radius = 1.0;
    for (const auto& c : p.coefficients())
        radius = std::max(radius, 1.0 + std::fabs(c.get_d()));

    std::vector<Complex> x;
    for (long k = 0; k < n; ++k) {
        double th = 2.0 * 3.14159265358979323846 * static_cast<double>(k) /
                        static_cast<double>(n) +
                    0.39;
        x.push_back({mpf_class(radius * std::cos(th), prec),
                     mpf_class(radius * std::sin(th), prec)});
    }
    mpf_class tol(1, prec);
    mpf_div_2exp(tol.get_mpf_t(), tol.get_mpf_t(), prec > 48 ? prec - 16 : 32);
    mpf_class tol2 = tol * tol;

    std::vector<RootEstimate> out(static_cast<size_t>(n));
    double last_max = 1e300;
    for (int iter = 0; iter < 800; ++iter) {
        mpf_class max_delta(0, prec);
        for (long k = 0; k < n; ++k) {
            Complex denom{mpf_class(1, prec), mpf_class(0, prec)};
            for (long j = 0; j < n; ++j) {
                if (j == k) continue;
                denom = denom * (x[static_cast<size_t>(k)] - x[static_cast<size_t>(j)]);
            }
            Complex corr = eval_complex(p, x[static_cast<size_t>(k)], prec) / denom;
            x[static_cast<size_t>(k)] = x[static_cast<size_t>(k)] - corr;
            mpf_class mag = corr.abs2();
            if (mag > max_delta) max_delta = mag;
            out[static_cast<size_t>(k)].error = corr.abs_double();
        }
        double now = max_delta.get_d();
        if (max_delta < tol2) break;
        last_max = now;
    }
    (void)last_max;
    for (long k = 0; k < n; ++k) out[static_cast<size_t>(k)].value = x[static_cast<size_t>(k)];
    return out;
}

struct IrreducibleFactor {
    Polynomial factor;  // monic
    long multiplicity = 1;
};

namespace detail {

/// Reconstructs the irreducible integer factors of a primitive square-free
/// integer polynomial from high-precision roots: subsets of roots, smallest
/// first, whose scaled products round to integer polynomials dividing the
/// input exactly.
inline std::vector<Polynomial> split_squarefree(const Polynomial& sf, long max_subset_degree) {
    long n = sf.degree().value();
    if (n == 1) return {sf.monic()};
    if (n > max_subset_degree)
        throw FactorizationError("factorization degree cap exceeded: " + std::to_string(n));

    Polynomial work = clear_denominators(sf);
    double height = 0;
    for (const auto& c : work.coefficients()) height = std::max(height, std::fabs(c.get_d()));
    unsigned prec = static_cast<unsigned>(192 + 8 * n + std::ilogb(height + 2));
    auto roots = complex_roots(work, prec);

    const Rational& lc = work.leading();
    std::vector<Polynomial> factors;
    std::vector<bool> used(static_cast<size_t>(n), false);
    long remaining = n;
    Polynomial rest = work;

    for (long size = 1; size <= remaining; ++size) {
        bool progress = true;
        while (progress && size <= remaining) {
            progress = false;
            std::vector<long> avail;
            for (long i = 0; i < n; ++i)
                if (!used[static_cast<size_t>(i)]) avail.push_back(i);
            long a = static_cast<long>(avail.size());
            if (size > a) break;
            // enumerate subsets of the available roots of this size
            std::vector<long> idx(static_cast<size_t>(size));
            for (long i = 0; i < size; ++i) idx[static_cast<size_t>(i)] = i;
            while (true) {
                // candidate lc * prod (z - root)
                std::vector<Complex> cs{{mpf_class(lc.get_num(), prec) / mpf_class(lc.get_den(), prec),
                                         mpf_class(0, prec)}};
                for (long i = 0; i < size; ++i) {
                    const Complex& r = roots[static_cast<size_t>(avail[static_cast<size_t>(
                                                 idx[static_cast<size_t>(i)])])]
                                           .value;
                    cs.push_back({mpf_class(0, prec), mpf_class(0, prec)});
                    for (long j = static_cast<long>(cs.size()) - 1; j >= 1; --j)
                        cs[static_cast<size_t>(j)] =
                            cs[static_cast<size_t>(j - 1)] - r * cs[static_cast<size_t>(j)];
                    cs[0] = (Complex{mpf_class(0, prec), mpf_class(0, prec)} - r) * cs[0];
                }
                // round to integers; reject fast when clearly non-integral
                bool plausible = true;
                std::vector<Rational> rounded(cs.size());
                for (size_t i = 0; i < cs.size() && plausible; ++i) {
                    mpf_class shifted = cs[i].re + mpf_class(0.5, prec);
                    mpf_class fl(0, prec);
                    mpf_floor(fl.get_mpf_t(), shifted.get_mpf_t());
                    mpf_class frac_err = cs[i].re - fl;
                    double fe = std::fabs(frac_err.get_d());
                    double ie = std::fabs(cs[i].im.get_d());
                    if (fe > 0.25 || ie > 0.25) {
                        plausible = false;
                        break;
                    }
                    Integer zi;
                    mpz_set_f(zi.get_mpz_t(), fl.get_mpf_t());
                    rounded[i] = Rational(zi);
                }
                if (plausible) {
                    Polynomial candidate{rounded};
                    if (candidate.degree() == Degree(size) && poly_divides(candidate, rest)) {
                        factors.push_back(candidate.monic());
                        rest = poly_divexact(rest, candidate);
                        for (long i = 0; i < size; ++i)
                            used[static_cast<size_t>(
                                avail[static_cast<size_t>(idx[static_cast<size_t>(i)])])] = true;
                        remaining -= size;
                        progress = true;
                        break;
                    }
                }
                // next subset
                long i = size - 1;
                while (i >= 0 && idx[static_cast<size_t>(i)] == a - size + i) --i;
                if (i < 0) break;
                ++idx[static_cast<size_t>(i)];
                for (long j = i + 1; j < size; ++j)
                    idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
            }
        }
    }
    if (remaining != 0)
        throw FactorizationError("root clustering failed to reconstruct all factors");
    return factors;
}

}  // namespace detail

/// Irreducible monic factorization over Q (Gauss: equivalently over Z after
/// clearing denominators).  Square-free split first, then deterministic
/// refinement of each square-free part by exact-division-verified root
/// clustering; degrees beyond the cap are reported as failures.
inline std::vector<IrreducibleFactor> factor_over_q(const Polynomial& p,
                                                    long max_subset_degree = 16) {
    if (p.is_zero()) throw Error("factor_over_q of zero polynomial");
    std::vector<IrreducibleFactor> out;
    if (p.degree() <= 0) return out;
    long val = p.valuation();
    Polynomial rest = p;
    if (val > 0) {
        out.push_back({Polynomial::x(), val});
        std::vector<Rational> shifted(p.coefficients().begin() + val, p.coefficients().end());
        rest = Polynomial{std::move(shifted)};
    }
    for (auto& [sf, mult] : squarefree_decomposition(rest)) {
        for (auto& irr : detail::split_squarefree(sf, max_subset_degree))
            out.push_back({irr, mult});
    }
    std::sort(out.begin(), out.end(), [](const IrreducibleFactor& a, const IrreducibleFactor& b) {
        if (a.factor.degree() < b.factor.degree()) return true;
        if (b.factor.degree() < a.factor.degree()) return false;
        return false;
    });
    return out;
}

}  // namespace mahler
