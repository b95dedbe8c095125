#include <doctest.h>

#include "mahler/exponent.hpp"
#include "testutil.hpp"

using namespace mahler;

namespace {

/// Direct-iteration oracle for the periodic limit: run the recurrences
/// u' = d u + r_b - r_g, v' = d v - r_a + r_g for `supersteps` full periods.
std::pair<Integer, Integer> iterate_uv(long u0, long v0, const std::vector<long>& window,
                                       const MahlerEquation& eq, long supersteps) {
    Integer u(u0), v(v0);
    for (long s = 0; s < supersteps; ++s) {
        for (long rg : window) {
            u = eq.d() * u + eq.r_b() - rg;
            v = eq.d() * v - eq.r_a() + rg;
        }
    }
    return {u, v};
}

Rational rat_abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

}  // namespace

TEST_CASE("detect_period basics") {
    CHECK(detect_period({0, 0, 0, 0, 0, 0, 0, 0}, 3)->n0 == 0);
    CHECK(detect_period({0, 0, 0, 0, 0, 0, 0, 0}, 3)->period == 1);
    auto p2 = detect_period({1, 2, 1, 2, 1, 2, 1, 2}, 3);
    REQUIRE(p2.has_value());
    CHECK(p2->n0 == 0);
    CHECK(p2->period == 2);
    auto p3 = detect_period({3, 1, 2, 1, 2, 1, 2}, 3);
    REQUIRE(p3.has_value());
    CHECK(p3->n0 == 1);
    CHECK(p3->period == 2);
    CHECK_FALSE(detect_period({1, 2, 3, 4, 5, 6, 7, 8, 9}, 3).has_value());
}

TEST_CASE("periodic_limit on the worked family") {
    auto eq = testutil::worked_equation(1, 1, 1);  // d=3, r_a=0, r_b=1
    CHECK(periodic_limit(0, 1, {0}, eq) == 2);
}

TEST_CASE("periodic_limit matches direct iteration") {
    testutil::Rng rng(3141);
    std::uniform_int_distribution<long> dd(2, 5), degd(0, 3), u0d(1, 30), sized(1, 20),
        pd(1, 4);
    Rational eps = Rational(1) / Rational(pow_int(10, 12));
    int tested = 0;
    while (tested < 250) {
        long d = dd(rng);
        long ra = degd(rng), rb = degd(rng);
        MahlerEquation eq(Polynomial::monomial(1, static_cast<size_t>(ra)),
                          Polynomial::monomial(1, static_cast<size_t>(rb)), Polynomial{1}, d);
        long u0 = u0d(rng), v0 = u0 + sized(rng);
        long P = pd(rng);
        std::vector<long> window(static_cast<size_t>(P));
        std::uniform_int_distribution<long> rgd(0, ra + rb);
        for (auto& r : window) r = rgd(rng);

        Rational lim;
        try {
            lim = periodic_limit(u0, v0, window, eq);
        } catch (const DegenerateOrbit&) {
            continue;
        }
        auto [u, v] = iterate_uv(u0, v0, window, eq, 60);
        if (u <= 0) continue;
        CHECK(rat_abs(Rational(v) / Rational(u) - lim) < eps);
        ++tested;
    }

    // constant-window case: exact rational identity against the affine
    // fixpoint closed form
    for (int i = 0; i < 100; ++i) {
        long d = dd(rng), ra = degd(rng), rb = degd(rng);
        MahlerEquation eq(Polynomial::monomial(1, static_cast<size_t>(ra)),
                          Polynomial::monomial(1, static_cast<size_t>(rb)), Polynomial{1}, d);
        long u0 = u0d(rng), v0 = u0 + sized(rng);
        std::uniform_int_distribution<long> rgd(0, ra + rb);
        long r = rgd(rng);
        Rational expected_num = Rational(v0) - frac(ra - r, d - 1);
        Rational expected_den = Rational(u0) + frac(rb - r, d - 1);
        if (expected_den == 0) continue;
        CHECK(periodic_limit(u0, v0, {r}, eq) == expected_num / expected_den);
    }
}

TEST_CASE("degenerate orbit is reported") {
    MahlerEquation eq(Polynomial{1}, Polynomial{1}, Polynomial{1}, 2);  // r_a = r_b = 0
    CHECK_THROWS_AS(periodic_limit(0, 1, {0}, eq), DegenerateOrbit);
}

TEST_CASE("admissibility") {
    auto eq = testutil::worked_equation(1, 1, 1);
    CHECK(check_b_admissible(eq, 2).ok);
    CHECK(check_b_admissible(eq, -2).ok);

    // A = z - 16, d = 2, b = 2: hits the root at t = 2 (2^(2^2) = 16)
    MahlerEquation hit(Polynomial{-16, 1}, Polynomial{0, 0, 1}, Polynomial{1}, 2);
    auto a = check_b_admissible(hit, 2);
    CHECK_FALSE(a.ok);
    CHECK(a.failing_t == 2);

    // all roots inside |z| < 2: the Cauchy window closes before any test
    MahlerEquation small(Polynomial{1}, Polynomial{1, 1}, Polynomial{1}, 2);
    auto ok = check_b_admissible(small, 2);
    CHECK(ok.ok);
    CHECK(ok.t_checked == 0);
}

TEST_CASE("compute_mu on the worked family: exact 3") {
    for (auto [a0, c1, c0] : {std::array<long, 3>{1, 1, 1}, {2, 1, -3}, {1, 2, 1}}) {
        auto eq = testutil::worked_equation(a0, c1, c0);
        auto s = LaurentSeries::expand(eq, 0, 64);
        RunConfig cfg;
        cfg.primitive_steps = 12;
        auto res = compute_mu(eq, s, 2, cfg);
        CHECK(res.kind == ResultKind::exact);
        CHECK_FALSE(res.infinite);
        CHECK(res.value == 3);
        CHECK(res.value >= 2);
        CHECK(res.certificate.empirical_confirmation);
        REQUIRE(res.certificate.first_big.has_value());
        CHECK(*res.certificate.first_big == Gap{0, 1});
        CHECK(res.certificate.u_max == 2);
        REQUIRE(!res.certificate.sequences.empty());
        const auto& seq = res.certificate.sequences.front();
        REQUIRE(seq.period.has_value());
        CHECK(seq.period->period == 1);
        for (long rg : seq.r_g) CHECK(rg == 0);
    }
}

TEST_CASE("compute_mu is invariant under larger budgets") {
    auto eq = testutil::worked_equation(2, 1, -3);
    auto s1 = LaurentSeries::expand(eq, 0, 64);
    RunConfig small;
    small.primitive_steps = 10;
    small.horizon = 40;
    auto r1 = compute_mu(eq, s1, 2, small);

    auto s2 = LaurentSeries::expand(eq, 0, 256);
    RunConfig big;
    big.primitive_steps = 13;
    big.horizon = 400;
    auto r2 = compute_mu(eq, s2, 2, big);
    CHECK(r1.kind == ResultKind::exact);
    CHECK(r2.kind == ResultKind::exact);
    CHECK(r1.value == r2.value);
}

TEST_CASE("enclosure mode when no big gap appears") {
    // f = (f(z^2) + 1)/(z + 1) at degree -1 shows only size-1 gaps far past
    // any horizon used here
    MahlerEquation eq(Polynomial{1}, Polynomial{1, 1}, Polynomial{1}, 2);
    auto s = LaurentSeries::expand(eq, -1, 64);
    RunConfig cfg;
    cfg.horizon = 100;
    auto res = compute_mu(eq, s, 2, cfg);
    CHECK(res.kind == ResultKind::enclosure);
    CHECK(res.lo == 2);
    CHECK(res.hi > 2);
    CHECK(res.hi - Rational(2) < frac(1, 10));
    CHECK_FALSE(res.certificate.first_big.has_value());

    cfg.horizon = 200;
    auto res2 = compute_mu(eq, s, 2, cfg);
    CHECK(res2.hi < res.hi);  // doubling the horizon tightens the bound
    CHECK(res2.lo == 2);
}

TEST_CASE("inadmissible b raises the dedicated error") {
    MahlerEquation hit(Polynomial{-16, 1}, Polynomial{0, 0, 1}, Polynomial{1}, 2);
    auto ks = infer_degree(hit);
    REQUIRE(!ks.empty());
    for (long K : ks) {
        try {
            auto s = LaurentSeries::expand(hit, K, 16);
            CHECK_THROWS_AS(compute_mu(hit, s, 2), InadmissibleB);
            return;
        } catch (const Error&) {
            continue;
        }
    }
    FAIL("no expandable degree for the constructed equation");
}
