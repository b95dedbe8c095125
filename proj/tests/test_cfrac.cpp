#include <doctest.h>

#include "mahler/cfrac.hpp"
#include "testutil.hpp"

using namespace mahler;

TEST_CASE("worked family expansion: first quotients and gaps") {
    auto eq = testutil::worked_equation(1, 1, 1);
    auto s = LaurentSeries::expand(eq, 0, 64);
    auto cf = cf_expand(s, 10);
    REQUIRE(cf.certified_count() >= 3);
    CHECK(cf.quotients()[0] == Polynomial{1});                 // a_0 = A_0 = c1
    CHECK(cf.convergents()[0].q == Polynomial{1});             // q_0 = 1
    CHECK(cf.convergents()[1].q == Polynomial{1, 1});          // q_1 = z + 1
    CHECK(cf.convergents()[0].den_degree == 0);
    CHECK(cf.convergents()[1].den_degree == 1);
    CHECK(cf.convergents()[2].den_degree == 3);                // Phi starts 0, 1, 3
    CHECK(cf.convergents()[1].p == Polynomial{2, 1});          // (c1 z + a0 c1 + c0)
}

TEST_CASE("rational input terminates exactly") {
    // 1 + 1/z as an exact series
    auto s = LaurentSeries::from_coefficients(0, {Rational(1), Rational(1)});
    auto cf = cf_expand(s, 100);
    CHECK(cf.terminated());
    const auto& last = cf.convergents().back();
    // final convergent reproduces the series exactly
    auto copy = s;
    CHECK(error_degree(last, copy) == Degree::minus_infinity());
}

TEST_CASE("secretly rational extendable input yields budgeted verdict") {
    // f = 1/(z-1) satisfies z f = f(z^2) (z+1) ... simpler: feed a literal
    // prefix of a rational function through an equation-free prefix series is
    // not extendable, so construct f = (z f(z^2) + 0)/(z^2 - ... ) instead:
    // use the geometric series equation f(z) = f(z^2) + 1/(z-1) is not
    // polynomial; fall back to a direct check: an extendable series whose CF
    // terminates repeatedly raises AppearsRational.
    // f(z) = 1/(z-1) = sum z^-k satisfies (z-1) f = 1, and also the Mahler
    // form f = ((z+1) f(z^2) + 0)/1 ... verify: (z^2-1) f(z^2) = 1 so
    // f(z^2) = 1/(z^2-1) and (z+1) f(z^2) = 1/(z-1) = f.
    MahlerEquation eq(Polynomial{1, 1}, Polynomial{1}, Polynomial(), 2, true);
    SeedMap seeds{{1, Rational(1)}};
    auto s = LaurentSeries::expand(eq, -1, 8, seeds);
    for (long j = 0; j < 8; ++j) CHECK(s.coeff_by_offset(j) == 1);
    CFConfig tight;
    tight.max_coefficients = 512;
    CHECK_THROWS_AS(cf_expand(s, 5, tight), AppearsRational);
}

TEST_CASE("determinant identity, strict degrees, coprimality, error degrees") {
    testutil::Rng rng(1311);
    auto corpus = testutil::random_corpus(rng, 10);
    for (auto& [eq, K] : corpus) {
        auto s = LaurentSeries::expand(eq, K, 80);
        CFExpansion cf;
        try {
            cf = cf_expand(s, 12);
        } catch (const AppearsRational&) {
            continue;  // corpus may contain a rational f; skip
        }
        const auto& cv = cf.convergents();
        long n = std::min<long>(cf.certified_count(), 10);
        for (long k = 1; k < n; ++k) {
            Polynomial det = cv[k].p * cv[k - 1].q - cv[k - 1].p * cv[k].q;
            CHECK(det == Polynomial((k - 1) % 2 == 0 ? 1 : -1));
            CHECK(cv[k].den_degree > cv[k - 1].den_degree);
            CHECK(cf.quotients()[k].degree() >= 1);
            CHECK(poly_gcd(cv[k].p, cv[k].q).is_constant());
        }
        for (long k = 0; k + 1 < n; ++k) {
            CHECK(error_degree(cv[k], s) == Degree(-cv[k + 1].den_degree));
        }
    }
}

TEST_CASE("criterion: convergents pass, perturbed fractions fail") {
    auto eq = testutil::worked_equation(1, 1, 1);
    auto s = LaurentSeries::expand(eq, 0, 64);
    auto cf = cf_expand(s, 9);
    for (const auto& c : cf.convergents()) {
        CHECK(convergent_check(c.p, c.q, s));
        CHECK_FALSE(convergent_check(c.p + c.q, c.q, s));
    }
}

TEST_CASE("truncation stability under recomputation") {
    testutil::Rng rng(1718);
    auto corpus = testutil::random_corpus(rng, 6);
    for (auto& [eq, K] : corpus) {
        auto s = LaurentSeries::expand(eq, K, 80);
        auto pass1 = cf_certified_prefix(s, 60);
        s.extend(90);
        auto pass2 = cf_certified_prefix(s, 90);
        REQUIRE(pass2.certified >= pass1.certified);
        for (long k = 0; k < pass1.certified; ++k) {
            CHECK(pass1.quotients[static_cast<size_t>(k)] ==
                  pass2.quotients[static_cast<size_t>(k)]);
        }
    }
}
