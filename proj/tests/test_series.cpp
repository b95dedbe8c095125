#include <doctest.h>

#include "mahler/series.hpp"
#include "testutil.hpp"

using namespace mahler;

TEST_CASE("infer_degree balances") {
    // worked family: d = 3, A constant, B = z + b0, C = c1 z + c0
    CHECK(infer_degree(testutil::worked_equation(1, 1, 1)) == std::vector<long>{0});

    // d = 2, A = 1, B = z, C = 1: K in {1, -1}
    MahlerEquation eq2(Polynomial{1}, Polynomial{0, 1}, Polynomial{1}, 2);
    CHECK(infer_degree(eq2) == std::vector<long>{1, -1});

    // d = 2, A = z, B = z, C = z: K = 0 only
    MahlerEquation eq3(Polynomial{0, 1}, Polynomial{0, 1}, Polynomial{0, 1}, 2);
    CHECK(infer_degree(eq3) == std::vector<long>{0});
}

TEST_CASE("infer_degree matches brute-force balance enumeration") {
    testutil::Rng rng(906);
    for (int i = 0; i < 60; ++i) {
        Polynomial A = testutil::random_poly(rng, 3);
        Polynomial B = testutil::random_poly(rng, 3);
        Polynomial C = testutil::random_poly(rng, 3);
        std::uniform_int_distribution<long> dd(2, 4);
        MahlerEquation eq(A, B, C, dd(rng));
        std::vector<long> expected;
        for (long K = 40; K >= -40; --K) {
            long lhs = eq.r_b() + K;
            long a_side = eq.r_a() + eq.d() * K;
            if (lhs == std::max(a_side, eq.r_c()) || (a_side == eq.r_c() && lhs < eq.r_c()))
                expected.push_back(K);
        }
        CHECK(infer_degree(eq) == expected);
    }
}

TEST_CASE("worked family expansion matches the coefficient recursion") {
    auto eq = testutil::worked_equation(1, 1, 1);
    auto s = LaurentSeries::expand(eq, 0, 8);
    auto oracle = testutil::linear_family_coefficients(0, 1, 1, 1, 1, 8);
    for (long j = 0; j < 8; ++j) CHECK(s.coeff_by_offset(j) == oracle[static_cast<size_t>(j)]);
    CHECK(s.coeff_by_offset(0) == 1);
    CHECK(s.coeff_by_offset(1) == 1);
    CHECK(s.coeff_by_offset(2) == -1);
    CHECK(s.coeff_by_offset(3) == 1);

    // a1 != 1 variant pins A_0 = c1 / (1 - a1)
    MahlerEquation eq2(Polynomial{1, 3}, Polynomial{1, 1}, Polynomial{1, 1}, 3);
    auto s2 = LaurentSeries::expand(eq2, 0, 10);
    auto oracle2 = testutil::linear_family_coefficients(3, 1, 1, 1, 1, 10);
    for (long j = 0; j < 10; ++j) CHECK(s2.coeff_by_offset(j) == oracle2[static_cast<size_t>(j)]);
}

TEST_CASE("homogeneous equation needs a seed") {
    MahlerEquation eq(Polynomial{-1, 1}, Polynomial{0, 1}, Polynomial(), 2, true);
    CHECK_THROWS_AS(LaurentSeries::expand(eq, 0, 4), FreeParameter);
    try {
        LaurentSeries::expand(eq, 0, 4);
    } catch (const FreeParameter& e) {
        REQUIRE(!e.positions.empty());
        CHECK(e.positions.front() == 0);  // -K with K = 0
    }
    SeedMap seeds{{0, Rational(1)}};
    auto s = LaurentSeries::expand(eq, 0, 8, seeds);
    CHECK(s.coeff_by_offset(0) == 1);
    CHECK(residual_degree(eq, s) == Degree::minus_infinity());
}

TEST_CASE("extension is monotone and idempotent") {
    auto eq = testutil::worked_equation(2, 1, -3);
    auto s = LaurentSeries::expand(eq, 0, 5);
    auto s10 = s;
    s10.extend(10);
    auto s10b = s10;
    s10b.extend(5);
    CHECK(s10 == s10b);
    for (long j = 0; j < 5; ++j) CHECK(s.coeff_by_offset(j) == s10.coeff_by_offset(j));

    auto t = s;
    t.extend(t.known_count());
    CHECK(t == s);
}

TEST_CASE("expansion residual vanishes and detects corruption") {
    testutil::Rng rng(907);
    auto corpus = testutil::random_corpus(rng, 12);
    for (auto& [eq, K] : corpus) {
        auto s = LaurentSeries::expand(eq, K, 30);
        CHECK(residual_degree(eq, s) == Degree::minus_infinity());

        // corrupt one deep coefficient: residual becomes finite
        std::vector<Rational> coeffs;
        for (long j = 0; j < 20; ++j) coeffs.push_back(s.coeff_by_offset(j));
        coeffs[12] += 1;
        auto corrupted = LaurentSeries::from_coefficients(s.degree_value(), coeffs);
        CHECK(residual_degree(eq, corrupted).is_finite());

        // truncation of a valid series: fewer checkable positions, all zero
        coeffs[12] -= 1;
        coeffs.resize(9);
        auto truncated = LaurentSeries::from_coefficients(s.degree_value(), coeffs, false);
        CHECK(residual_degree(eq, truncated) == Degree::minus_infinity());
    }
}

TEST_CASE("expansion determinism") {
    auto eq = testutil::worked_equation(1, 2, 1);
    auto a = LaurentSeries::expand(eq, 0, 40);
    auto b = LaurentSeries::expand(eq, 0, 25);
    b.extend(40);
    for (long j = 0; j < 40; ++j) CHECK(a.coeff_by_offset(j) == b.coeff_by_offset(j));
}

TEST_CASE("non-rationality condition for the worked family") {
    // A_1 = (a0 - b0) A_0 + c0 must be nonzero; (1,1,-0) violates via c0 = 0
    auto good = testutil::worked_equation(2, 1, -3);
    auto s = LaurentSeries::expand(good, 0, 4);
    CHECK(s.coeff_by_offset(1) == (Rational(2) - 1) * 1 + Rational(-3));
    CHECK(s.coeff_by_offset(1) != 0);

    auto degenerate = testutil::worked_equation(1, 1, 0);  // (a0-1)c1 + c0 = 0
    auto sd = LaurentSeries::expand(degenerate, 0, 6);
    CHECK(sd.coeff_by_offset(1) == 0);
}
