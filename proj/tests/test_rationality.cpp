#include <doctest.h>

#include "mahler/rationality.hpp"
#include "testutil.hpp"

using namespace mahler;

TEST_CASE("split_factors") {
    // z^2 (z+1) (z-2)
    Polynomial B = Polynomial{0, 0, 1} * Polynomial{1, 1} * Polynomial{-2, 1};
    auto s = split_factors(B);
    CHECK(s.B0 == Polynomial{0, 0, 1});
    CHECK(s.Bc == Polynomial{1, 1});
    CHECK(s.Bm == Polynomial{-2, 1});
    CHECK(s.scalar * s.B0 * s.Bm * s.Bc == B);

    auto s1 = split_factors(Polynomial{-1, 1});
    CHECK(s1.Bc == Polynomial{-1, 1});
    CHECK(s1.B0 == Polynomial{1});
    CHECK(s1.Bm == Polynomial{1});

    auto s4 = split_factors(Polynomial{1, 0, 1});
    CHECK(s4.Bc == Polynomial{1, 0, 1});  // Phi_4

    // scalar and reconstruction on a messier input
    Polynomial B2 = Polynomial{Rational(3)} * Polynomial{0, 1} * Polynomial{1, 1, 1} *
                    Polynomial{-5, 0, 2};
    auto s2 = split_factors(B2);
    CHECK(s2.scalar * s2.B0 * s2.Bm * s2.Bc == B2);
    CHECK(s2.Bc == Polynomial{1, 1, 1});  // Phi_3
    CHECK(poly_gcd(s2.Bm, s2.Bc).is_constant());
    CHECK(poly_gcd(s2.Bm, s2.B0).is_constant());
}

TEST_CASE("strip_z_powers") {
    // A with no z factor: unchanged
    auto eq0 = testutil::worked_equation(1, 1, 1);
    auto [same, k0] = strip_z_powers(eq0);
    CHECK(k0 == 0);
    CHECK(same == eq0);

    // A = z, B = z+1, C = 1, d = 2: K = 1, common z cancels
    MahlerEquation eq(Polynomial{0, 1}, Polynomial{1, 1}, Polynomial{1}, 2);
    auto [stripped, K] = strip_z_powers(eq);
    CHECK(K == 1);
    CHECK(stripped.A() == Polynomial{1});
    CHECK(stripped.B() == Polynomial{1, 1});
    CHECK(stripped.C() == Polynomial{0, 1});
    CHECK(stripped.A().valuation() == 0);

    // idempotence
    auto [again, K2] = strip_z_powers(stripped);
    CHECK(K2 == 0);
    CHECK(again == stripped);

    // residual identity: g = f z^K satisfies the transformed equation
    auto ks = infer_degree(eq);
    for (long kk : ks) {
        try {
            auto f = LaurentSeries::expand(eq, kk, 50);
            std::vector<Rational> coeffs;
            for (long j = 0; j < 50; ++j) coeffs.push_back(f.coeff_by_offset(j));
            auto gserie = LaurentSeries::from_coefficients(kk + K, coeffs, false);
            CHECK(residual_degree(stripped, gserie) == Degree::minus_infinity());
            break;
        } catch (const Error&) {
        }
    }
}

TEST_CASE("strip_common_cyclotomic") {
    // A = B = z-1 = Phi_1, C = 1, d = 2: the transform gives
    // g = (g(z^2) + (z+1)) / (z+1) per the displayed factorization
    MahlerEquation eq(Polynomial{-1, 1}, Polynomial{-1, 1}, Polynomial{1}, 2);
    auto t = strip_common_cyclotomic(eq, 1);
    CHECK(t.A() == Polynomial{1});
    CHECK(t.B() == Polynomial{1, 1});
    CHECK(t.C() == Polynomial{1, 1});

    // residual identity: g = f Phi_1 satisfies the transformed equation.
    // A and B share the leading coefficient here, so f_0 is free: seed it.
    SeedMap seeds{{0, Rational(1)}};
    auto f = LaurentSeries::expand(eq, 0, 50, seeds);
    std::vector<Rational> gc(50, Rational(0));
    for (long j = 0; j < 50; ++j) {
        // g = f (z - 1): top degree K + 1, g_j = f_j - f_{j-1}
        Rational acc = f.coeff_by_offset(j);
        if (j >= 1) acc -= f.coeff_by_offset(j - 1);
        gc[static_cast<size_t>(j)] = std::move(acc);
    }
    auto gs = LaurentSeries::from_coefficients(f.degree_value() + 1, gc, false);
    CHECK(residual_degree(t, gs) == Degree::minus_infinity());

    // preconditions
    CHECK_THROWS_AS(strip_common_cyclotomic(eq, 2), Error);  // Phi_2 divides neither
    MahlerEquation eq2(Polynomial{1, 1}, Polynomial{1, 1}, Polynomial{1}, 2);
    CHECK_THROWS_AS(strip_common_cyclotomic(eq2, 2), Error);  // gcd(2, 2) != 1

    // repeated application terminates: sigma drops by one each time
    Polynomial phi1 = cyclotomic_poly(1);
    MahlerEquation deep(phi1 * phi1, phi1 * phi1 * Polynomial{2, 1}, Polynomial{1}, 2);
    auto once = strip_common_cyclotomic(deep, 1);
    CHECK(sigma_multiplicity(phi1, once.A()) == 1);
    auto twice = strip_common_cyclotomic(once, 1);
    CHECK(poly_rem(twice.A(), phi1).is_zero() == false);
}

TEST_CASE("lambda reduction search") {
    // C = 0: trivial pair
    MahlerEquation hom(Polynomial{1, 1}, Polynomial{0, 1}, Polynomial(), 2, true);
    auto triv = lambda_reduction_search(hom, 3);
    REQUIRE(triv.has_value());
    CHECK(triv->first == Polynomial{1});
    CHECK(triv->second.is_zero());

    // forward-constructed instances: lambda_1 = 1, random lambda_2, A, B with
    // C := lambda_2(z^d) A - lambda_2 B
    testutil::Rng rng(5511);
    int found = 0, total = 0;
    while (total < 20) {
        long d = 2 + static_cast<long>(rng() % 2);
        Polynomial A = testutil::random_poly(rng, 2, true, 3, 1);
        Polynomial B = testutil::random_poly(rng, 2, true, 3, 1);
        Polynomial l2 = testutil::random_poly(rng, 2, true, 3, 1);
        Polynomial C = l2.compose_power(static_cast<unsigned long>(d)) * A - l2 * B;
        if (C.is_zero()) continue;
        ++total;
        MahlerEquation eq(A, B, C, d);
        auto sol = lambda_reduction_search(eq, 3);
        if (sol) {
            ++found;
            // the returned pair satisfies the identity exactly (re-verified by
            // construction, but assert it independently here)
            auto dd = static_cast<unsigned long>(d);
            const auto& [l1, l2r] = *sol;
            Polynomial check = l1 * l1.compose_power(dd) * eq.C() +
                               l1.compose_power(dd) * l2r * eq.B() -
                               l1 * l2r.compose_power(dd) * eq.A();
            CHECK(check.is_zero());
        }
    }
    CHECK(found == 20);

    // lambda_1 != 1 construction: B = l1 Bt, A = l1(z^d) At
    int found2 = 0, total2 = 0;
    while (total2 < 8) {
        long d = 2;
        Polynomial l1 = (testutil::random_poly(rng, 1, true, 2, 1) + Polynomial{0, 5}).monic();
        Polynomial At = testutil::random_poly(rng, 1, true, 2, 1);
        Polynomial Bt = testutil::random_poly(rng, 1, true, 2, 1);
        Polynomial l2 = testutil::random_poly(rng, 1, true, 2, 1);
        Polynomial A = l1.compose_power(2) * At;
        Polynomial B = l1 * Bt;
        Polynomial C = l2.compose_power(2) * At - l2 * Bt;
        if (C.is_zero()) continue;
        ++total2;
        MahlerEquation eq(A, B, C, d);
        auto sol = lambda_reduction_search(eq, 4);
        if (sol) ++found2;
    }
    CHECK(found2 == 8);

    // no-solution case stays empty: the worked family admits no pair
    auto eq4 = testutil::worked_equation(1, 1, 1);
    CHECK_FALSE(lambda_reduction_search(eq4, 4).has_value());
}

TEST_CASE("lemma42 report") {
    // worked family: B = z+1 cyclotomic, no non-cyclotomic part
    auto eq = testutil::worked_equation(1, 1, 1);
    auto rep = lemma42_report(eq, 0, 60);
    CHECK(rep.vacuous);
    CHECK(rep.all_satisfied());

    // B = z-2, A = 1: (a) holds (A constant), (b) holds (root 2)
    MahlerEquation eq2(Polynomial{1}, Polynomial{-2, 1}, Polynomial{0, 0, 1}, 2);
    auto rep2 = lemma42_report(eq2, 1, 60);
    CHECK_FALSE(rep2.vacuous);
    CHECK(rep2.a.status == ConditionStatus::satisfied);
    CHECK(rep2.b.status == ConditionStatus::satisfied);

    // consistent balance with C dominating: A = 1, B = z^2 - 2z, C = z^3,
    // d = 2, K = 1: all four conditions resolve, (d) by the decaying tail
    MahlerEquation eq3(Polynomial{1}, Polynomial{0, -2, 1}, Polynomial{0, 0, 0, 1}, 2);
    auto rep3 = lemma42_report(eq3, 1, 60);
    CHECK_FALSE(rep3.vacuous);
    CHECK(rep3.a.status == ConditionStatus::satisfied);
    CHECK(rep3.b.status == ConditionStatus::satisfied);
    CHECK(rep3.c.status == ConditionStatus::satisfied);  // 3 > 2*1 + 0
    CHECK(rep3.d.status == ConditionStatus::satisfied);
}

TEST_CASE("rationality verdict on the worked family") {
    auto eq = testutil::worked_equation(1, 1, 1);
    auto s = LaurentSeries::expand(eq, 0, 64);
    auto rep = rationality_verdict(eq, s);
    CHECK(rep.verdict == RationalityVerdict::conditions_met);
    CHECK(rep.lemma42.vacuous);
    CHECK_FALSE(rep.bc_vacuous);       // Bc = z + 1
    CHECK(rep.big_gap_found);
    CHECK(rep.bc_all_coprime);         // mirrors the r_{g,n} = 0 induction
    CHECK(rep.bc_steps_checked > 0);
    CHECK_FALSE(rep.lambda.has_value());
}

TEST_CASE("rationality verdict certified via lambda") {
    testutil::Rng rng(6001);
    Polynomial A{1, 2};
    Polynomial B{3, 1};
    Polynomial l2{1, 1};
    Polynomial C = l2.compose_power(2) * A - l2 * B;
    MahlerEquation eq(A, B, C, 2);
    auto ks = infer_degree(eq);
    for (long K : ks) {
        try {
            auto s = LaurentSeries::expand(eq, K, 64);
            auto rep = rationality_verdict(eq, s);
            CHECK(rep.verdict == RationalityVerdict::certified_rational);
            REQUIRE(rep.lambda.has_value());
            return;
        } catch (const Error&) {
        }
    }
    FAIL("no expandable K for the lambda-constructed equation");
}
