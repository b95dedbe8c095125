#include <doctest.h>

#include "mahler/io.hpp"
#include "testutil.hpp"

using namespace mahler;

TEST_CASE("equation file round trip") {
    Json j = Json::parse(R"({
        "d": 3,
        "A": ["1"],
        "B": ["1", "1"],
        "C": ["1", "-3/2", "0", "1"],
        "seeds": {"0": "1", "-2": "5/7"}
    })");
    auto ef = parse_equation_json(j);
    CHECK(ef.eq.d() == 3);
    CHECK(ef.seeds.at(0) == Rational(1));
    CHECK(ef.seeds.at(-2) == Rational(5, 7));

    Json back = equation_to_json(ef.eq, ef.seeds);
    auto ef2 = parse_equation_json(back);
    CHECK(ef2.eq == ef.eq);
    CHECK(ef2.seeds == ef.seeds);
    // serialization is stable
    CHECK(equation_to_json(ef2.eq, ef2.seeds).dump() == back.dump());
}

TEST_CASE("typographic minus and malformed rationals") {
    CHECK(parse_rational("−3/2") == Rational(-3, 2));
    CHECK(parse_rational(" -7 ") == Rational(-7));
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("x"), ParseError);
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    Json bad = Json::parse(R"({"d": 2, "A": ["1/0"], "B": ["1"], "C": ["1"]})");
    CHECK_THROWS_AS(parse_equation_json(bad), ParseError);
}

TEST_CASE("missing fields and zero polynomials in files") {
    CHECK_THROWS_AS(parse_equation_json(Json::parse(R"({"d": 2, "A": ["1"], "B": ["1"]})")),
                    ParseError);
    // A = 0 violates the equation invariant
    CHECK_THROWS_AS(
        parse_equation_json(Json::parse(R"({"d": 2, "A": ["0"], "B": ["1"], "C": ["1"]})")),
        Error);
    // C = 0 in a file is the homogeneous opt-in
    auto hom = parse_equation_json(
        Json::parse(R"({"d": 2, "A": ["-1", "1"], "B": ["0", "1"], "C": ["0"]})"));
    CHECK(hom.eq.homogeneous());
}

TEST_CASE("reports are deterministic") {
    auto eq = testutil::worked_equation(1, 1, 1);
    RunConfig cfg;
    cfg.primitive_steps = 8;
    auto s1 = LaurentSeries::expand(eq, 0, 64);
    auto r1 = compute_mu(eq, s1, 2, cfg);
    auto s2 = LaurentSeries::expand(eq, 0, 64);
    auto r2 = compute_mu(eq, s2, 2, cfg);
    CHECK(exponent_result_to_json(r1, 2).dump() == exponent_result_to_json(r2, 2).dump());

    auto rat1 = rationality_verdict(eq, s1);
    auto rat2 = rationality_verdict(eq, s2);
    CHECK(rationality_report_to_json(rat1).dump() == rationality_report_to_json(rat2).dump());
}

TEST_CASE("csv emission shape") {
    auto eq = testutil::worked_equation(1, 1, 1);
    auto s = LaurentSeries::expand(eq, 0, 64);
    auto cf = cf_expand(s, 2);
    std::vector<ApproximationRecord> recs;
    for (long m = 1; m <= 3; ++m)
        recs.push_back(build_approx(cf.convergents()[1], eq, 2, m, s, 200));
    std::string csv = records_to_csv(recs);
    CHECK(csv.rfind("k,m,log10_q,log10_err,ratio\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
