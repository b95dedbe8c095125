#pragma once

#include <json.hpp>

#include <fstream>
#include <string>

#include "mahler/exponent.hpp"
#include "mahler/numeric.hpp"
#include "mahler/rationality.hpp"

namespace mahler {

using Json = nlohmann::ordered_json;

/// Polynomial text form: coefficient list lowest-to-highest, each an exact
/// rational "p/q" or integer string.
inline Json poly_to_json(const Polynomial& p) {
    Json arr = Json::array();
    for (const auto& c : p.coefficients()) arr.push_back(c.get_str());
    return arr;
}

inline Polynomial poly_from_json(const Json& j, const std::string& name) {
    if (!j.is_array()) throw ParseError("polynomial '" + name + "' must be an array");
    std::vector<Rational> coeffs;
    for (const auto& e : j) {
        if (e.is_string())
            coeffs.push_back(parse_rational(e.get<std::string>()));
        else if (e.is_number_integer())
            coeffs.push_back(Rational(e.get<long>()));
        else
            throw ParseError("polynomial '" + name + "': entries must be rational strings");
    }
    return Polynomial{std::move(coeffs)};
}

struct EquationFile {
    MahlerEquation eq;
    SeedMap seeds;
};

/// Equation file schema:
///   { "d": 3, "A": [...], "B": [...], "C": [...], "seeds": {"0": "1"} }
inline EquationFile parse_equation_json(const Json& j) {
    if (!j.is_object()) throw ParseError("equation file must be a JSON object");
    for (const auto& key : {"d", "A", "B", "C"})
        if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    long d = j.at("d").get<long>();
    Polynomial A = poly_from_json(j.at("A"), "A");
    Polynomial B = poly_from_json(j.at("B"), "B");
    Polynomial C = poly_from_json(j.at("C"), "C");
    SeedMap seeds;
    if (j.contains("seeds")) {
        for (auto it = j.at("seeds").begin(); it != j.at("seeds").end(); ++it) {
            long pos;
            try {
                pos = std::stol(it.key());
            } catch (const std::exception&) {
                throw ParseError("seed index '" + it.key() + "' is not an integer");
            }
            if (it.value().is_string())
                seeds[pos] = parse_rational(it.value().get<std::string>());
            else if (it.value().is_number_integer())
                seeds[pos] = Rational(it.value().get<long>());
            else
                throw ParseError("seed values must be rational strings");
        }
    }
    // a written C = 0 is an explicit opt-in to the homogeneous regime
    return {MahlerEquation(A, B, C, d, C.is_zero()), std::move(seeds)};
}

inline EquationFile load_equation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("parse error in '" + path + "': " + e.what());
    }
    return parse_equation_json(j);
}

inline Json equation_to_json(const MahlerEquation& eq, const SeedMap& seeds = {}) {
    Json j;
    j["d"] = eq.d();
    j["A"] = poly_to_json(eq.A());
    j["B"] = poly_to_json(eq.B());
    j["C"] = poly_to_json(eq.C());
    if (!seeds.empty()) {
        Json s = Json::object();
        for (const auto& [k, v] : seeds) s[std::to_string(k)] = v.get_str();
        j["seeds"] = s;
    }
    return j;
}

inline Json gap_to_json(const Gap& g) { return Json{{"u", g.u}, {"v", g.v}}; }

inline Json exponent_result_to_json(const ExponentResult& res, long b) {
    Json j;
    j["schema"] = 1;
    j["b"] = b;
    j["kind"] = to_string(res.kind);
    if (res.infinite) {
        j["mu"] = "inf";
    } else if (res.kind == ResultKind::enclosure) {
        j["mu"] = Json{{"lo", res.lo.get_str()}, {"hi", res.hi.get_str()}};
    } else {
        j["mu"] = res.value.get_str();
    }
    const MuCertificate& c = res.certificate;
    Json cert;
    cert["series_degree"] = c.series_degree;
    cert["admissible"] = c.admissibility.ok;
    cert["admissibility_evaluations"] = c.admissibility.t_checked;
    cert["horizon_scanned"] = c.horizon_scanned;
    if (c.first_big) cert["first_big_gap"] = gap_to_json(*c.first_big);
    if (c.u_max) cert["u_max"] = *c.u_max;
    cert["anchor_u_zero_caveat"] = c.anchor_u_zero_caveat;
    Json gaps = Json::array();
    for (const auto& g : c.gaps) {
        Json row;
        row["u"] = g.gap.u;
        row["v"] = g.gap.v;
        row["big"] = g.big;
        row["primitive"] = g.primitive;
        if (g.successor_of) row["successor_of_gap_index"] = *g.successor_of;
        gaps.push_back(std::move(row));
    }
    cert["gaps"] = std::move(gaps);
    Json seqs = Json::array();
    for (const auto& s : c.sequences) {
        Json row;
        row["start"] = gap_to_json(s.start);
        row["u_trail"] = s.u_trail;
        row["v_trail"] = s.v_trail;
        row["r_g_sequence"] = s.r_g;
        row["degree_capped"] = s.degree_capped;
        if (s.period) {
            row["period"] = Json{{"n0", s.period->n0}, {"P", s.period->period}};
            row["confirmed_periods"] = s.confirmed_periods;
        }
        row["kind"] = to_string(s.kind);
        if (s.unbounded) {
            row["limsup"] = "inf";
        } else if (s.lo == s.hi) {
            row["limsup"] = s.lo.get_str();
        } else {
            row["limsup"] = Json{{"lo", s.lo.get_str()}, {"hi", s.hi.get_str()}};
        }
        seqs.push_back(std::move(row));
    }
    cert["sequences"] = std::move(seqs);
    cert["empirical_confirmation"] = c.empirical_confirmation;
    cert["warnings"] = c.warnings;
    j["certificate"] = std::move(cert);
    return j;
}

inline Json condition_to_json(const ConditionOutcome& o) {
    return Json{{"status", to_string(o.status)}, {"evidence", o.evidence}};
}

inline Json rationality_report_to_json(const RationalityReport& rep) {
    Json j;
    j["schema"] = 1;
    j["verdict"] = to_string(rep.verdict);
    j["transforms"] = Json{{"z_power_strip", rep.z_power_strip},
                           {"phi_strips", rep.phi_strips}};
    if (rep.transformed) {
        j["transformed_equation"] = equation_to_json(*rep.transformed);
    }
    j["split"] = Json{{"B0", poly_to_json(rep.split.B0)},
                      {"Bm", poly_to_json(rep.split.Bm)},
                      {"Bc", poly_to_json(rep.split.Bc)},
                      {"scalar", rep.split.scalar.get_str()}};
    if (rep.lambda) {
        j["lambda"] = Json{{"lambda1", poly_to_json(rep.lambda->first)},
                           {"lambda2", poly_to_json(rep.lambda->second)}};
    } else {
        j["lambda"] = nullptr;
    }
    j["lemma42"] = Json{{"vacuous", rep.lemma42.vacuous},
                        {"a", condition_to_json(rep.lemma42.a)},
                        {"b", condition_to_json(rep.lemma42.b)},
                        {"c", condition_to_json(rep.lemma42.c)},
                        {"d", condition_to_json(rep.lemma42.d)}};
    j["cyclotomic_premise"] = Json{{"vacuous", rep.bc_vacuous},
                                   {"big_gap_found", rep.big_gap_found},
                                   {"steps_checked", rep.bc_steps_checked},
                                   {"all_coprime", rep.bc_all_coprime},
                                   {"first_violation", rep.bc_first_violation}};
    j["notes"] = rep.notes;
    return j;
}

/// CSV plot data: one row per approximation record.
inline std::string records_to_csv(const std::vector<ApproximationRecord>& records) {
    std::string out = "k,m,log10_q,log10_err,ratio\n";
    char buf[160];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%ld,%ld,%.6f,%.6f,%.6f\n", r.k, r.m, r.log_abs_q,
                      r.log_abs_err, -r.log_abs_err / r.log_abs_q);
        out += buf;
    }
    return out;
}

}  // namespace mahler
