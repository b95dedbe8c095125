// Command-line front end: parse equation files, run the pipeline, emit
// machine-readable reports and CSV plot data.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "mahler/mahler.hpp"

using namespace mahler;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitParse = 2;
constexpr int kExitInadmissible = 3;

struct CommonOpts {
    std::string file;
    std::vector<std::string> seed_args;
    long horizon = 200;
    long steps = 24;
    long window = 8;
    long digits = 5000;
    std::vector<long> b_values;
    std::string emit_path;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_b) {
    cmd->add_option("file", o.file, "equation JSON file")->required();
    cmd->add_option("--seed", o.seed_args, "seed assignment k=v for a free coefficient");
    cmd->add_option("--horizon", o.horizon, "gap search horizon");
    cmd->add_option("--steps", o.steps, "primitive sequence iteration steps");
    cmd->add_option("--window", o.window, "period confirmation window (full periods)");
    cmd->add_option("--digits", o.digits, "evaluation precision in decimal digits");
    cmd->add_option("--emit", o.emit_path, "path for CSV plot data");
    if (with_b) cmd->add_option("--b", o.b_values, "evaluation point(s), |b| >= 2");
}

EquationFile load_with_seeds(const CommonOpts& o) {
    EquationFile ef = load_equation_file(o.file);
    for (const auto& s : o.seed_args) {
        auto eq_pos = s.find('=');
        if (eq_pos == std::string::npos) throw ParseError("--seed expects k=v, got '" + s + "'");
        long k;
        try {
            k = std::stol(s.substr(0, eq_pos));
        } catch (const std::exception&) {
            throw ParseError("--seed index '" + s.substr(0, eq_pos) + "' is not an integer");
        }
        ef.seeds[k] = parse_rational(s.substr(eq_pos + 1));
    }
    return ef;
}

RunConfig make_config(const CommonOpts& o) {
    RunConfig cfg;
    cfg.horizon = o.horizon;
    cfg.primitive_steps = o.steps;
    cfg.period_window = o.window;
    cfg.digits = o.digits;
    cfg.b_values = o.b_values;
    cfg.validate();
    return cfg;
}

/// Largest consistent degree whose expansion succeeds, with per-K errors.
struct ExpansionPick {
    std::optional<LaurentSeries> series;
    std::vector<std::pair<long, std::string>> errors;
    std::vector<long> candidates;
};

ExpansionPick pick_expansion(const EquationFile& ef, long n) {
    ExpansionPick pick;
    pick.candidates = infer_degree(ef.eq);
    for (long K : pick.candidates) {
        try {
            pick.series = LaurentSeries::expand(ef.eq, K, n, ef.seeds);
            break;
        } catch (const Error& e) {
            pick.errors.emplace_back(K, e.what());
        }
    }
    return pick;
}

int cmd_expand(const CommonOpts& o, long n) {
    EquationFile ef = load_with_seeds(o);
    Json out;
    out["schema"] = 1;
    out["candidates"] = infer_degree(ef.eq);
    Json expansions = Json::array();
    Json errors = Json::object();
    for (long K : infer_degree(ef.eq)) {
        try {
            auto s = LaurentSeries::expand(ef.eq, K, n, ef.seeds);
            Json row;
            row["K"] = K;
            Json coeffs = Json::array();
            for (long j = 0; j < n; ++j) coeffs.push_back(s.coeff_by_offset(j).get_str());
            row["coefficients"] = std::move(coeffs);
            expansions.push_back(std::move(row));
        } catch (const Error& e) {
            errors[std::to_string(K)] = e.what();
        }
    }
    out["expansions"] = expansions;
    out["errors"] = errors;
    std::cout << out.dump(2) << "\n";
    if (expansions.empty()) {
        std::cerr << "no consistent degree admits an expansion\n";
        return kExitError;
    }
    return kExitOk;
}

int cmd_cf(const CommonOpts& o, long target) {
    EquationFile ef = load_with_seeds(o);
    auto pick = pick_expansion(ef, 32);
    if (!pick.series) {
        for (auto& [K, msg] : pick.errors) std::cerr << "K = " << K << ": " << msg << "\n";
        return kExitError;
    }
    auto cf = cf_expand(*pick.series, target);
    Json out;
    out["schema"] = 1;
    out["K"] = pick.series->degree_value();
    out["terminated"] = cf.terminated();
    out["certified_count"] = cf.certified_count();
    Json quot = Json::array();
    for (const auto& a : cf.quotients()) quot.push_back(poly_to_json(a));
    out["quotients"] = std::move(quot);
    Json conv = Json::array();
    for (const auto& c : cf.convergents()) {
        conv.push_back(Json{{"k", c.k},
                            {"p", poly_to_json(c.p)},
                            {"q", poly_to_json(c.q)},
                            {"den_degree", c.den_degree}});
    }
    out["convergents"] = std::move(conv);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

Json gap_report_rows(const MahlerEquation& eq, LaurentSeries& series, const RunConfig& cfg) {
    auto cf = cf_expand(series, std::min(cfg.horizon, 64L) + 1, cfg.cf);
    auto gaps = enumerate_gaps(cf, std::min(cfg.horizon, 64L));
    classify(gaps, eq);
    Json rows = Json::array();
    for (const auto& g : gaps) {
        Json row;
        row["u"] = g.gap.u;
        row["v"] = g.gap.v;
        row["big"] = g.big;
        row["primitive"] = g.primitive;
        if (g.primitive) {
            IterateOptions opt;
            opt.max_poly_degree = 20000;
            auto seq = iterate_primitive(g, eq, std::min(cfg.primitive_steps, 10L), opt);
            Json rg = Json::array();
            for (const auto& st : seq.steps)
                if (st.r_g >= 0) rg.push_back(st.r_g);
            row["r_g_sequence"] = std::move(rg);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

int cmd_gaps(const CommonOpts& o) {
    EquationFile ef = load_with_seeds(o);
    auto pick = pick_expansion(ef, 64);
    if (!pick.series) {
        for (auto& [K, msg] : pick.errors) std::cerr << "K = " << K << ": " << msg << "\n";
        return kExitError;
    }
    RunConfig cfg = make_config(o);
    Json out;
    out["schema"] = 1;
    out["K"] = pick.series->degree_value();
    out["gaps"] = gap_report_rows(ef.eq, *pick.series, cfg);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_mu(const CommonOpts& o) {
    if (o.b_values.size() != 1) {
        std::cerr << "mu requires exactly one --b\n";
        return kExitParse;
    }
    EquationFile ef = load_with_seeds(o);
    auto pick = pick_expansion(ef, 64);
    if (!pick.series) {
        for (auto& [K, msg] : pick.errors) std::cerr << "K = " << K << ": " << msg << "\n";
        return kExitError;
    }
    RunConfig cfg = make_config(o);
    try {
        auto res = compute_mu(ef.eq, *pick.series, o.b_values[0], cfg);
        std::cout << exponent_result_to_json(res, o.b_values[0]).dump(2) << "\n";
        return kExitOk;
    } catch (const InadmissibleB& e) {
        std::cerr << e.what() << "\n";
        return kExitInadmissible;
    }
}

int cmd_eval(const CommonOpts& o) {
    if (o.b_values.size() != 1) {
        std::cerr << "eval requires exactly one --b\n";
        return kExitParse;
    }
    EquationFile ef = load_with_seeds(o);
    auto pick = pick_expansion(ef, 64);
    if (!pick.series) {
        for (auto& [K, msg] : pick.errors) std::cerr << "K = " << K << ": " << msg << "\n";
        return kExitError;
    }
    long b = o.b_values[0];
    auto ev = eval_f(*pick.series, b, o.digits);
    Json out;
    out["schema"] = 1;
    out["K"] = pick.series->degree_value();
    out["b"] = b;
    out["terms_used"] = ev.terms_used;
    out["tail_log10_estimate"] = ev.tail_log10;
    out["tail_heuristic"] = ev.heuristic;
    // decimal rendering of the exact partial sum to the requested digits
    Rational scaled = ev.partial_sum * pow_rat(Rational(10), o.digits);
    Integer rounded;
    mpz_fdiv_q(rounded.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
    out["value"] = Json{{"scale_pow10", o.digits}, {"scaled_floor", rounded.get_str()}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_check_rationality(const CommonOpts& o) {
    EquationFile ef = load_with_seeds(o);
    auto pick = pick_expansion(ef, 64);
    if (!pick.series) {
        for (auto& [K, msg] : pick.errors) std::cerr << "K = " << K << ": " << msg << "\n";
        return kExitError;
    }
    auto rep = rationality_verdict(ef.eq, *pick.series);
    std::cout << rationality_report_to_json(rep).dump(2) << "\n";
    return kExitOk;
}

std::vector<ApproximationRecord> default_record_grid(const MahlerEquation& eq,
                                                     LaurentSeries& series, long b,
                                                     long digits) {
    std::vector<ApproximationRecord> records;
    auto cf = cf_expand(series, 16);
    auto gaps = enumerate_gaps(cf, 12);
    int taken = 0;
    for (const auto& g : gaps) {
        if (!is_big_gap(g.gap, eq)) continue;
        for (long m = 1; m <= 6; ++m)
            records.push_back(build_approx(g.conv, eq, b, m, series, digits));
        if (++taken == 2) break;  // first two big-gap convergents
    }
    return records;
}

int cmd_report(const CommonOpts& o) {
    EquationFile ef = load_with_seeds(o);
    auto pick = pick_expansion(ef, 64);
    if (!pick.series) {
        for (auto& [K, msg] : pick.errors) std::cerr << "K = " << K << ": " << msg << "\n";
        return kExitError;
    }
    RunConfig cfg = make_config(o);
    Json out;
    out["schema"] = 1;
    out["equation"] = equation_to_json(ef.eq, ef.seeds);
    out["K"] = pick.series->degree_value();
    out["gaps"] = gap_report_rows(ef.eq, *pick.series, cfg);

    Json mus = Json::array();
    bool inadmissible = false;
    for (long b : o.b_values) {
        try {
            auto res = compute_mu(ef.eq, *pick.series, b, cfg);
            mus.push_back(exponent_result_to_json(res, b));
        } catch (const InadmissibleB& e) {
            mus.push_back(Json{{"b", b}, {"error", e.what()}});
            inadmissible = true;
        }
    }
    out["mu"] = std::move(mus);
    auto rep = rationality_verdict(ef.eq, *pick.series);
    out["rationality"] = rationality_report_to_json(rep);

    if (!o.emit_path.empty() && !o.b_values.empty()) {
        auto records =
            default_record_grid(ef.eq, *pick.series, o.b_values.front(), o.digits);
        std::ofstream csv(o.emit_path);
        if (!csv) {
            std::cerr << "cannot write '" << o.emit_path << "'\n";
            return kExitError;
        }
        csv << records_to_csv(records);
        out["csv"] = o.emit_path;
    }
    std::cout << out.dump(2) << "\n";
    return inadmissible ? kExitInadmissible : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"irrationality exponents of Mahler numbers from f(z) = (A f(z^d) + C)/B"};
    app.require_subcommand(1);

    CommonOpts o;
    long expand_n = 8;
    long cf_target = 12;

    auto* c_expand = app.add_subcommand("expand", "degree candidates and series coefficients");
    add_common(c_expand, o, false);
    c_expand->add_option("-n", expand_n, "number of coefficients");

    auto* c_cf = app.add_subcommand("cf", "certified continued-fraction expansion");
    add_common(c_cf, o, false);
    c_cf->add_option("--target", cf_target, "certify through this denominator degree");

    auto* c_gaps = app.add_subcommand("gaps", "gap structure of Phi(f)");
    add_common(c_gaps, o, false);

    auto* c_mu = app.add_subcommand("mu", "irrationality exponent of f(b)");
    add_common(c_mu, o, true);

    auto* c_eval = app.add_subcommand("eval", "high-precision evaluation of f(b)");
    add_common(c_eval, o, true);

    auto* c_rat = app.add_subcommand("check-rationality", "rationality-of-exponent analysis");
    add_common(c_rat, o, false);

    auto* c_report = app.add_subcommand("report", "full machine-readable report");
    add_common(c_report, o, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(c_expand)) return cmd_expand(o, expand_n);
        if (app.got_subcommand(c_cf)) return cmd_cf(o, cf_target);
        if (app.got_subcommand(c_gaps)) return cmd_gaps(o);
        if (app.got_subcommand(c_mu)) return cmd_mu(o);
        if (app.got_subcommand(c_eval)) return cmd_eval(o);
        if (app.got_subcommand(c_rat)) return cmd_check_rationality(o);
        if (app.got_subcommand(c_report)) return cmd_report(o);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitParse;
}
