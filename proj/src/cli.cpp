#include "henon/cli.hpp"

#include "henon/io.hpp"
#include "henon/iteration.hpp"
#include "henon/oracle.hpp"
#include "henon/radial.hpp"
#include "henon/verifier.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

namespace henon::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string to_string(Subcommand s) {
    switch (s) {
    case Subcommand::sequences: return "sequences";
    case Subcommand::solve: return "solve";
    case Subcommand::verify: return "verify";
    case Subcommand::blowup: return "blowup";
    case Subcommand::oracle: return "oracle";
    case Subcommand::decay: return "decay";
    case Subcommand::sweep: return "sweep";
    }
    return "sequences";
}

Subcommand subcommand_from_string(const std::string& name) {
    for (auto s : {Subcommand::sequences, Subcommand::solve, Subcommand::verify, Subcommand::blowup,
                   Subcommand::oracle, Subcommand::decay, Subcommand::sweep}) {
        if (to_string(s) == name) return s;
    }
    throw UsageError("unknown subcommand '" + name + "'");
}

std::map<std::string, double> default_tolerances() {
    return {{"ivp", 1e-12}, {"margin", 1e-6}, {"potential", 1e-4}, {"shooting", 1e-12}, {"slope", 0.2}};
}

namespace {

double parse_number(const std::string& text, const std::string& what) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (text.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(value)) {
        throw UsageError("malformed number '" + text + "' for " + what);
    }
    return value;
}

int parse_int(const std::string& text, const std::string& what) {
    const double x = parse_number(text, what);
    if (x != std::floor(x) || std::abs(x) > 1e6) throw UsageError("expected an integer for " + what + ", got '" + text + "'");
    return static_cast<int>(x);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

std::string point_label(const ProblemParams& params) {
    return "n" + std::to_string(params.n) + "_p" + io::format_double(params.p) + "_a" + io::format_double(params.a);
}

} // namespace

std::vector<double> parse_range(const std::string& text) {
    if (text.find(',') != std::string::npos) {
        std::vector<double> out;
        for (const auto& item : split(text, ',')) out.push_back(parse_number(item, "list"));
        return out;
    }
    const auto parts = split(text, ':');
    if (parts.size() == 1) return {parse_number(parts[0], "value")};
    if (parts.size() > 3) throw UsageError("range '" + text + "' has too many fields");
    const double lo = parse_number(parts[0], "range start");
    const double hi = parse_number(parts[1], "range end");
    const double step = parts.size() == 3 ? parse_number(parts[2], "range step") : 1.0;
    if (!(step > 0.0)) throw UsageError("range step must be positive");
    std::vector<double> out;
    if (hi < lo) return out;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 100000) throw UsageError("range '" + text + "' is too long");
    for (std::size_t i = 0; i < count; ++i) out.push_back(lo + step * static_cast<double>(i));
    return out;
}

namespace {

struct RawOptions {
    std::string n = "8", p = "5", a = "0";
    std::string mode = "strict";
    std::string target = "sequences";
    std::size_t K = 200;
    double u0 = 1.0, v0 = -1.0, escape = 1e6, r_max = 1e3;
    std::size_t trials = 10000, workers = 4, cap = 500;
    std::uint64_t seed = 1;
    std::string out;
    std::map<std::string, double> tol = default_tolerances();
};

std::unique_ptr<CLI::App> build_app(RawOptions& raw) {
    auto app = std::make_unique<CLI::App>("Numerical lab for the fourth-order Henon equation", "henonlab");
    app->set_config("--config", "", "key=value configuration file")->check(CLI::ExistingFile);
    app->allow_config_extras(CLI::config_extras_mode::error);
    app->require_subcommand(1, 1);
    app->add_option("--n", raw.n, "dimension (sweep: range or list)");
    app->add_option("--p", raw.p, "exponent p (sweep: range or list)");
    app->add_option("--a", raw.a, "weight exponent a (sweep: range or list)");
    app->add_option("--mode", raw.mode, "strict or exploratory")->check(CLI::IsMember({"strict", "exploratory"}));
    app->add_option("--k", raw.K, "iteration depth K")->check(CLI::Range(1, 100000));
    app->add_option("--u0", raw.u0, "u(0) for shooting and blow-up runs");
    app->add_option("--v0", raw.v0, "v(0) < 0 for blow-up runs");
    app->add_option("--escape", raw.escape, "escape value for blow-up runs");
    app->add_option("--r-max", raw.r_max, "outer radius of shooting profiles");
    app->add_option("--seed", raw.seed, "seed for randomized checks");
    app->add_option("--trials", raw.trials, "randomized trials per inequality");
    app->add_option("--workers", raw.workers, "sweep worker threads")->check(CLI::Range(1, 256));
    app->add_option("--target", raw.target, "subcommand run at each sweep point");
    app->add_option("--sweep-cap", raw.cap, "maximum sweep grid size");
    app->add_option("--out", raw.out, std::string("output directory (default $") + kOutputEnv + ")");
    for (auto& [key, value] : raw.tol) {
        app->add_option("--tol-" + key, value, "tolerance '" + key + "'");
    }
    const std::pair<Subcommand, const char*> commands[] = {
        {Subcommand::sequences, "iteration sequences, coefficients and weight bounds"},
        {Subcommand::solve, "shoot for the entire decaying radial solution"},
        {Subcommand::verify, "pointwise inequality, ladder and curvature on a shooting profile"},
        {Subcommand::blowup, "radial average with v(0) < 0 and its growth envelopes"},
        {Subcommand::oracle, "identity and inequality oracles"},
        {Subcommand::decay, "integral decay slopes and the Newton potential check"},
        {Subcommand::sweep, "run --target over a grid of (n, p, a)"},
    };
    for (const auto& [s, help] : commands) app->add_subcommand(to_string(s), help)->fallthrough();
    return app;
}

RunConfig resolve(const CLI::App& app, const RawOptions& raw) {
    RunConfig cfg;
    cfg.subcommand = subcommand_from_string(app.get_subcommands().front()->get_name());
    cfg.mode = mode_from_string(raw.mode);
    cfg.K = raw.K;
    cfg.u0 = raw.u0;
    cfg.v0 = raw.v0;
    cfg.escape = raw.escape;
    cfg.r_max = raw.r_max;
    cfg.trials = raw.trials;
    cfg.workers = raw.workers;
    cfg.seed = raw.seed;
    cfg.tolerances = raw.tol;
    for (const auto& [key, value] : cfg.tolerances) {
        if (!(value > 0.0) || !std::isfinite(value)) throw UsageError("tolerance '" + key + "' must be positive");
    }
    if (!raw.out.empty()) {
        cfg.output_dir = raw.out;
    } else if (const char* env = std::getenv(kOutputEnv); env != nullptr && *env != '\0') {
        cfg.output_dir = env;
    } else {
        cfg.output_dir = "henonlab-out";
    }

    if (cfg.subcommand == Subcommand::sweep) {
        SweepGrid grid;
        grid.target = subcommand_from_string(raw.target);
        if (grid.target == Subcommand::sweep) throw UsageError("a sweep cannot target sweep");
        for (double x : parse_range(raw.n)) {
            if (x != std::floor(x)) throw UsageError("sweep dimensions must be integers");
            grid.n.push_back(static_cast<int>(x));
        }
        grid.p = parse_range(raw.p);
        grid.a = parse_range(raw.a);
        grid.cap = raw.cap;
        for (auto* v : {&grid.p, &grid.a}) {
            std::sort(v->begin(), v->end());
            v->erase(std::unique(v->begin(), v->end()), v->end());
        }
        std::sort(grid.n.begin(), grid.n.end());
        grid.n.erase(std::unique(grid.n.begin(), grid.n.end()), grid.n.end());
        if (grid.size() > grid.cap) {
            throw UsageError("sweep grid has " + std::to_string(grid.size()) + " points, above the cap of " +
                             std::to_string(grid.cap));
        }
        cfg.sweep = grid;
    } else {
        cfg.n = parse_int(raw.n, "--n");
        cfg.p = parse_number(raw.p, "--p");
        cfg.a = parse_number(raw.a, "--a");
    }
    return cfg;
}

} // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
    RawOptions raw;
    auto app = build_app(raw);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app->parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    return resolve(*app, raw);
}

json to_json(const RunConfig& config) {
    json j;
    j["subcommand"] = to_string(config.subcommand);
    j["mode"] = to_string(config.mode);
    j["K"] = config.K;
    j["u0"] = config.u0;
    j["v0"] = config.v0;
    j["escape"] = config.escape;
    j["r_max"] = config.r_max;
    j["trials"] = config.trials;
    j["workers"] = config.workers;
    j["seed"] = config.seed;
    j["tolerances"] = config.tolerances;
    j["output_dir"] = config.output_dir.string();
    if (config.sweep) {
        json s;
        s["target"] = to_string(config.sweep->target);
        s["n"] = config.sweep->n;
        s["p"] = config.sweep->p;
        s["a"] = config.sweep->a;
        s["cap"] = config.sweep->cap;
        j["sweep"] = s;
    } else {
        j["n"] = config.n;
        j["p"] = config.p;
        j["a"] = config.a;
    }
    return j;
}

namespace {

json params_json(const ProblemParams& params) {
    return {{"n", params.n},
            {"p", params.p},
            {"a", params.a},
            {"mode", to_string(params.mode)},
            {"critical_p", params.derived.critical_p},
            {"supercritical", params.supercritical()}};
}

std::string combine(const std::vector<Verdict>& verdicts) {
    bool all_pass = true;
    for (Verdict v : verdicts) {
        if (v == Verdict::fail) return "fail";
        if (v != Verdict::pass) all_pass = false;
    }
    if (all_pass) return "pass";
    for (Verdict v : verdicts) {
        if (v == Verdict::outside_weight_range) return to_string(v);
    }
    return "report-only";
}

Verdict from_bool(bool ok) { return ok ? Verdict::pass : Verdict::fail; }

json profile_summary(const RadialProfile& profile) {
    json warnings = json::array();
    for (const auto& w : profile.meta.warnings) warnings.push_back(w);
    return {{"classification", to_string(profile.meta.classification)},
            {"points", profile.size()},
            {"r_start", profile.r.front()},
            {"r_end", profile.r.back()},
            {"theorem_covered", profile.meta.theorem_covered},
            {"warnings", warnings}};
}

void write_profile_csv(const RadialProfile& profile, const fs::path& path) {
    io::write_text(path, io::columns_to_csv({"r", "u", "du", "v", "dv"},
                                            {&profile.r, &profile.u, &profile.du, &profile.v, &profile.dv})
                             .str());
}

ShootingResult shoot(const RunConfig& cfg, const ProblemParams& params) {
    ShootingOptions opts;
    opts.r_max = cfg.r_max;
    opts.ivp_tol = cfg.tolerances.at("ivp");
    return shoot_entire_solution(params, cfg.u0, cfg.tolerances.at("shooting"), opts);
}

json shooting_json(const ShootingResult& sh) {
    json trace = json::array();
    for (const auto& t : sh.classification_trace) trace.push_back({{"v0", t.v0}, {"event", to_string(t.event)}});
    json warnings = json::array();
    for (const auto& w : sh.warnings) warnings.push_back(w);
    return {{"v0_star", sh.v0_star},
            {"bracket", {sh.bracket.first, sh.bracket.second}},
            {"trials", sh.classification_trace.size()},
            {"trace", trace},
            {"tail_slope_deviation", io::number(sh.tail_slope_deviation)},
            {"profile", profile_summary(sh.profile)},
            {"warnings", warnings}};
}

PointResult run_sequences(const RunConfig& cfg, const ProblemParams& params, const fs::path& dir) {
    const IterationTable table = make_iteration_table(params, cfg.K);
    io::CsvWriter csv({"k", "alpha", "beta", "I1", "I1_closed", "I2", "I3", "I4", "A"});
    bool A_positive = true;
    for (const auto& row : table.rows) {
        csv.add_numeric_row({static_cast<double>(row.k), row.alpha_k, row.beta_k, row.I1, row.I1_closed, row.I2,
                             row.I3, row.I4, row.A});
        if (!(row.A > 0.0)) A_positive = false;
    }
    io::write_text(dir / "sequences.csv", csv.str());

    const std::size_t growth_depth = std::min<std::size_t>(cfg.K, 30);
    const GrowthTable growth = growth_sequences(params, growth_depth);
    io::CsvWriter gcsv({"k", "t", "t_closed", "s", "s_closed", "log_Mk_bound", "r_ratio", "r_cumulative"});
    for (const auto& g : growth.rows) {
        gcsv.add_numeric_row({static_cast<double>(g.k), g.t_recursive.value, g.t_closed.value, g.s_recursive.value,
                              g.s_closed.value, g.Mk_bound.log_value, g.r_ratio, g.r_cumulative});
    }
    io::write_text(dir / "growth.csv", gcsv.str());

    const bool alpha_increasing = monotonicity(table.alpha).strictly_increasing;
    const bool beta_nondecreasing = monotonicity(table.beta).nondecreasing;
    json convergence = nullptr;
    for (std::size_t k = 0; k < table.alpha.size(); ++k) {
        if (convergence.is_null() && std::abs(table.alpha[k] - params.derived.alpha_limit) < 1e-10 &&
            std::abs(table.beta[k] - params.derived.beta_limit) < 1e-10) {
            convergence = k;
        }
    }
    const ExponentTable ex = exponent_table(params);
    json summary;
    summary["params"] = params_json(params);
    summary["K"] = cfg.K;
    summary["alpha_K"] = table.alpha[cfg.K];
    summary["beta_K"] = table.beta[cfg.K];
    summary["alpha_limit"] = params.derived.alpha_limit;
    summary["beta_limit"] = params.derived.beta_limit;
    summary["convergence_iterations"] = convergence;
    summary["alpha_increasing"] = alpha_increasing;
    summary["beta_nondecreasing"] = beta_nondecreasing;
    summary["limit"] = {{"I3", table.limit.I3},
                        {"I3_factored", table.limit.I3_factored},
                        {"A", io::number(table.limit.A)},
                        {"A_denominator", table.limit.A_denominator}};
    summary["exponents"] = {{"s", ex.s},         {"eta1", ex.eta1}, {"eta2", ex.eta2},
                            {"eta3", ex.eta3},   {"eta", ex.eta},   {"side_condition", ex.side_condition},
                            {"decay", ex.decay_exponents}};
    summary["growth_base"] = growth.growth_base;
    Verdict verdict = Verdict::report_only;
    if (params.mode == Mode::strict) {
        const WeightBoundReport wb = admissible_weight_bound(params, cfg.K);
        summary["weight_bound"] = {{"inf", wb.inf_bound},
                                   {"window_min", wb.window_min},
                                   {"argmin", wb.argmin},
                                   {"A_limit", wb.A_limit},
                                   {"nonincreasing", wb.nonincreasing},
                                   {"nondecreasing", wb.nondecreasing}};
        summary["theorem_regime"] = theorem_regime(params);
        verdict = from_bool(A_positive && alpha_increasing && beta_nondecreasing);
    }
    const std::string v = to_string(verdict);
    summary["verdict"] = v;
    io::write_text(dir / "sequences.json", io::dump_json(summary));
    return {v, summary};
}

PointResult run_solve(const RunConfig& cfg, const ProblemParams& params, const fs::path& dir) {
    const ShootingResult sh = shoot(cfg, params);
    write_profile_csv(sh.profile, dir / "profile.csv");
    json summary = shooting_json(sh);
    summary["params"] = params_json(params);
    summary["u0"] = cfg.u0;
    const std::string v =
        to_string(from_bool(sh.profile.meta.classification == Classification::entire_like));
    summary["verdict"] = v;
    io::write_text(dir / "solve.json", io::dump_json(summary));
    return {v, summary};
}

PointResult run_verify(const RunConfig& cfg, const ProblemParams& params, const fs::path& dir) {
    const ShootingResult sh = shoot(cfg, params);
    const double tol = cfg.tolerances.at("margin");
    const InequalityReport ir = inequality_report(sh.profile, params, tol);
    const CurvatureReport cr = conformal_scalar_curvature(sh.profile, params);
    io::write_text(dir / "margins.csv",
                   io::columns_to_csv({"r", "lhs", "rhs_main", "rhs_souplet", "margin_main", "margin_souplet",
                                       "dominance", "S_g"},
                                      {&ir.r, &ir.lhs, &ir.rhs_main, &ir.rhs_souplet, &ir.margins_main,
                                       &ir.margins_souplet, &ir.dominance, &cr.S_g})
                       .str());
    io::CsvWriter ladder({"k", "max_w"});
    for (std::size_t i = 0; i < ir.ladder_max.size(); ++i) {
        ladder.add_numeric_row({static_cast<double>(i) - 1.0, ir.ladder_max[i]});
    }
    io::write_text(dir / "ladder.csv", ladder.str());

    const Verdict strengthening = from_bool(ir.min_dominance >= 0.0);
    json summary;
    summary["params"] = params_json(params);
    summary["shooting"] = shooting_json(sh);
    summary["min_margin_main"] = ir.min_margin_main;
    summary["argmin_radius"] = ir.argmin_radius;
    summary["min_margin_souplet"] = ir.min_margin_souplet;
    summary["min_dominance"] = ir.min_dominance;
    summary["scale"] = ir.scale;
    summary["tol_rel"] = ir.tol_rel;
    summary["weight_bound"] = io::number(ir.weight_bound);
    summary["inequality_verdict"] = to_string(ir.verdict);
    summary["ladder_verdict"] = to_string(ir.ladder_verdict);
    summary["ladder_max_over_scale"] = io::number(
        *std::max_element(ir.ladder_max.begin(), ir.ladder_max.end()) / std::max(ir.scale, 1e-300));
    summary["min_S_g"] = cr.min_S_g;
    summary["curvature_verdict"] = to_string(cr.verdict);
    summary["curvature_identity_residual"] = fd::max_abs_finite(cr.identity_residual);
    summary["strengthening_verdict"] = to_string(strengthening);
    const std::string v = combine({ir.verdict, ir.ladder_verdict, cr.verdict, strengthening});
    summary["verdict"] = v;
    io::write_text(dir / "verify.json", io::dump_json(summary));
    return {v, summary};
}

PointResult run_blowup(const RunConfig& cfg, const ProblemParams& params, const fs::path& dir) {
    const BlowupReport br = simulate_average_blowup(params, cfg.u0, cfg.v0, cfg.escape, 3, cfg.tolerances.at("ivp") * 10.0);
    write_profile_csv(br.profile, dir / "blowup_profile.csv");
    io::CsvWriter env({"k", "r_k", "points", "min_log_margin", "pass"});
    json checks = json::array();
    bool envelopes = true;
    for (const auto& e : br.envelope_checks) {
        env.add_numeric_row({static_cast<double>(e.k), e.r_k, static_cast<double>(e.points), e.min_log_margin,
                             e.pass ? 1.0 : 0.0});
        checks.push_back({{"k", e.k}, {"r_k", e.r_k}, {"points", e.points},
                          {"min_log_margin", io::number(e.min_log_margin)}, {"pass", e.pass}});
        envelopes = envelopes && e.pass;
    }
    io::write_text(dir / "envelope.csv", env.str());
    json summary;
    summary["params"] = params_json(params);
    summary["u0"] = cfg.u0;
    summary["v0"] = cfg.v0;
    summary["escape"] = cfg.escape;
    summary["alpha_bar"] = br.alpha_bar;
    summary["bound_check"] = br.bound_check;
    summary["min_quadratic_margin"] = br.min_quadratic_margin;
    summary["R_escape"] = br.R_escape ? json(*br.R_escape) : json(nullptr);
    summary["partial"] = br.partial;
    summary["v_nonincreasing"] = br.v_nonincreasing;
    summary["v_below_origin"] = br.v_below_origin;
    summary["slope_bound"] = br.slope_bound;
    summary["r_zero"] = br.r_zero;
    summary["envelope_checks"] = checks;
    summary["growth_base"] = br.growth.growth_base;
    const bool ok = br.bound_check == 1.0 && br.R_escape.has_value() && envelopes && br.v_nonincreasing &&
                    br.v_below_origin && br.slope_bound;
    const std::string v = to_string(from_bool(ok));
    summary["verdict"] = v;
    io::write_text(dir / "blowup.json", io::dump_json(summary));
    return {v, summary};
}

json residual_json(const OracleResidual& r) {
    return {{"name", r.name},
            {"grid_h", r.grid_h},
            {"residual", io::numbers(r.residual)},
            {"scale", r.scale},
            {"order", io::number(r.order)},
            {"order_threshold", r.order_threshold},
            {"residual_cap", r.residual_cap},
            {"pass", r.pass}};
}

json sweep_json(const RandomSweep& s) {
    return {{"name", s.name},   {"seed", s.seed},       {"trials", s.trials},
            {"tol", s.tol},     {"violations", s.violations},
            {"min_relative_margin", io::number(s.min_relative_margin)}, {"pass", s.pass}};
}

PointResult run_oracle(const RunConfig& cfg, const ProblemParams& params, const fs::path& dir) {
    std::vector<Verdict> verdicts;
    json summary;
    summary["params"] = params_json(params);
    summary["seed"] = cfg.seed;

    const RandomSweep trace = random_trace_sweep(cfg.seed, cfg.trials);
    const RandomSweep square = random_square_sweep(cfg.seed + 1, cfg.trials);
    summary["random"] = {sweep_json(trace), sweep_json(square)};
    verdicts.push_back(from_bool(trace.pass));
    verdicts.push_back(from_bool(square.pass));

    io::CsvWriter csv({"name", "h", "residual"});
    json residuals = json::array();
    auto record = [&](const OracleResidual& r, const std::string& label) {
        OracleResidual copy = r;
        copy.name = label;
        for (std::size_t i = 0; i < r.grid_h.size(); ++i) {
            csv.add_row({label, io::format_double(r.grid_h[i]), io::format_double(r.residual[i])});
        }
        residuals.push_back(residual_json(copy));
        verdicts.push_back(from_bool(r.pass));
    };
    const TestFunctionSpec gaussian{TestFunction::gaussian};
    const TestFunctionSpec bubble{TestFunction::bubble};
    const auto g = check_expansion_identities(gaussian, params, 1.0, params.derived.q, 0.1);
    const auto b = check_expansion_identities(bubble, params, 1.0, params.derived.q, 0.5);
    record(g[0], "J-expansion/gaussian");
    record(g[1], "I-expansion/gaussian");
    record(b[0], "J-expansion/bubble");
    record(b[1], "I-expansion/bubble");

    const RadialProfile exact = critical_bubble(params.n, 1.0, log_grid(1e-3, 1e3, 4001));
    const ProblemParams& bp = exact.meta.params;
    const OracleResidual aux = check_auxiliary_equation(exact, bp);
    record(aux, "auxiliary/bubble");
    const RadialProfile control = synthetic_profile(gaussian, bp, log_grid(1e-3, 10.0, 4001));
    const OracleResidual neg = check_auxiliary_equation(control, bp);
    const double ratio = neg.residual.back() / std::max(aux.residual.back(), 1e-300);
    for (std::size_t i = 0; i < neg.grid_h.size(); ++i) {
        csv.add_row({"auxiliary/gaussian-control", io::format_double(neg.grid_h[i]), io::format_double(neg.residual[i])});
    }
    summary["negative_control"] = {{"residual", neg.residual.back()}, {"solution_residual", aux.residual.back()},
                                   {"ratio", ratio}, {"pass", ratio >= 100.0}};
    verdicts.push_back(from_bool(ratio >= 100.0));

    const PotentialReport pot = newton_potential_check(exact, bp);
    const bool pot_ok = pot.tail_converges && pot.max_abs_h <= cfg.tolerances.at("potential") * pot.sup_v;
    summary["potential_bubble"] = {{"max_abs_h", pot.max_abs_h}, {"sup_v", pot.sup_v}, {"c1", pot.c1},
                                   {"c2", pot.c2}, {"omega_n", pot.omega_n}, {"pass", pot_ok}};
    verdicts.push_back(from_bool(pot_ok));
    summary["residuals"] = residuals;
    io::write_text(dir / "oracle_residuals.csv", csv.str());

    const std::string v = combine(verdicts);
    summary["verdict"] = v;
    io::write_text(dir / "oracle.json", io::dump_json(summary));
    return {v, summary};
}

PointResult run_decay(const RunConfig& cfg, const ProblemParams& params, const fs::path& dir) {
    const ShootingResult sh = shoot(cfg, params);
    std::vector<Verdict> verdicts;
    json slopes = json::object();
    io::CsvWriter csv({"quantity", "R", "integral"});
    for (auto q : {DecayQuantity::lemma1bound, DecayQuantity::corollary_u, DecayQuantity::lemma1boundLap,
                   DecayQuantity::corgrad, DecayQuantity::delta2}) {
        const SlopeReport s = decay_slope_check(sh.profile, params, q, 21, cfg.tolerances.at("slope"));
        for (std::size_t i = 0; i < s.R.size(); ++i) {
            csv.add_row({to_string(q), io::format_double(s.R[i]), io::format_double(s.integral[i])});
        }
        slopes[to_string(q)] = {{"predicted", s.predicted}, {"fitted", s.fitted}, {"pass", s.pass}};
        verdicts.push_back(from_bool(s.pass));
    }
    io::write_text(dir / "decay.csv", csv.str());
    const PotentialReport pot = newton_potential_check(sh.profile, params);
    io::write_text(dir / "potential.csv",
                   io::columns_to_csv({"r", "w", "v", "h"}, {&pot.r, &pot.w_vals, &sh.profile.v, &pot.h_vals}).str());
    const bool pot_ok = pot.tail_converges && pot.max_abs_h <= cfg.tolerances.at("potential") * pot.sup_v;
    verdicts.push_back(from_bool(pot_ok));
    verdicts.push_back(from_bool(sh.profile.meta.classification == Classification::entire_like));

    json summary;
    summary["params"] = params_json(params);
    summary["shooting"] = shooting_json(sh);
    summary["slopes"] = slopes;
    summary["potential"] = {{"max_abs_h", pot.max_abs_h}, {"sup_v", pot.sup_v}, {"c1", pot.c1}, {"c2", pot.c2},
                            {"tail_exponent", pot.tail_exponent}, {"tail_converges", pot.tail_converges},
                            {"fit_residual", pot.fit_residual}, {"omega_n", pot.omega_n}, {"pass", pot_ok}};
    const std::string v = combine(verdicts);
    summary["verdict"] = v;
    io::write_text(dir / "decay.json", io::dump_json(summary));
    return {v, summary};
}

// Columns pulled from each point summary into the sweep table.
std::vector<std::pair<std::string, json::json_pointer>> sweep_columns(Subcommand target) {
    using P = json::json_pointer;
    switch (target) {
    case Subcommand::sequences:
        return {{"alpha_limit", P("/alpha_limit")}, {"beta_limit", P("/beta_limit")},
                {"convergence_iterations", P("/convergence_iterations")}, {"A_limit", P("/limit/A")},
                {"weight_bound", P("/weight_bound/inf")}};
    case Subcommand::solve:
        return {{"v0_star", P("/v0_star")}, {"classification", P("/profile/classification")},
                {"tail_slope_deviation", P("/tail_slope_deviation")}};
    case Subcommand::verify:
        return {{"min_margin_main", P("/min_margin_main")}, {"scale", P("/scale")}, {"min_S_g", P("/min_S_g")},
                {"ladder_verdict", P("/ladder_verdict")}, {"weight_bound", P("/weight_bound")}};
    case Subcommand::blowup:
        return {{"alpha_bar", P("/alpha_bar")}, {"R_escape", P("/R_escape")}, {"bound_check", P("/bound_check")}};
    case Subcommand::oracle: return {{"negative_control_ratio", P("/negative_control/ratio")}};
    case Subcommand::decay:
        return {{"lemma1bound_fitted", P("/slopes/lemma1bound/fitted")},
                {"lemma1bound_predicted", P("/slopes/lemma1bound/predicted")},
                {"potential_max_abs_h", P("/potential/max_abs_h")}};
    case Subcommand::sweep: break;
    }
    return {};
}

std::string cell(const json& value) {
    if (value.is_null()) return "";
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_float()) return io::format_double(value.get<double>());
    return value.dump();
}

struct Task {
    int n;
    double p, a;
};

struct TaskOutcome {
    std::string verdict;
    json summary;
    std::string error;
};

TaskOutcome run_task(const RunConfig& cfg, Subcommand target, const Task& t, const fs::path& root) {
    TaskOutcome out;
    try {
        const ProblemParams params = validate_params(t.n, t.p, t.a, cfg.mode);
        RunConfig point = cfg;
        point.subcommand = target;
        point.sweep.reset();
        point.n = t.n;
        point.p = t.p;
        point.a = t.a;
        const PointResult r = run_point(point, params, root / "points" / point_label(params));
        out.verdict = r.verdict;
        out.summary = r.summary;
    } catch (const std::exception& e) {
        out.verdict = "error";
        out.error = e.what();
    }
    return out;
}

std::string run_sweep(const RunConfig& cfg) {
    const SweepGrid& grid = *cfg.sweep;
    std::vector<Task> tasks;
    for (int n : grid.n)
        for (double p : grid.p)
            for (double a : grid.a) tasks.push_back({n, p, a});

    std::vector<TaskOutcome> outcomes(tasks.size());
    std::atomic<std::size_t> next{0};
    const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, tasks.size()));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers && !tasks.empty(); ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < tasks.size(); i = next++) {
                    outcomes[i] = run_task(cfg, grid.target, tasks[i], cfg.output_dir);
                }
            });
        }
    }

    const auto columns = sweep_columns(grid.target);
    std::vector<std::string> header = {"n", "p", "a", "verdict"};
    for (const auto& c : columns) header.push_back(c.first);
    header.push_back("error");
    io::CsvWriter csv(header);
    bool all_pass = true;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        std::vector<std::string> row = {std::to_string(tasks[i].n), io::format_double(tasks[i].p),
                                        io::format_double(tasks[i].a), outcomes[i].verdict};
        for (const auto& c : columns) {
            const json& s = outcomes[i].summary;
            row.push_back(s.is_object() && s.contains(c.second) ? cell(s.at(c.second)) : "");
        }
        row.push_back(outcomes[i].error);
        csv.add_row(row);
        if (outcomes[i].verdict == "fail" || outcomes[i].verdict == "error") all_pass = false;
    }
    io::write_text(cfg.output_dir / "sweep.csv", csv.str());
    return all_pass ? "pass" : "fail";
}

void write_manifest(const RunConfig& cfg, const std::string& verdict, int status) {
    json artifacts = json::object();
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(cfg.output_dir)) {
        if (entry.is_regular_file() && entry.path().filename() != "manifest.json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        artifacts[fs::relative(f, cfg.output_dir).generic_string()] = io::sha256_hex(io::read_text(f));
    }
    json manifest;
    manifest["config"] = to_json(cfg);
    manifest["artifacts"] = artifacts;
    manifest["verdict"] = verdict;
    manifest["exit_status"] = status;
    io::write_text(cfg.output_dir / "manifest.json", io::dump_json(manifest));
}

} // namespace

PointResult run_point(const RunConfig& config, const ProblemParams& params, const fs::path& dir) {
    fs::create_directories(dir);
    switch (config.subcommand) {
    case Subcommand::sequences: return run_sequences(config, params, dir);
    case Subcommand::solve: return run_solve(config, params, dir);
    case Subcommand::verify: return run_verify(config, params, dir);
    case Subcommand::blowup: return run_blowup(config, params, dir);
    case Subcommand::oracle: return run_oracle(config, params, dir);
    case Subcommand::decay: return run_decay(config, params, dir);
    case Subcommand::sweep: break;
    }
    throw HenonError("run_point cannot run a sweep");
}

int run(const RunConfig& config) {
    fs::create_directories(config.output_dir);
    std::string verdict;
    int status = 0;
    try {
        if (config.subcommand == Subcommand::sweep) {
            verdict = run_sweep(config);
        } else {
            const ProblemParams params = validate_params(config.n, config.p, config.a, config.mode);
            verdict = run_point(config, params, config.output_dir).verdict;
        }
        status = (verdict == "fail") ? 1 : 0;
    } catch (const std::exception& e) {
        json err = {{"error", e.what()}, {"subcommand", to_string(config.subcommand)}};
        io::write_text(config.output_dir / "error.json", io::dump_json(err));
        std::cerr << "henonlab: " << e.what() << "\n";
        verdict = "error";
        status = 3;
    }
    write_manifest(config, verdict, status);
    std::cout << to_string(config.subcommand) << ": " << verdict << " (" << config.output_dir.string() << ")\n";
    return status;
}

int main_entry(int argc, char** argv) {
    RawOptions raw;
    auto app = build_app(raw);
    try {
        app->parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app->exit(e);
    } catch (const CLI::ParseError& e) {
        app->exit(e);
        return 2;
    }
    RunConfig cfg;
    try {
        cfg = resolve(*app, raw);
    } catch (const std::exception& e) {
        std::cerr << "henonlab: " << e.what() << "\n";
        return 2;
    }
    return run(cfg);
}

} // namespace henon::cli
