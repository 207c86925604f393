#include "henon/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace henon {

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::report_only: return "report-only";
    case Verdict::outside_weight_range: return "outside-theorem-weight-range";
    }
    return "report-only";
}

namespace {

void require_positive(const RadialProfile& profile) {
    profile.validate();
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (!(profile.u[i] > 0.0)) throw HenonError("profile has nonpositive u; the gradient term divides by u");
    }
}

// |x|^{a/2} u^{(p+1)/2}
double power_term(double r, double u, const ProblemParams& params) {
    const double weight = params.a == 0.0 ? 1.0 : std::pow(r, params.derived.b);
    return weight * std::pow(u, params.derived.q);
}

double gradient_term(double du, double u, double epsilon) { return du * du / (u + epsilon); }

bool verdict_eligible(const RadialProfile& profile, const ProblemParams& params) {
    return params.mode == Mode::strict && params.supercritical() &&
           profile.meta.classification == Classification::entire_like;
}

fd::UniformGrid resampling_grid(const RadialProfile& profile, std::size_t points) {
    if (points < 3) throw HenonError("resampling needs at least three points");
    fd::UniformGrid grid;
    grid.r0 = profile.r.front();
    grid.count = points;
    grid.h = (profile.r.back() - profile.r.front()) / static_cast<double>(points - 1);
    return grid;
}

} // namespace

LadderValues ladder_check(const RadialProfile& profile, const IterationTable& table, double epsilon, std::size_t K,
                          double tol) {
    require_positive(profile);
    if (!(epsilon >= 0.0)) throw HenonError("ladder_check requires epsilon >= 0");
    if (K > table.depth()) throw HenonError("ladder_check: K exceeds the iteration table depth");

    const ProblemParams& params = table.params;
    const std::size_t m = profile.size();
    std::vector<double> grad(m), power(m);
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        grad[i] = gradient_term(profile.du[i], profile.u[i], epsilon);
        power[i] = power_term(profile.r[i], profile.u[i], params);
        const double rhs = params.derived.beta_limit * power[i] +
                           params.derived.alpha_limit * gradient_term(profile.du[i], profile.u[i], 0.0);
        scale = std::max(scale, rhs);
    }

    LadderValues ladder;
    ladder.epsilon = epsilon;
    ladder.K = K;
    ladder.scale = scale;
    ladder.tol = tol;
    ladder.rows.reserve(K + 2);
    for (int k = -1; k <= static_cast<int>(K); ++k) {
        LadderRow row;
        row.k = k;
        row.alpha = k < 0 ? 0.0 : table.alpha[static_cast<std::size_t>(k)];
        row.beta = k < 0 ? 0.0 : table.beta[static_cast<std::size_t>(k)];
        row.w.resize(m);
        row.wtilde.resize(m);
        row.max_w = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const double w = (-profile.v[i] + row.alpha * grad[i]) + row.beta * power[i];
            row.w[i] = w;
            row.wtilde[i] = std::pow(profile.u[i] + epsilon, -row.alpha) * w;
            if (w >= 0.0) row.region_mask.push_back(i);
            if (w > row.max_w) {
                row.max_w = w;
                row.argmax_radius = profile.r[i];
            }
        }
        if (!ladder.rows.empty()) {
            const LadderRow& prev = ladder.rows.back();
            for (std::size_t i = 0; i < m; ++i) {
                if (row.w[i] < prev.w[i]) ladder.ordering_holds = false;
            }
        }
        ladder.rows.push_back(std::move(row));
    }

    if (verdict_eligible(profile, params) && epsilon == 0.0) {
        if (!theorem_regime(params)) {
            ladder.verdict = Verdict::outside_weight_range;
        } else {
            const bool ok = std::all_of(ladder.rows.begin(), ladder.rows.end(),
                                        [&](const LadderRow& row) { return row.max_w <= tol * scale; });
            ladder.verdict = ok ? Verdict::pass : Verdict::fail;
        }
    }
    return ladder;
}

InequalityReport inequality_report(const RadialProfile& profile, const ProblemParams& params, double tol_rel) {
    require_positive(profile);
    if (!(tol_rel >= 0.0)) throw HenonError("inequality_report requires tol_rel >= 0");

    const std::size_t m = profile.size();
    const double beta = params.derived.beta_limit;
    const double beta0 = params.derived.beta_souplet;
    const double alpha = params.derived.alpha_limit;

    InequalityReport report;
    report.tol_rel = tol_rel;
    report.r = profile.r;
    report.lhs = profile.v;
    report.rhs_main.resize(m);
    report.rhs_souplet.resize(m);
    report.margins_main.resize(m);
    report.margins_souplet.resize(m);
    report.dominance.resize(m);
    report.min_margin_main = std::numeric_limits<double>::infinity();
    report.min_margin_souplet = std::numeric_limits<double>::infinity();
    report.min_dominance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const double power = power_term(profile.r[i], profile.u[i], params);
        const double grad = gradient_term(profile.du[i], profile.u[i], 0.0);
        report.rhs_main[i] = beta * power + alpha * grad;
        report.rhs_souplet[i] = beta0 * power;
        report.margins_main[i] = profile.v[i] - report.rhs_main[i];
        report.margins_souplet[i] = profile.v[i] - report.rhs_souplet[i];
        report.dominance[i] = report.rhs_main[i] - report.rhs_souplet[i];
        report.scale = std::max(report.scale, report.rhs_main[i]);
        if (report.margins_main[i] < report.min_margin_main) {
            report.min_margin_main = report.margins_main[i];
            report.argmin_radius = profile.r[i];
        }
        report.min_margin_souplet = std::min(report.min_margin_souplet, report.margins_souplet[i]);
        report.min_dominance = std::min(report.min_dominance, report.dominance[i]);
    }

    report.weight_bound = std::numeric_limits<double>::quiet_NaN();
    const bool strict = params.mode == Mode::strict && params.supercritical();
    if (strict) report.weight_bound = admissible_weight_bound(params, kLimitDepth).inf_bound;

    // The ladder needs a strict-mode table only for A_k; exploratory tables store NaN there.
    const IterationTable table = make_iteration_table(params, kLadderDepth);
    const LadderValues ladder = ladder_check(profile, table, 0.0, kLadderDepth, tol_rel);
    report.ladder_max.reserve(ladder.rows.size());
    for (const auto& row : ladder.rows) report.ladder_max.push_back(row.max_w);
    report.ladder_verdict = ladder.verdict;

    if (verdict_eligible(profile, params)) {
        if (params.a > report.weight_bound) {
            report.verdict = Verdict::outside_weight_range;
        } else {
            report.verdict =
                report.min_margin_main >= -tol_rel * report.scale ? Verdict::pass : Verdict::fail;
        }
    }
    return report;
}

WtildeDiagnostic wtilde_diagnostic(const RadialProfile& profile, double alpha, double beta, double epsilon,
                                   std::size_t fd_points) {
    require_positive(profile);
    const ProblemParams& params = profile.meta.params;
    if (!(params.p + 1.0 > 2.0 * alpha)) {
        throw HenonError("wtilde_diagnostic requires p + 1 > 2 alpha");
    }
    if (!(epsilon >= 0.0)) throw HenonError("wtilde_diagnostic requires epsilon >= 0");

    auto w_at = [&](double r, double u, double du, double v) {
        return (-v + alpha * gradient_term(du, u, epsilon)) + beta * power_term(r, u, params);
    };

    WtildeDiagnostic diag;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (w_at(profile.r[i], profile.u[i], profile.du[i], profile.v[i]) >= 0.0) diag.region_mask.push_back(i);
    }
    diag.mask_empty = diag.region_mask.empty();
    if (diag.mask_empty) return diag;

    const ProfileInterpolant interp(profile);
    const fd::UniformGrid grid = resampling_grid(profile, fd_points);
    std::vector<double> wt(grid.count), w(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double r = std::min(grid.at(i), interp.r_max());
        const auto s = interp(r);
        w[i] = w_at(r, s.u, s.du, s.v);
        wt[i] = std::pow(s.u + epsilon, -alpha) * w[i];
    }
    const auto lap = fd::radial_laplacian(wt, grid, params.n);
    diag.min_laplacian = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < grid.count; ++i) {
        if (w[i] < 0.0 || !std::isfinite(lap[i])) continue;
        diag.fd_radii.push_back(grid.at(i));
        diag.fd_laplacian.push_back(lap[i]);
        diag.min_laplacian = std::min(diag.min_laplacian, lap[i]);
    }
    if (diag.fd_laplacian.empty()) diag.min_laplacian = 0.0;
    diag.subharmonicity_defect = std::max(0.0, -diag.min_laplacian);
    return diag;
}

std::vector<double> curvature_identity_residual(const RadialProfile& profile, const fd::UniformGrid& grid) {
    const ProblemParams& params = profile.meta.params;
    const double nd = params.n;
    const double m = (nd - 2.0) / (nd - 4.0);
    const double m1 = 2.0 / (nd - 4.0);
    const ProfileInterpolant interp(profile);

    std::vector<double> um(grid.count), closed(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double r = std::min(grid.at(i), interp.r_max());
        const auto s = interp(r);
        um[i] = std::pow(s.u, m);
        closed[i] = m * std::pow(s.u, m - 1.0) * (-s.v + m1 * s.du * s.du / s.u);
    }
    auto residual = fd::radial_laplacian(um, grid, params.n);
    for (std::size_t i = 0; i < grid.count; ++i) residual[i] = std::abs(residual[i] - closed[i]);
    return residual;
}

CurvatureReport conformal_scalar_curvature(const RadialProfile& profile, const ProblemParams& params,
                                           std::size_t fd_points) {
    require_positive(profile);
    const double nd = params.n;
    CurvatureReport report;
    report.conformal_exponent = 4.0 / (nd - 4.0);
    report.inner_power = (nd - 2.0) / (nd - 4.0);
    const double m = report.inner_power;
    const double m1 = params.derived.alpha_limit; // m - 1 = 2/(n-4)
    const double prefactor = 4.0 * (nd - 1.0) / (nd - 2.0);
    const double u_power = (nd + 2.0) / (nd - 4.0);

    const std::size_t count = profile.size();
    report.r = profile.r;
    report.S_g.resize(count);
    report.gradient_margin.resize(count);
    report.min_S_g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) {
        const double u = profile.u[i];
        const double inner = -profile.v[i] + m1 * gradient_term(profile.du[i], u, 0.0);
        // S_g = -(4(n-1)/(n-2)) u^{-(n+2)/(n-4)} m u^{m-1} inner; the factor in front of `inner` is positive.
        const double factor = prefactor * std::pow(u, -u_power) * m * std::pow(u, m - 1.0);
        report.S_g[i] = -(factor * inner);
        report.gradient_margin[i] = -inner;
        report.min_S_g = std::min(report.min_S_g, report.S_g[i]);
    }
    report.positive = report.min_S_g > 0.0;

    const fd::UniformGrid grid = resampling_grid(profile, fd_points);
    report.fd_radii = grid.radii();
    report.identity_residual = curvature_identity_residual(profile, grid);

    if (verdict_eligible(profile, params)) report.verdict = report.positive ? Verdict::pass : Verdict::fail;
    return report;
}

} // namespace henon
