#include "henon/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace henon {

namespace {

constexpr double kRoundingFloor = 1e-10;

fd::UniformGrid padded_grid(double r_lo, double r_hi, double h, std::size_t pad) {
    if (!(h > 0.0) || !(r_hi > r_lo)) throw HenonError("oracle window needs r_hi > r_lo and h > 0");
    fd::UniformGrid grid;
    grid.h = h;
    grid.r0 = r_lo - static_cast<double>(pad) * h;
    grid.count = static_cast<std::size_t>(std::llround((r_hi - r_lo) / h)) + 1 + 2 * pad;
    return grid;
}

bool in_window(double r, const OracleWindow& window, double h) {
    return r >= window.r_lo - 1e-9 * h && r <= window.r_hi + 1e-9 * h;
}

void finish(OracleResidual& out, double cap_rel) {
    out.residual_cap = cap_rel * std::max(1.0, out.scale);
    const double floor = kRoundingFloor * std::max(1.0, out.scale);
    std::vector<double> h, res;
    for (std::size_t i = 0; i < out.grid_h.size(); ++i) {
        if (out.residual[i] > floor) {
            h.push_back(out.grid_h[i]);
            res.push_back(out.residual[i]);
        }
    }
    const bool at_floor = h.empty();
    out.order = h.size() >= 2 ? fd::convergence_order(h, res) : std::numeric_limits<double>::quiet_NaN();
    const double smallest = *std::min_element(out.residual.begin(), out.residual.end());
    out.pass = smallest <= out.residual_cap && (at_floor || out.order >= out.order_threshold);
}

} // namespace

TraceCheck check_trace_inequality(const std::vector<std::vector<double>>& matrix) {
    const std::size_t dim = matrix.size();
    if (dim == 0) throw HenonError("trace inequality needs a nonempty matrix");
    double trace = 0.0, norm2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        if (matrix[i].size() != dim) throw HenonError("trace inequality needs a square matrix");
        for (std::size_t j = 0; j < dim; ++j) {
            const double x = matrix[i][j];
            if (!std::isfinite(x)) throw HenonError("trace inequality needs finite entries");
            norm2 += x * x;
        }
        trace += matrix[i][i];
    }
    TraceCheck out;
    out.norm2 = norm2;
    out.margin = static_cast<double>(dim) * norm2 - trace * trace;
    const double tol = 1e-12 * (1.0 + norm2 * norm2);
    out.equality = std::abs(out.margin) <= tol;
    out.within_tolerance = out.margin >= -tol;
    return out;
}

double check_square_inequality(double t, double t_star, double s) {
    if (!std::isfinite(t) || !std::isfinite(t_star) || !std::isfinite(s)) {
        throw HenonError("square inequality needs finite arguments");
    }
    if (!(t <= t_star)) throw HenonError("square inequality hypothesis violated: t <= t_star");
    if (!(t_star <= 0.0)) throw HenonError("square inequality hypothesis violated: t_star <= 0");
    if (!(s >= 0.0)) throw HenonError("square inequality hypothesis violated: s >= 0");
    return (t - s) * (t - s) - (t_star * t_star - 2.0 * t_star * s + s * s);
}

RandomSweep random_trace_sweep(std::uint64_t seed, std::size_t trials, std::size_t dim) {
    if (dim == 0) throw HenonError("random_trace_sweep needs dim >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    RandomSweep out;
    out.name = "trace";
    out.seed = seed;
    out.trials = trials;
    out.min_relative_margin = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> A(dim, std::vector<double>(dim));
    for (std::size_t t = 0; t < trials; ++t) {
        for (auto& row : A)
            for (auto& x : row) x = entry(rng);
        const TraceCheck c = check_trace_inequality(A);
        const double rel = c.margin / (1.0 + c.norm2 * c.norm2);
        out.min_relative_margin = std::min(out.min_relative_margin, rel);
        if (rel < -out.tol) ++out.violations;
    }
    out.pass = out.violations == 0;
    return out;
}

RandomSweep random_square_sweep(std::uint64_t seed, std::size_t trials) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 2.0);
    RandomSweep out;
    out.name = "square";
    out.seed = seed;
    out.trials = trials;
    out.min_relative_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < trials; ++i) {
        const double t_star = -unit(rng);
        const double t = t_star - unit(rng);
        const double s = unit(rng);
        const double margin = check_square_inequality(t, t_star, s);
        const double rel = margin / (1.0 + t * t + t_star * t_star + s * s);
        out.min_relative_margin = std::min(out.min_relative_margin, rel);
        if (rel < -out.tol) ++out.violations;
    }
    out.pass = out.violations == 0;
    return out;
}

std::vector<OracleResidual> check_expansion_identities(const TestFunctionSpec& test_fn, const ProblemParams& params,
                                                       double b, double q, double epsilon,
                                                       const OracleWindow& window) {
    if (!(epsilon > 0.0)) throw HenonError("expansion identities need epsilon > 0");
    if (window.h.empty()) throw HenonError("expansion identities need at least one grid");
    const double nm1 = params.n - 1.0;

    OracleResidual J, I;
    J.name = "J-expansion";
    I.name = "I-expansion";
    for (double h : window.h) {
        const fd::UniformGrid grid = padded_grid(window.r_lo, window.r_hi, h, 2);
        if (!(grid.r0 > 0.0)) throw HenonError("expansion identities need the padded window inside r > 0");
        std::vector<double> u(grid.count);
        for (std::size_t i = 0; i < grid.count; ++i) {
            u[i] = test_function_derivatives(test_fn, params.n, grid.at(i))[0];
            if (!(u[i] > 0.0)) throw HenonError("test function vanishes on the grid");
        }
        const auto du = fd::first_derivative(u, grid);
        const auto d2u = fd::second_derivative(u, grid);
        const auto lap = fd::radial_laplacian(u, grid, params.n);
        const auto dlap = fd::first_derivative(lap, grid);

        std::vector<double> jfun(grid.count), ifun(grid.count);
        for (std::size_t i = 0; i < grid.count; ++i) {
            jfun[i] = std::pow(grid.at(i), b) * std::pow(u[i], q);
            ifun[i] = du[i] * du[i] / (u[i] + epsilon);
        }
        const auto lap_j = fd::radial_laplacian(jfun, grid, params.n);
        const auto lap_i = fd::radial_laplacian(ifun, grid, params.n);

        double res_j = 0.0, res_i = 0.0, scale_j = 0.0, scale_i = 0.0;
        for (std::size_t i = 2; i + 2 < grid.count; ++i) {
            const double r = grid.at(i);
            if (!in_window(r, window, h)) continue;
            const double ux = u[i], g = du[i], g2 = g * g;
            const double expand_j = b * (params.n + b - 2.0) * std::pow(r, b - 2.0) * std::pow(ux, q) +
                                    q * (q - 1.0) * std::pow(r, b) * std::pow(ux, q - 2.0) * g2 +
                                    q * std::pow(r, b) * std::pow(ux, q - 1.0) * lap[i] +
                                    2.0 * b * q * std::pow(r, b - 2.0) * std::pow(ux, q - 1.0) * g * r;
            const double ue = ux + epsilon;
            const double hess2 = d2u[i] * d2u[i] + nm1 * (g / r) * (g / r);
            const double expand_i = 2.0 / ue * hess2 + 2.0 / ue * g * dlap[i] - 4.0 / (ue * ue) * g2 * d2u[i] -
                                    g2 / (ue * ue) * lap[i] + 2.0 * g2 * g2 / (ue * ue * ue);
            res_j = std::max(res_j, std::abs(lap_j[i] - expand_j));
            res_i = std::max(res_i, std::abs(lap_i[i] - expand_i));
            scale_j = std::max(scale_j, std::abs(expand_j));
            scale_i = std::max(scale_i, std::abs(expand_i));
        }
        J.grid_h.push_back(h);
        J.residual.push_back(res_j);
        J.scale = scale_j;
        I.grid_h.push_back(h);
        I.residual.push_back(res_i);
        I.scale = scale_i;
    }
    finish(J, 1e-3);
    finish(I, 1e-3);
    return {J, I};
}

OracleResidual check_auxiliary_equation(const RadialProfile& profile, const ProblemParams& params,
                                        const OracleWindow& window) {
    if (params.a != 0.0) throw HenonError("auxiliary equation is stated for the unweighted equation (a = 0)");
    if (window.h.empty()) throw HenonError("auxiliary equation check needs at least one grid");
    const ProfileInterpolant interp(profile);
    const double c = std::sqrt(2.0 / (params.p + 1.0));
    const double q = params.derived.q;

    OracleResidual out;
    out.name = "auxiliary-equation";
    for (double h : window.h) {
        const fd::UniformGrid grid = padded_grid(window.r_lo, window.r_hi, h, 1);
        if (grid.r0 < interp.r_min() || grid.at(grid.count - 1) > interp.r_max() * (1.0 + 1e-12)) {
            throw HenonError("auxiliary equation window exceeds the profile range");
        }
        std::vector<ProfileInterpolant::Sample> s(grid.count);
        std::vector<double> w(grid.count);
        for (std::size_t i = 0; i < grid.count; ++i) {
            s[i] = interp(std::min(grid.at(i), interp.r_max()));
            if (!(s[i].u > 0.0)) throw HenonError("auxiliary equation needs u > 0 on the window");
            w[i] = -s[i].v + c * std::pow(s[i].u, q);
        }
        const auto lap_w = fd::radial_laplacian(w, grid, params.n);
        double res = 0.0, scale = 0.0;
        for (std::size_t i = 1; i + 1 < grid.count; ++i) {
            if (!in_window(grid.at(i), window, h)) continue;
            const double u = s[i].u;
            const double lhs = c * std::pow(u, (1.0 - params.p) / 2.0) * lap_w[i];
            const double t1 = -s[i].v, t2 = c * std::pow(u, q), t3 = 0.5 * (params.p - 1.0) * s[i].du * s[i].du / u;
            res = std::max(res, std::abs(lhs - (t1 + t2 + t3)));
            scale = std::max(scale, std::abs(t1) + std::abs(t2) + std::abs(t3));
        }
        out.grid_h.push_back(h);
        out.residual.push_back(res);
        out.scale = scale;
    }
    finish(out, 1e-3);
    return out;
}

PotentialValues radial_potential(const std::vector<double>& r, const std::function<double(double)>& source, int n,
                                 const PowerTail& tail) {
    if (r.size() < 2) throw HenonError("radial_potential needs at least two radii");
    if (n < 3) throw HenonError("radial_potential needs n >= 3");
    const double nd = n;
    auto density = [&](double t) { return std::pow(t, nd - 1.0) * source(t); };
    auto simpson = [](double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); };

    const std::size_t m = r.size();
    PotentialValues out;
    out.enclosed.resize(m);
    out.w.resize(m);
    out.enclosed[0] = r[0] > 0.0 ? source(r[0]) * std::pow(r[0], nd) / nd : 0.0;

    std::vector<double> fa(m);
    for (std::size_t i = 0; i < m; ++i) fa[i] = density(r[i]);
    std::vector<double> enclosed_mid(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double a = r[i], b = r[i + 1], mid = 0.5 * (a + b);
        const double fm = density(mid);
        enclosed_mid[i] = out.enclosed[i] + simpson(a, mid, fa[i], density(0.5 * (a + mid)), fm);
        out.enclosed[i + 1] = out.enclosed[i] + simpson(a, b, fa[i], fm, fa[i + 1]);
    }

    // Tail beyond R: source = K t^{-sigma}, so the enclosed mass grows like t^e with e = n - sigma.
    const double R = r.back(), ER = out.enclosed.back();
    const double K = tail.coefficient, e = nd - tail.exponent;
    double w_tail = ER * std::pow(R, 2.0 - nd) / (nd - 2.0);
    if (K != 0.0) {
        out.tail_converges = tail.exponent > 2.0;
        if (std::abs(e) < 1e-12) {
            w_tail += K * std::pow(R, 2.0 - nd) / ((nd - 2.0) * (nd - 2.0));
        } else {
            w_tail += -K * std::pow(R, e) / e * std::pow(R, 2.0 - nd) / (nd - 2.0) +
                      K / e * std::pow(R, e + 2.0 - nd) / (nd - 2.0 - e);
        }
    }
    out.w[m - 1] = w_tail;
    auto outer = [&](double s, double enclosed) { return s > 0.0 ? std::pow(s, 1.0 - nd) * enclosed : 0.0; };
    for (std::size_t i = m - 1; i-- > 0;) {
        const double a = r[i], b = r[i + 1], mid = 0.5 * (a + b);
        double ga = outer(a, out.enclosed[i]);
        if (a == 0.0) ga = 0.0;
        out.w[i] = out.w[i + 1] + simpson(a, b, ga, outer(mid, enclosed_mid[i]), outer(b, out.enclosed[i + 1]));
    }
    return out;
}

double unit_ball_volume(int n) {
    const double half = 0.5 * n;
    return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

namespace {

struct TailFit {
    double log_coefficient = 0.0;
    double rate = 0.0; // u ~ C r^{-rate}
};

TailFit fit_last_decade(const RadialProfile& profile) {
    const double R = profile.r.back();
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (profile.r[i] >= R / 10.0 && profile.r[i] > 0.0) {
            if (!(profile.u[i] > 0.0)) throw HenonError("profile is not positive on its last decade");
            lx.push_back(std::log(profile.r[i]));
            ly.push_back(std::log(profile.u[i]));
        }
    }
    if (lx.size() < 3) throw HenonError("profile has too few points on its last decade");
    const fd::LineFit fit = fd::fit_line(lx, ly);
    return {fit.intercept, -fit.slope};
}

void require_decaying_span(const RadialProfile& profile, double decades) {
    profile.validate();
    if (!(profile.r.front() > 0.0) || profile.r.back() / profile.r.front() < std::pow(10.0, decades)) {
        throw HenonError("profile spans too few decades of radius");
    }
    const auto c = profile.meta.classification;
    if (c == Classification::u_crossing || c == Classification::v_crossing || c == Classification::growth) {
        throw HenonError("profile ended in " + to_string(c) + " and does not decay");
    }
}

} // namespace

PotentialReport newton_potential_check(const RadialProfile& profile, const ProblemParams& params) {
    require_decaying_span(profile, 1.0);
    const TailFit tail = fit_last_decade(profile);
    if (!(tail.rate > 0.0)) throw HenonError("profile does not decay on its last decade");

    const ProfileInterpolant interp(profile);
    auto source = [&](double t) {
        const double u = interp(std::clamp(t, interp.r_min(), interp.r_max())).u;
        return (params.a == 0.0 ? 1.0 : std::pow(t, params.a)) * std::pow(std::max(u, 0.0), params.p);
    };
    PowerTail power_tail;
    power_tail.coefficient = std::exp(params.p * tail.log_coefficient);
    power_tail.exponent = params.p * tail.rate - params.a;

    const PotentialValues pot = radial_potential(profile.r, source, params.n, power_tail);

    PotentialReport report;
    report.r = profile.r;
    report.w_vals = pot.w;
    report.omega_n = unit_ball_volume(params.n);
    report.tail_exponent = tail.rate;
    report.tail_converges = pot.tail_converges;
    const std::size_t m = profile.size();
    report.h_vals.resize(m);
    std::vector<double> x(m);
    for (std::size_t i = 0; i < m; ++i) {
        report.h_vals[i] = pot.w[i] - profile.v[i];
        report.max_abs_h = std::max(report.max_abs_h, std::abs(report.h_vals[i]));
        report.sup_v = std::max(report.sup_v, std::abs(profile.v[i]));
        x[i] = std::pow(profile.r[i], 2.0 - params.n);
    }
    const fd::LineFit fit = fd::fit_line(x, report.h_vals);
    report.c1 = fit.intercept;
    report.c2 = fit.slope;
    for (std::size_t i = 0; i < m; ++i) {
        report.fit_residual = std::max(report.fit_residual, std::abs(report.h_vals[i] - fit.intercept - fit.slope * x[i]));
    }
    report.pass = report.tail_converges && report.max_abs_h <= 1e-4 * report.sup_v;
    return report;
}

std::string to_string(DecayQuantity q) {
    switch (q) {
    case DecayQuantity::lemma1bound: return "lemma1bound";
    case DecayQuantity::corollary_u: return "corollary_u";
    case DecayQuantity::lemma1boundLap: return "lemma1boundLap";
    case DecayQuantity::corgrad: return "corgrad";
    case DecayQuantity::delta2: return "delta2";
    }
    return "lemma1bound";
}

DecayQuantity decay_quantity_from_string(const std::string& name) {
    for (auto q : {DecayQuantity::lemma1bound, DecayQuantity::corollary_u, DecayQuantity::lemma1boundLap,
                   DecayQuantity::corgrad, DecayQuantity::delta2}) {
        if (to_string(q) == name) return q;
    }
    throw HenonError("unknown decay quantity '" + name + "'");
}

SlopeReport decay_slope_check(const RadialProfile& profile, const ProblemParams& params, DecayQuantity quantity,
                              std::size_t ladder_points, double slope_tol) {
    require_decaying_span(profile, 2.0);
    if (ladder_points < 3) throw HenonError("decay_slope_check needs at least three ladder radii");
    const ProfileInterpolant interp(profile);
    const double nd = params.n, p = params.p, a = params.a;

    auto integrand = [&](double r) {
        const auto s = interp(std::clamp(r, interp.r_min(), interp.r_max()));
        double g = 0.0;
        switch (quantity) {
        case DecayQuantity::lemma1bound:
        case DecayQuantity::delta2: g = (a == 0.0 ? 1.0 : std::pow(r, a)) * std::pow(std::abs(s.u), p); break;
        case DecayQuantity::corollary_u: g = std::abs(s.u); break;
        case DecayQuantity::lemma1boundLap: g = std::abs(s.v); break;
        case DecayQuantity::corgrad: g = std::abs(s.du); break;
        }
        return std::pow(r, nd - 1.0) * g;
    };
    auto simpson = [&](double lo, double hi) {
        return (hi - lo) / 6.0 * (integrand(lo) + 4.0 * integrand(0.5 * (lo + hi)) + integrand(hi));
    };

    const std::vector<double>& r = profile.r;
    std::vector<double> cumulative(r.size());
    cumulative[0] = integrand(r[0]) * r[0] / nd;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) cumulative[i + 1] = cumulative[i] + simpson(r[i], r[i + 1]);

    SlopeReport report;
    report.quantity = quantity;
    switch (quantity) {
    case DecayQuantity::lemma1bound:
    case DecayQuantity::delta2: report.predicted = nd - (4.0 * p + a) / (p - 1.0); break;
    case DecayQuantity::corollary_u: report.predicted = nd - (a + 4.0) / (p - 1.0); break;
    case DecayQuantity::lemma1boundLap: report.predicted = nd - (2.0 * p + 2.0 + a) / (p - 1.0); break;
    case DecayQuantity::corgrad: report.predicted = nd - (p + 3.0 + a) / (p - 1.0); break;
    }
    report.R = log_grid(r.back() / 10.0, r.back(), ladder_points);
    std::vector<double> lx, ly;
    for (double R : report.R) {
        auto it = std::upper_bound(r.begin(), r.end(), R);
        std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
        double F = cumulative[i];
        if (R > r[i]) F += simpson(r[i], R);
        report.integral.push_back(F);
        if (F > 0.0) {
            lx.push_back(std::log(R));
            ly.push_back(std::log(F));
        }
    }
    if (lx.size() < 2) throw HenonError("decay integral vanishes on the last decade");
    report.fitted = fd::fit_line(lx, ly).slope;
    report.slope_tol = slope_tol;
    report.pass = report.fitted <= report.predicted + slope_tol;
    return report;
}

} // namespace henon
