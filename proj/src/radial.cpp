#include "henon/radial.hpp"

#include "henon/jet.hpp"
#include "henon/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace henon {

std::string to_string(Classification c) {
    switch (c) {
    case Classification::none: return "none";
    case Classification::exact: return "exact";
    case Classification::synthetic: return "synthetic";
    case Classification::entire_like: return "entire-like";
    case Classification::reached_rmax: return "reached-rmax";
    case Classification::u_crossing: return "u-crossing";
    case Classification::v_crossing: return "v-crossing";
    case Classification::growth: return "growth";
    }
    return "none";
}

void RadialProfile::validate() const {
    const std::size_t m = r.size();
    if (m < 2) throw HenonError("profile needs at least two radii");
    if (u.size() != m || du.size() != m || v.size() != m || dv.size() != m || lap_v.size() != m) {
        throw HenonError("profile arrays have inconsistent lengths");
    }
    if (r.front() < 0.0) throw HenonError("profile radii must be nonnegative");
    for (std::size_t i = 1; i < m; ++i) {
        if (!(r[i] > r[i - 1])) throw HenonError("profile radii must be strictly increasing");
    }
}

// ---------------------------------------------------------------------------
// Interpolation

ProfileInterpolant::ProfileInterpolant(const RadialProfile& profile) {
    profile.validate();
    if (!(profile.r.front() > 0.0)) throw HenonError("interpolant needs r > 0 at every node");
    const double nm1 = profile.meta.params.n - 1.0;
    r_ = profile.r;
    u_ = profile.u;
    du_ = profile.du;
    v_ = profile.v;
    dv_ = profile.dv;
    d2u_.resize(r_.size());
    d2v_.resize(r_.size());
    for (std::size_t i = 0; i < r_.size(); ++i) {
        d2u_[i] = -v_[i] - nm1 * du_[i] / r_[i];
        d2v_[i] = profile.lap_v[i] - nm1 * dv_[i] / r_[i];
    }
}

namespace {

struct HermiteEval {
    double value, slope;
};

HermiteEval quintic_hermite(double h, double t, double f0, double d0, double s0, double f1, double d1, double s1) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    const double h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    const double h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    const double h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    const double h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    const double h5 = 0.5 * t3 - t4 + 0.5 * t5;
    const double g0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
    const double g1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
    const double g2 = t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4;
    const double g3 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
    const double g4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
    const double g5 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4;
    HermiteEval out;
    out.value = f0 * h0 + h * d0 * h1 + h * h * s0 * h2 + f1 * h3 + h * d1 * h4 + h * h * s1 * h5;
    out.slope = (f0 * g0 + h * d0 * g1 + h * h * s0 * g2 + f1 * g3 + h * d1 * g4 + h * h * s1 * g5) / h;
    return out;
}

} // namespace

ProfileInterpolant::Sample ProfileInterpolant::operator()(double r) const {
    if (r < r_.front() || r > r_.back()) {
        std::ostringstream msg;
        msg << "interpolation radius " << r << " outside [" << r_.front() << ", " << r_.back() << "]";
        throw HenonError(msg.str());
    }
    auto it = std::upper_bound(r_.begin(), r_.end(), r);
    std::size_t i = it == r_.begin() ? 0 : static_cast<std::size_t>(it - r_.begin()) - 1;
    if (i + 1 >= r_.size()) i = r_.size() - 2;
    const double h = r_[i + 1] - r_[i];
    const double t = (r - r_[i]) / h;
    const HermiteEval eu = quintic_hermite(h, t, u_[i], du_[i], d2u_[i], u_[i + 1], du_[i + 1], d2u_[i + 1]);
    const HermiteEval ev = quintic_hermite(h, t, v_[i], dv_[i], d2v_[i], v_[i + 1], dv_[i + 1], d2v_[i + 1]);
    return {eu.value, eu.slope, ev.value, ev.slope};
}

// ---------------------------------------------------------------------------
// Initial value problem

namespace {

double weight(double r, double a) { return a == 0.0 ? 1.0 : std::pow(r, a); }

// Odd extension of u^p so trial stages with u < 0 stay finite.
double signed_power(double u, double p) { return std::copysign(std::pow(std::abs(u), p), u); }

} // namespace

double taylor_start_radius(const ProblemParams& params, double u0, double v0, double tol) {
    double length = std::min(1.0, std::pow(u0, -(params.p - 1.0) / (4.0 + params.a)));
    if (v0 != 0.0) length = std::min(length, std::sqrt(u0 / std::abs(v0)));
    return std::max(1e-8, std::pow(tol, 0.25)) * length;
}

RadialProfile integrate_radial_ivp(const ProblemParams& params, double u0, double v0, double r_max, double tol,
                                   const IvpOptions& options) {
    if (!(u0 > 0.0)) throw HenonError("integrate_radial_ivp requires u0 > 0");
    if (!(r_max > 0.0)) throw HenonError("integrate_radial_ivp requires r_max > 0");
    if (!(tol > 1e-14 && tol < 1e-4)) throw HenonError("integrate_radial_ivp requires tol in (1e-14, 1e-4)");
    if (!std::isfinite(v0)) throw HenonError("integrate_radial_ivp requires a finite v0");

    const double n = params.n;
    const double p = params.p;
    const double a = params.a;
    const double escape = options.escape_value > 0.0 ? options.escape_value : options.escape_factor * u0;

    RadialProfile profile;
    profile.meta.params = params;
    profile.meta.u0 = u0;
    profile.meta.v0 = v0;
    profile.meta.tol = tol;
    profile.meta.theorem_covered = theorem_regime(params);
    if (params.mode == Mode::exploratory) {
        profile.meta.warnings.emplace_back("exploratory parameters: outside the theorem regime");
    }

    double r0 = taylor_start_radius(params, u0, v0, tol);
    if (r0 >= r_max) r0 = 0.5 * r_max;
    profile.meta.r_start = r0;

    // Series through the first nonlinear corrections:
    //   u = u0 - v0 r^2/(2n) + A r^{a+4},  v = v0 - u0^p r^{a+2}/((a+2)(a+n)) + B r^{a+4}.
    const double up = std::pow(u0, p);
    const double A = up / ((a + 2.0) * (a + n) * (a + 4.0) * (a + n + 2.0));
    const double B = p * std::pow(u0, p - 1.0) * v0 / (2.0 * n * (a + 4.0) * (a + n + 2.0));
    const double C = up / ((a + 2.0) * (a + n));
    ode::State<4> y0{
        u0 - v0 * r0 * r0 / (2.0 * n) + A * std::pow(r0, a + 4.0),
        -v0 * r0 / n + (a + 4.0) * A * std::pow(r0, a + 3.0),
        v0 - C * std::pow(r0, a + 2.0) + B * std::pow(r0, a + 4.0),
        -(a + 2.0) * C * std::pow(r0, a + 1.0) + (a + 4.0) * B * std::pow(r0, a + 3.0),
    };

    auto rhs = [n, p, a](double r, const ode::State<4>& y) {
        return ode::State<4>{
            y[1],
            -y[2] - (n - 1.0) * y[1] / r,
            y[3],
            -weight(r, a) * signed_power(y[0], p) - (n - 1.0) * y[3] / r,
        };
    };

    auto record = [&](double r, const ode::State<4>& y, const ode::State<4>&) {
        if (!profile.r.empty() && !(r > profile.r.back())) return;
        profile.r.push_back(r);
        profile.u.push_back(y[0]);
        profile.du.push_back(y[1]);
        profile.v.push_back(y[2]);
        profile.dv.push_back(y[3]);
        profile.lap_v.push_back(-weight(r, a) * signed_power(y[0], p));
    };

    // Events that already hold at the start radius end the run immediately.
    if (y0[0] <= 0.0 || (v0 >= 0.0 && y0[2] <= 0.0) || y0[0] > escape) {
        record(r0, y0, y0);
        profile.meta.classification = y0[0] <= 0.0   ? Classification::u_crossing
                                      : y0[0] > escape ? Classification::growth
                                                       : Classification::v_crossing;
        return profile;
    }

    enum : int { kU = 0, kV = 1, kGrowth = 2 };
    std::vector<ode::Event<4>> events;
    events.push_back({kU, [](double, const ode::State<4>& y) { return y[0]; }});
    if (v0 >= 0.0) events.push_back({kV, [](double, const ode::State<4>& y) { return y[2]; }});
    events.push_back({kGrowth, [escape](double, const ode::State<4>& y) { return escape - y[0]; }});

    ode::StepOptions step;
    step.rtol = tol;
    step.atol = tol * 1e-12 * std::max(1.0, u0);
    step.max_steps = options.max_steps;

    const auto outcome = ode::integrate<4>(rhs, r0, y0, r_max, step, events, record);
    switch (outcome.stop) {
    case ode::Stop::reached_end: profile.meta.classification = Classification::reached_rmax; break;
    case ode::Stop::event:
        profile.meta.classification = outcome.event_id == kU   ? Classification::u_crossing
                                      : outcome.event_id == kV ? Classification::v_crossing
                                                               : Classification::growth;
        break;
    case ode::Stop::step_underflow:
    case ode::Stop::non_finite:
        profile.meta.classification = Classification::growth;
        profile.meta.warnings.emplace_back("integration stopped on step underflow");
        break;
    case ode::Stop::max_steps:
        profile.meta.classification = Classification::growth;
        profile.meta.warnings.emplace_back("integration stopped on the step budget");
        break;
    }
    if (profile.size() < 2) {
        // Event inside the first step: keep the start point and the event point distinct.
        profile.meta.warnings.emplace_back("event inside the first step");
    }
    return profile;
}

// ---------------------------------------------------------------------------
// Shooting

namespace {

bool low_side(Classification c) { return c == Classification::v_crossing || c == Classification::growth; }

double tail_slope_deviation(const RadialProfile& profile, double m) {
    const double r_end = profile.r.back();
    double worst = 0.0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (profile.r[i] < 0.1 * r_end) continue;
        const double slope = profile.r[i] * profile.du[i] / profile.u[i];
        worst = std::max(worst, std::abs(slope + m));
    }
    return worst;
}

} // namespace

ShootingResult shoot_entire_solution(const ProblemParams& params, double u0, double tol,
                                     const ShootingOptions& options) {
    if (!(u0 > 0.0)) throw HenonError("shoot_entire_solution requires u0 > 0");
    if (!(tol > 0.0)) throw HenonError("shoot_entire_solution requires tol > 0");

    ShootingResult result;
    if (params.mode == Mode::exploratory || !params.supercritical()) {
        result.warnings.emplace_back("exploratory parameters: theorem regime not satisfied, shooting attempted anyway");
    }

    const double m = params.decay_rate();
    const double v_ref = std::pow(u0, (m + 2.0) / m);

    auto classify = [&](double v0) {
        IvpOptions ivp;
        const RadialProfile trial = integrate_radial_ivp(params, u0, v0, options.r_probe, options.ivp_tol, ivp);
        Classification c = trial.meta.classification;
        result.classification_trace.push_back({v0, c});
        return c;
    };

    double lo = 0.0, hi = 0.0;
    bool accepted = false;
    double accepted_v0 = 0.0;

    // Bracket search by decades around the scaling-consistent reference value.
    const double v_min = 1e-8 * v_ref, v_max = 1e8 * v_ref;
    Classification c_ref = classify(v_ref);
    if (c_ref == Classification::reached_rmax) {
        accepted = true;
        accepted_v0 = v_ref;
    } else if (low_side(c_ref)) {
        lo = v_ref;
        double trial_v = v_ref;
        while (true) {
            trial_v *= 10.0;
            if (trial_v > v_max) throw HenonError("no sign change: shooting bracket not found above v_ref");
            const Classification c = classify(trial_v);
            if (c == Classification::u_crossing) { hi = trial_v; break; }
            if (c == Classification::reached_rmax) { accepted = true; accepted_v0 = trial_v; break; }
            lo = trial_v;
        }
    } else {
        hi = v_ref;
        double trial_v = v_ref;
        while (true) {
            trial_v /= 10.0;
            if (trial_v < v_min) throw HenonError("no sign change: shooting bracket not found below v_ref");
            const Classification c = classify(trial_v);
            if (low_side(c)) { lo = trial_v; break; }
            if (c == Classification::reached_rmax) { accepted = true; accepted_v0 = trial_v; break; }
            hi = trial_v;
        }
    }

    for (std::size_t it = 0; !accepted && it < options.max_iterations; ++it) {
        if (hi - lo <= tol * std::max(1.0, 0.5 * (lo + hi))) break;
        const double mid = hi / lo > 4.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break; // floating-point resolution reached
        const Classification c = classify(mid);
        if (c == Classification::u_crossing) {
            hi = mid;
        } else if (low_side(c)) {
            lo = mid;
        } else {
            accepted = true;
            accepted_v0 = mid;
        }
    }

    // The trace must split into a low-side set strictly below the high-side set.
    double max_low = -std::numeric_limits<double>::infinity();
    double min_high = std::numeric_limits<double>::infinity();
    for (const auto& trial : result.classification_trace) {
        if (low_side(trial.event)) max_low = std::max(max_low, trial.v0);
        if (trial.event == Classification::u_crossing) min_high = std::min(min_high, trial.v0);
    }
    if (!(max_low < min_high)) {
        std::ostringstream msg;
        msg << "inconsistent shooting trace: low-side event at v0 = " << max_low
            << " is not below high-side event at v0 = " << min_high;
        throw HenonError(msg.str());
    }

    if (accepted) {
        result.v0_star = accepted_v0;
        result.bracket = {accepted_v0, accepted_v0};
    } else {
        result.v0_star = 0.5 * (lo + hi);
        result.bracket = {lo, hi};
    }

    result.profile = integrate_radial_ivp(params, u0, result.v0_star, options.r_max, options.ivp_tol);
    RadialProfile& prof = result.profile;
    bool entire = prof.meta.classification == Classification::reached_rmax;
    for (std::size_t i = 0; entire && i < prof.size(); ++i) {
        entire = prof.u[i] > 0.0 && prof.v[i] > 0.0 && prof.du[i] < 0.0;
    }
    result.tail_slope_deviation = tail_slope_deviation(prof, m);
    if (entire && result.tail_slope_deviation <= options.tail_slope_tol) {
        prof.meta.classification = Classification::entire_like;
    } else {
        std::ostringstream msg;
        msg << "profile at v0* not entire-like (classification " << to_string(prof.meta.classification)
            << ", tail slope deviation " << result.tail_slope_deviation << ")";
        result.warnings.push_back(msg.str());
    }
    for (const auto& w : result.warnings) prof.meta.warnings.push_back(w);
    return result;
}

// ---------------------------------------------------------------------------
// Critical bubble

double bubble_constant(int n) {
    const double nd = n;
    return std::pow(nd * (nd - 4.0) * (nd * nd - 4.0), (nd - 4.0) / 8.0);
}

RadialProfile critical_bubble(int n, double lambda, const std::vector<double>& grid) {
    if (n < 5) throw HenonError("critical_bubble requires n >= 5");
    if (!(lambda > 0.0)) throw HenonError("critical_bubble requires lambda > 0");
    const double nd = n;
    const double p = (nd + 4.0) / (nd - 4.0);
    const double k = 0.5 * (nd - 4.0);
    const double C = bubble_constant(n) * std::pow(lambda, k);
    const double l2 = lambda * lambda;

    RadialProfile profile;
    profile.meta.params = validate_params(n, p, 0.0, Mode::exploratory);
    profile.meta.classification = Classification::exact;
    profile.meta.warnings.emplace_back("critical exponent: exploratory profile");
    profile.r = grid;
    const std::size_t m = grid.size();
    profile.u.resize(m);
    profile.du.resize(m);
    profile.v.resize(m);
    profile.dv.resize(m);
    profile.lap_v.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double r = grid[i];
        const double g = l2 + r * r;
        // With g = lambda^2 + r^2 and 2k = n-4:
        //   Delta g^{-k} = -4k g^{-k-1} - 4k(k+1) lambda^2 g^{-k-2}.
        profile.u[i] = C * std::pow(g, -k);
        profile.du[i] = -2.0 * k * r * C * std::pow(g, -k - 1.0);
        profile.v[i] = C * (4.0 * k * std::pow(g, -k - 1.0) + 4.0 * k * (k + 1.0) * l2 * std::pow(g, -k - 2.0));
        profile.dv[i] = -8.0 * k * (k + 1.0) * r * C *
                        (std::pow(g, -k - 2.0) + (k + 2.0) * l2 * std::pow(g, -k - 3.0));
        profile.lap_v[i] = -std::pow(profile.u[i], p);
    }
    if (!grid.empty()) {
        profile.meta.u0 = C * std::pow(l2, -k);
        profile.meta.v0 = C * (4.0 * k * std::pow(l2, -k - 1.0) + 4.0 * k * (k + 1.0) * l2 * std::pow(l2, -k - 2.0));
        profile.meta.r_start = grid.front();
    }
    return profile;
}

// ---------------------------------------------------------------------------
// Blow-up of radial averages

BlowupReport simulate_average_blowup(const ProblemParams& params, double u0, double v0_neg, double escape,
                                     std::size_t envelope_depth, double tol) {
    if (!(v0_neg < 0.0)) throw HenonError("simulate_average_blowup requires v(0) < 0");
    if (!(escape > u0)) throw HenonError("simulate_average_blowup requires escape > u0");

    BlowupReport report;
    report.alpha_bar = -v0_neg / (2.0 * params.n);

    IvpOptions ivp;
    ivp.escape_value = escape;
    // Blow-up happens at finite radius, so r_max only needs to exceed it.
    const double r_cap = 1e6 * std::max(1.0, std::sqrt(2.0 * params.n * escape / -v0_neg));
    report.profile = integrate_radial_ivp(params, u0, v0_neg, r_cap, tol, ivp);
    const RadialProfile& prof = report.profile;

    const bool escaped = prof.u.back() >= escape * (1.0 - 1e-9);
    if (escaped) report.R_escape = prof.r.back();
    report.partial = !escaped;

    std::size_t above = 0;
    report.min_quadratic_margin = std::numeric_limits<double>::infinity();
    report.v_nonincreasing = true;
    report.v_below_origin = true;
    report.slope_bound = true;
    for (std::size_t i = 0; i < prof.size(); ++i) {
        const double r = prof.r[i];
        const double margin = prof.u[i] - report.alpha_bar * r * r;
        report.min_quadratic_margin = std::min(report.min_quadratic_margin, margin);
        if (margin >= 0.0) ++above;
        if (prof.dv[i] > 0.0) report.v_nonincreasing = false;
        if (prof.v[i] > v0_neg) report.v_below_origin = false;
        if (prof.du[i] < 0.9 * (-v0_neg) * r / params.n) report.slope_bound = false;
    }
    report.bound_check = static_cast<double>(above) / static_cast<double>(prof.size());

    report.growth = growth_sequences(params, std::max<std::size_t>(envelope_depth, 1));
    report.growth.alpha_bar = report.alpha_bar;
    report.r_zero = prof.r.front();
    for (std::size_t k = 0; k <= envelope_depth; ++k) {
        EnvelopeCheck check;
        check.k = k;
        check.r_k = report.r_zero * report.growth.rows[k].r_cumulative;
        check.min_log_margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < prof.size(); ++i) {
            if (prof.r[i] < check.r_k) continue;
            ++check.points;
            const double lhs = std::log(prof.u[i]);
            check.min_log_margin =
                std::min(check.min_log_margin, lhs - log_envelope(report.growth, k, report.alpha_bar, prof.r[i]));
        }
        check.pass = check.points > 0 && check.min_log_margin >= 0.0;
        report.envelope_checks.push_back(check);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Analytic test profiles

std::string to_string(TestFunction f) {
    switch (f) {
    case TestFunction::gaussian: return "gaussian";
    case TestFunction::bubble: return "bubble";
    case TestFunction::rational: return "rational";
    case TestFunction::constant: return "constant";
    }
    return "gaussian";
}

TestFunction test_function_from_string(const std::string& name) {
    if (name == "gaussian") return TestFunction::gaussian;
    if (name == "bubble") return TestFunction::bubble;
    if (name == "rational") return TestFunction::rational;
    if (name == "constant") return TestFunction::constant;
    throw HenonError("unknown test function '" + name + "'");
}

std::array<double, 5> test_function_derivatives(const TestFunctionSpec& spec, int n, double r) {
    using J = Jet<4>;
    const J x = J::variable(r);
    J f;
    switch (spec.kind) {
    case TestFunction::gaussian: f = exp(-1.0 * (x * x)); break;
    case TestFunction::bubble: f = bubble_constant(n) * pow(1.0 + x * x, -0.5 * (n - 4.0)); break;
    case TestFunction::rational: f = pow(1.0 + x * x, -spec.sigma); break;
    case TestFunction::constant: f = J::constant(spec.value); break;
    }
    return {f.derivative(0), f.derivative(1), f.derivative(2), f.derivative(3), f.derivative(4)};
}

RadialProfile synthetic_profile(const TestFunctionSpec& spec, const ProblemParams& params,
                                const std::vector<double>& grid) {
    RadialProfile profile;
    profile.meta.params = params;
    profile.meta.classification = Classification::synthetic;
    profile.meta.warnings.emplace_back("synthetic " + to_string(spec.kind) + " profile");
    const double nm1 = params.n - 1.0;
    profile.r = grid;
    for (double r : grid) {
        if (!(r > 0.0)) throw HenonError("synthetic profiles need r > 0");
        const auto d = test_function_derivatives(spec, params.n, r);
        const double lap = d[2] + nm1 * d[1] / r;
        const double lap_prime = d[3] + nm1 * (d[2] / r - d[1] / (r * r));
        const double lap_second = d[4] + nm1 * (d[3] / r - 2.0 * d[2] / (r * r) + 2.0 * d[1] / (r * r * r));
        profile.u.push_back(d[0]);
        profile.du.push_back(d[1]);
        profile.v.push_back(-lap);
        profile.dv.push_back(-lap_prime);
        profile.lap_v.push_back(-(lap_second + nm1 * lap_prime / r));
    }
    if (!grid.empty()) {
        profile.meta.u0 = profile.u.front();
        profile.meta.v0 = profile.v.front();
        profile.meta.r_start = grid.front();
    }
    return profile;
}

std::vector<double> uniform_grid(double r0, double r1, std::size_t points) {
    if (points < 2 || !(r1 > r0)) throw HenonError("uniform_grid needs r1 > r0 and at least two points");
    std::vector<double> grid(points);
    const double h = (r1 - r0) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) grid[i] = r0 + h * static_cast<double>(i);
    grid.back() = r1;
    return grid;
}

std::vector<double> log_grid(double r0, double r1, std::size_t points) {
    if (points < 2 || !(r0 > 0.0) || !(r1 > r0)) throw HenonError("log_grid needs 0 < r0 < r1 and two points");
    std::vector<double> grid(points);
    const double l0 = std::log(r0), l1 = std::log(r1);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    grid.front() = r0;
    grid.back() = r1;
    return grid;
}

} // namespace henon
