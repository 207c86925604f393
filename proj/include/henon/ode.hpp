#pragma once

// Dormand-Prince 5(4) integrator with Hairer's fourth-order dense output and
// terminal event location. Header-only; the state is a fixed-size array.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace henon::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct StepOptions {
    double rtol = 1e-10;
    double atol = 1e-20;
    double h_initial = 0.0;   // 0 selects a starting step automatically
    double h_min_rel = 1e-14; // step underflow threshold relative to |t|
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 2'000'000;
};

/// Terminal event: integration stops at the first point where `g` crosses
/// from positive to nonpositive.
template <std::size_t N>
struct Event {
    int id = 0;
    std::function<double(double, const State<N>&)> g;
};

enum class Stop { reached_end, event, step_underflow, max_steps, non_finite };

template <std::size_t N>
struct Outcome {
    Stop stop = Stop::reached_end;
    int event_id = -1;
    double t = 0.0;
    State<N> y{};
};

/// Continuous extension over one accepted step.
template <std::size_t N>
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    std::array<State<N>, 5> coeff{};

    [[nodiscard]] State<N> operator()(double t) const {
        const double theta = (t - t0) / h;
        const double theta1 = 1.0 - theta;
        State<N> out{};
        for (std::size_t i = 0; i < N; ++i) {
            out[i] = coeff[0][i] +
                     theta * (coeff[1][i] +
                              theta1 * (coeff[2][i] + theta * (coeff[3][i] + theta1 * coeff[4][i])));
        }
        return out;
    }
};

/// Integrates y' = f(t, y) from t0 to t_end (t_end > t0). `observer(t, y, dy)`
/// is called at the initial point and after every accepted step, including
/// the final (possibly event-truncated) point.
template <std::size_t N, class Rhs, class Observer>
Outcome<N> integrate(Rhs&& rhs, double t0, State<N> y0, double t_end, const StepOptions& opt,
                     const std::vector<Event<N>>& events, Observer&& observer) {
    // Dormand-Prince tableau.
    constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
    constexpr double a21 = 1.0 / 5.0;
    constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                     a54 = -212.0 / 729.0;
    constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                     a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                     a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
    constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                     e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    auto finite = [](const State<N>& s) {
        return std::all_of(s.begin(), s.end(), [](double x) { return std::isfinite(x); });
    };
    auto combine = [](const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
        State<N> out = y;
        for (const auto& [w, k] : terms) {
            for (std::size_t i = 0; i < N; ++i) out[i] += h * w * (*k)[i];
        }
        return out;
    };

    Outcome<N> result;
    double t = t0;
    State<N> y = y0;
    State<N> k1 = rhs(t, y);
    observer(t, y, k1);
    if (!finite(y) || !finite(k1)) {
        result.stop = Stop::non_finite;
        result.t = t;
        result.y = y;
        return result;
    }

    std::vector<double> g_prev(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e].g(t, y);

    auto weighted_norm = [&](const State<N>& err, const State<N>& ya, const State<N>& yb) {
        double acc = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt.atol + opt.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
            acc += (err[i] / sc) * (err[i] / sc);
        }
        return std::sqrt(acc / static_cast<double>(N));
    };

    double h = opt.h_initial;
    if (h <= 0.0) {
        // Hairer's starting-step heuristic, simplified.
        double d0 = 0.0, dd1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            dd1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        dd1 = std::sqrt(dd1 / N);
        h = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 * std::max(1.0, std::abs(t)) : 0.01 * d0 / dd1;
    }
    h = std::min({h, opt.h_max, t_end - t});

    std::size_t steps = 0;
    bool last_rejected = false;
    while (t < t_end) {
        if (++steps > opt.max_steps) {
            result.stop = Stop::max_steps;
            result.t = t;
            result.y = y;
            return result;
        }
        const double h_min = opt.h_min_rel * std::max(1.0, std::abs(t));
        if (h < h_min) {
            result.stop = Stop::step_underflow;
            result.t = t;
            result.y = y;
            return result;
        }
        if (t + h > t_end) h = t_end - t;

        const State<N> k2 = rhs(t + c2 * h, combine(y, h, {{a21, &k1}}));
        const State<N> k3 = rhs(t + c3 * h, combine(y, h, {{a31, &k1}, {a32, &k2}}));
        const State<N> k4 = rhs(t + c4 * h, combine(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State<N> k5 = rhs(t + c5 * h, combine(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State<N> k6 =
            rhs(t + h, combine(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State<N> y_new =
            combine(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const State<N> k7 = rhs(t + h, y_new);

        State<N> err{};
        for (std::size_t i = 0; i < N; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        }
        const bool ok_values = finite(y_new) && finite(k7) && finite(err);
        const double err_norm = ok_values ? weighted_norm(err, y, y_new) : std::numeric_limits<double>::infinity();

        if (!(err_norm <= 1.0)) {
            const double fac = std::isfinite(err_norm) ? std::max(0.2, 0.9 * std::pow(err_norm, -0.2)) : 0.2;
            h *= fac;
            last_rejected = true;
            continue;
        }

        DenseStep<N> dense;
        dense.t0 = t;
        dense.h = h;
        for (std::size_t i = 0; i < N; ++i) {
            const double ydiff = y_new[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            dense.coeff[0][i] = y[i];
            dense.coeff[1][i] = ydiff;
            dense.coeff[2][i] = bspl;
            dense.coeff[3][i] = ydiff - h * k7[i] - bspl;
            dense.coeff[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }

        // Earliest terminal event inside the step.
        int hit = -1;
        double t_hit = t + h;
        for (std::size_t e = 0; e < events.size(); ++e) {
            const double g_new = events[e].g(t + h, y_new);
            if (g_prev[e] > 0.0 && g_new <= 0.0) {
                double lo = t, hi = t + h;
                for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi);
                     ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (events[e].g(mid, dense(mid)) > 0.0) lo = mid; else hi = mid;
                }
                if (hi < t_hit || hit < 0) {
                    t_hit = hi;
                    hit = events[e].id;
                }
            }
            g_prev[e] = g_new;
        }

        if (hit >= 0) {
            const State<N> y_hit = dense(t_hit);
            observer(t_hit, y_hit, rhs(t_hit, y_hit));
            result.stop = Stop::event;
            result.event_id = hit;
            result.t = t_hit;
            result.y = y_hit;
            return result;
        }

        t += h;
        y = y_new;
        k1 = k7;
        observer(t, y, k1);

        double fac = std::clamp(0.9 * std::pow(std::max(err_norm, 1e-10), -0.2), 0.2, 10.0);
        if (last_rejected) fac = std::min(fac, 1.0);
        last_rejected = false;
        h = std::min(h * fac, opt.h_max);
    }

    result.stop = Stop::reached_end;
    result.t = t;
    result.y = y;
    return result;
}

} // namespace henon::ode
