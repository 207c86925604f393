#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "henon/fd.hpp"
#include "henon/radial.hpp"

#include <algorithm>
#include <cmath>

using namespace henon;

namespace {
ProblemParams P(int n, double p, double a = 0.0, Mode m = Mode::strict) { return validate_params(n, p, a, m); }

// Bubble with lambda = 1 in n = 8, written out by hand.
double bubble8(double r) { return std::sqrt(1920.0) * std::pow(1.0 + r * r, -2.0); }
} // namespace

TEST_CASE("bubble constant and origin data for n=8") {
    CHECK(bubble_constant(8) == doctest::Approx(std::sqrt(1920.0)).epsilon(1e-15));
    const RadialProfile b = critical_bubble(8, 1.0, {0.0, 0.5, 1.0});
    CHECK(b.u[0] == doctest::Approx(std::sqrt(1920.0)));
    CHECK(b.v[0] == doctest::Approx(32.0 * std::sqrt(1920.0)));
    CHECK(b.meta.classification == Classification::exact);
    CHECK(b.meta.params.mode == Mode::exploratory);
    CHECK(b.meta.params.p == doctest::Approx(3.0));
    CHECK(b.u[1] == doctest::Approx(bubble8(0.5)));
}

TEST_CASE("bubble satisfies the bi-Laplacian equation under refinement") {
    for (int n : {5, 8, 11}) {
        std::vector<double> h_list, res;
        for (double h : {0.02, 0.01, 0.005}) {
            fd::UniformGrid g{0.5 - 2 * h, h, static_cast<std::size_t>(std::llround(2.5 / h)) + 5};
            const RadialProfile b = critical_bubble(n, 1.0, g.radii());
            const auto lap = fd::radial_laplacian(b.u, g, n);
            const auto bilap = fd::radial_laplacian(lap, g, n);
            double worst = 0.0;
            for (std::size_t i = 2; i + 2 < g.count; ++i) {
                worst = std::max(worst, std::abs(bilap[i] - std::pow(b.u[i], b.meta.params.p)));
            }
            h_list.push_back(h);
            res.push_back(worst);
        }
        CHECK(res[2] < res[0]);
        CHECK(fd::convergence_order(h_list, res) >= 1.9);
    }
}

TEST_CASE("bubble lambda scaling") {
    const double lambda = 2.5;
    const std::vector<double> r = {0.1, 1.0, 3.0, 7.0};
    std::vector<double> scaled;
    for (double x : r) scaled.push_back(x / lambda);
    const RadialProfile a = critical_bubble(8, lambda, r);
    const RadialProfile b = critical_bubble(8, 1.0, scaled);
    for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(a.u[i] == doctest::Approx(std::pow(lambda, -2.0) * b.u[i]).epsilon(1e-13));
    }
}

TEST_CASE("reintegrating the bubble from its origin data") {
    const ProblemParams p = P(8, 3.0, 0.0, Mode::exploratory);
    const RadialProfile prof = integrate_radial_ivp(p, std::sqrt(1920.0), 32.0 * std::sqrt(1920.0), 20.0, 1e-12);
    CHECK(prof.r.back() == doctest::Approx(20.0));
    CHECK(prof.meta.classification == Classification::reached_rmax);
    double worst = 0.0;
    for (std::size_t i = 0; i < prof.size(); ++i) {
        if (prof.r[i] > 10.0) break;
        worst = std::max(worst, std::abs(prof.u[i] - bubble8(prof.r[i])) / bubble8(prof.r[i]));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("IVP preconditions and immediate events") {
    const ProblemParams p = P(8, 5);
    CHECK_THROWS_AS(integrate_radial_ivp(p, 0.0, 1.0, 10.0, 1e-10), HenonError);
    CHECK_THROWS_AS(integrate_radial_ivp(p, 1.0, 1.0, 0.0, 1e-10), HenonError);
    CHECK_THROWS_AS(integrate_radial_ivp(p, 1.0, 1.0, 10.0, 1e-3), HenonError);
    CHECK_THROWS_AS(integrate_radial_ivp(p, 1.0, 1.0, 10.0, 1e-15), HenonError);
    const RadialProfile prof = integrate_radial_ivp(p, 1.0, 0.0, 10.0, 1e-10);
    CHECK(prof.meta.classification == Classification::v_crossing);
    CHECK(prof.r.back() < 1e-2);
}

TEST_CASE("large v0 drives u through zero, small v0 escapes") {
    const ProblemParams p = P(8, 5);
    CHECK(integrate_radial_ivp(p, 1.0, 10.0, 1e6, 1e-10).meta.classification == Classification::u_crossing);
    const auto low = integrate_radial_ivp(p, 1.0, 0.1, 1e6, 1e-10).meta.classification;
    CHECK((low == Classification::v_crossing || low == Classification::growth));
}

TEST_CASE("Taylor start radius scales with tolerance") {
    const ProblemParams p = P(8, 5);
    CHECK(taylor_start_radius(p, 1.0, 1.0, 1e-12) == doctest::Approx(1e-3));
    CHECK(taylor_start_radius(p, 1.0, 1.0, 1e-40) == doctest::Approx(1e-8));
    CHECK(taylor_start_radius(p, 16.0, 1.0, 1e-12) < 1e-3);
}

TEST_CASE("shooting for n=8, p=5, a=0, u0=1") {
    const ProblemParams p = P(8, 5);
    const ShootingResult s = shoot_entire_solution(p, 1.0, 1e-12);
    // golden value pinned from the first run of this solver
    CHECK(s.v0_star == doctest::Approx(0.60054610458056).epsilon(1e-9));
    CHECK(s.bracket.first <= s.v0_star);
    CHECK(s.bracket.second >= s.v0_star);
    CHECK(s.bracket.second - s.bracket.first <= 1e-12 * std::max(1.0, s.v0_star));
    CHECK(s.profile.meta.classification == Classification::entire_like);
    CHECK(s.profile.meta.theorem_covered);
    CHECK(s.tail_slope_deviation <= 0.1);
    CHECK(s.profile.r.back() == doctest::Approx(1e3));
    for (std::size_t i = 0; i < s.profile.size(); ++i) {
        CHECK(s.profile.u[i] > 0.0);
        CHECK(s.profile.v[i] > 0.0);
        CHECK(s.profile.du[i] < 0.0);
    }
    // trace: low side and high side events differ
    bool high = false, low = false;
    for (const auto& t : s.classification_trace) {
        if (t.v0 > s.bracket.second) CHECK(t.event == Classification::u_crossing);
        if (t.v0 < s.bracket.first) CHECK((t.event == Classification::v_crossing || t.event == Classification::growth));
        high = high || t.event == Classification::u_crossing;
        low = low || t.event != Classification::u_crossing;
    }
    CHECK(high);
    CHECK(low);
    CHECK(s.warnings.empty());
}

TEST_CASE("tail of the shooting profile decays like r^{-1}") {
    const ShootingResult s = shoot_entire_solution(P(8, 5), 1.0, 1e-12);
    const auto& pr = s.profile;
    const std::size_t i = pr.size() - 1;
    std::size_t j = 0;
    while (pr.r[j] < pr.r.back() / 10.0) ++j;
    const double slope = std::log(pr.u[i] / pr.u[j]) / std::log(pr.r[i] / pr.r[j]);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("shooting scaling covariance") {
    for (auto [n, p, a] : {std::tuple{8, 5.0, 0.0}, std::tuple{10, 4.0, 0.0}, std::tuple{8, 6.0, 1.0}}) {
        const ProblemParams P0 = P(n, p, a);
        const double m = P0.decay_rate();
        const double v1 = shoot_entire_solution(P0, 1.0, 1e-12).v0_star;
        const double v2 = shoot_entire_solution(P0, 2.0, 1e-12).v0_star;
        CHECK(v2 / v1 == doctest::Approx(std::pow(2.0, (m + 2.0) / m)).epsilon(1e-4));
    }
}

TEST_CASE("exploratory shooting carries a warning") {
    const ShootingResult s = shoot_entire_solution(P(8, 3.0, 0.0, Mode::exploratory), 1.0, 1e-10);
    CHECK_FALSE(s.warnings.empty());
    CHECK_FALSE(s.profile.meta.theorem_covered);
}

TEST_CASE("profiles are consistent with -Delta u = v under refinement") {
    const ShootingResult s = shoot_entire_solution(P(8, 5), 1.0, 1e-12);
    const ProfileInterpolant f(s.profile);
    std::vector<double> hs, res;
    for (double h : {0.02, 0.01, 0.005}) {
        fd::UniformGrid g{0.5, h, static_cast<std::size_t>(std::llround(4.0 / h)) + 1};
        std::vector<double> u, v;
        for (double r : g.radii()) {
            const auto x = f(r);
            u.push_back(x.u);
            v.push_back(x.v);
        }
        const auto lap = fd::radial_laplacian(u, g, 8);
        double worst = 0.0;
        for (std::size_t i = 1; i + 1 < g.count; ++i) worst = std::max(worst, std::abs(v[i] + lap[i]));
        hs.push_back(h);
        res.push_back(worst);
    }
    CHECK(fd::convergence_order(hs, res) >= 1.9);
}

TEST_CASE("interpolant reproduces nodes and rejects extrapolation") {
    const RadialProfile b = critical_bubble(8, 1.0, log_grid(1e-2, 10.0, 400));
    const ProfileInterpolant f(b);
    for (std::size_t i = 0; i < b.size(); i += 37) {
        const auto s = f(b.r[i]);
        CHECK(s.u == doctest::Approx(b.u[i]).epsilon(1e-14));
        CHECK(s.v == doctest::Approx(b.v[i]).epsilon(1e-14));
    }
    const double r = 0.5 * (b.r[100] + b.r[101]);
    CHECK(f(r).u == doctest::Approx(bubble8(r)).epsilon(1e-12));
    CHECK_THROWS_AS(static_cast<void>(f(20.0)), HenonError);
    CHECK_THROWS_AS(static_cast<void>(f(1e-3)), HenonError);
}

TEST_CASE("profile validation") {
    RadialProfile bad = critical_bubble(8, 1.0, {0.1, 0.2, 0.3});
    CHECK_NOTHROW(bad.validate());
    bad.r[2] = 0.2;
    CHECK_THROWS_AS(bad.validate(), HenonError);
    RadialProfile ragged = critical_bubble(8, 1.0, {0.1, 0.2});
    ragged.v.pop_back();
    CHECK_THROWS_AS(ragged.validate(), HenonError);
}

TEST_CASE("blow-up of the radial average with v(0) = -1") {
    const ProblemParams p = P(8, 5);
    const BlowupReport b = simulate_average_blowup(p, 1.0, -1.0, 1e6);
    CHECK(b.alpha_bar == doctest::Approx(0.0625));
    CHECK(b.bound_check == 1.0);
    CHECK(b.min_quadratic_margin >= 0.0);
    REQUIRE(b.R_escape.has_value());
    CHECK(std::isfinite(*b.R_escape));
    CHECK(b.profile.u.back() >= 1e6 * (1.0 - 1e-9));
    CHECK_FALSE(b.partial);
    CHECK(b.v_nonincreasing);
    CHECK(b.v_below_origin);
    CHECK(b.slope_bound);
    REQUIRE(b.envelope_checks.size() == 4);
    for (const auto& e : b.envelope_checks) {
        CHECK(e.points > 0);
        CHECK(e.pass);
    }
    for (std::size_t i = 0; i < b.profile.size(); ++i) CHECK(b.profile.v[i] <= -1.0);
}

TEST_CASE("blow-up preconditions") {
    const ProblemParams p = P(8, 5);
    CHECK_THROWS_AS(simulate_average_blowup(p, 1.0, 0.0, 1e6), HenonError);
    CHECK_THROWS_AS(simulate_average_blowup(p, 1.0, -1.0, 0.5), HenonError);
}

TEST_CASE("synthetic gaussian profile carries -Delta f") {
    const ProblemParams p = P(8, 5);
    const RadialProfile g = synthetic_profile({TestFunction::gaussian}, p, {0.5, 1.0});
    const double r = 1.0, e = std::exp(-1.0);
    // Delta e^{-r^2} = (4r^2 - 2n) e^{-r^2}
    CHECK(g.v[1] == doctest::Approx(-(4 * r * r - 16.0) * e).epsilon(1e-13));
    CHECK(g.du[1] == doctest::Approx(-2.0 * e).epsilon(1e-13));
    CHECK(g.meta.classification == Classification::synthetic);
    const RadialProfile c = synthetic_profile({TestFunction::constant, 1.0, 2.0}, p, {0.5, 1.0});
    CHECK(c.v[0] == 0.0);
    CHECK(c.u[1] == 2.0);
    CHECK_THROWS_AS(synthetic_profile({TestFunction::gaussian}, p, {0.0, 1.0}), HenonError);
}

TEST_CASE("test function catalog names") {
    for (auto f : {TestFunction::gaussian, TestFunction::bubble, TestFunction::rational, TestFunction::constant}) {
        CHECK(test_function_from_string(to_string(f)) == f);
    }
    CHECK_THROWS_AS(test_function_from_string("sinc"), HenonError);
    CHECK(to_string(Classification::entire_like) == "entire-like");
    CHECK(to_string(Classification::u_crossing) == "u-crossing");
}

TEST_CASE("grids") {
    const auto u = uniform_grid(0.0, 1.0, 11);
    CHECK(u.size() == 11);
    CHECK(u[5] == doctest::Approx(0.5));
    const auto l = log_grid(1e-2, 1e2, 5);
    CHECK(l[2] == doctest::Approx(1.0));
    CHECK(l.back() == 1e2);
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), HenonError);
    CHECK_THROWS_AS(uniform_grid(1.0, 1.0, 5), HenonError);
}
