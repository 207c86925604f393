#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "henon/jet.hpp"
#include "henon/ode.hpp"

#include <cmath>

using namespace henon;

TEST_CASE("harmonic oscillator to tight tolerance") {
    ode::StepOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    std::size_t calls = 0;
    const auto out = ode::integrate<2>([](double, const ode::State<2>& y) { return ode::State<2>{y[1], -y[0]}; },
                                       0.0, {1.0, 0.0}, 10.0, opt, {},
                                       [&](double, const ode::State<2>&, const ode::State<2>&) { ++calls; });
    CHECK(out.stop == ode::Stop::reached_end);
    CHECK(out.t == doctest::Approx(10.0));
    CHECK(std::abs(out.y[0] - std::cos(10.0)) < 1e-9);
    CHECK(std::abs(out.y[1] + std::sin(10.0)) < 1e-9);
    CHECK(calls > 2);
}

TEST_CASE("terminal event located on the dense output") {
    ode::StepOptions opt;
    opt.rtol = 1e-11;
    opt.atol = 1e-14;
    std::vector<ode::Event<2>> events = {{7, [](double, const ode::State<2>& y) { return y[0]; }}};
    const auto out = ode::integrate<2>([](double, const ode::State<2>& y) { return ode::State<2>{y[1], -y[0]}; },
                                       0.0, {1.0, 0.0}, 10.0, opt, events,
                                       [](double, const ode::State<2>&, const ode::State<2>&) {});
    CHECK(out.stop == ode::Stop::event);
    CHECK(out.event_id == 7);
    CHECK(out.t == doctest::Approx(M_PI / 2.0).epsilon(1e-9));
}

TEST_CASE("finite-time blow-up is reported, not looped on") {
    ode::StepOptions opt;
    opt.rtol = 1e-10;
    opt.atol = 1e-12;
    const auto out = ode::integrate<1>([](double, const ode::State<1>& y) { return ode::State<1>{y[0] * y[0]}; },
                                       0.0, {1.0}, 2.0, opt, {},
                                       [](double, const ode::State<1>&, const ode::State<1>&) {});
    CHECK(out.stop != ode::Stop::reached_end);
    CHECK(out.t <= 1.0 + 1e-6);
}

TEST_CASE("observer sees increasing times and consistent derivatives") {
    ode::StepOptions opt;
    opt.rtol = 1e-10;
    opt.atol = 1e-14;
    double last = -1.0;
    bool increasing = true, consistent = true;
    ode::integrate<1>([](double, const ode::State<1>& y) { return ode::State<1>{y[0]}; }, 0.0, {1.0}, 2.0, opt, {},
                      [&](double t, const ode::State<1>& y, const ode::State<1>& dy) {
                          increasing = increasing && t > last;
                          consistent = consistent && std::abs(dy[0] - y[0]) <= 1e-14 * y[0];
                          last = t;
                      });
    CHECK(increasing);
    CHECK(consistent);
    CHECK(last == doctest::Approx(2.0));
}

TEST_CASE("jets: derivatives of exp and pow") {
    using J = Jet<4>;
    const J x = J::variable(0.7);
    const J g = exp(-1.0 * (x * x));
    const double e = std::exp(-0.49);
    CHECK(g.derivative(0) == doctest::Approx(e));
    CHECK(g.derivative(1) == doctest::Approx(-1.4 * e));
    CHECK(g.derivative(2) == doctest::Approx((4 * 0.49 - 2) * e));
    const J h = pow(1.0 + x * x, -2.0);
    // d/dr (1+r^2)^{-2} = -4r (1+r^2)^{-3}
    CHECK(h.derivative(1) == doctest::Approx(-4 * 0.7 * std::pow(1.49, -3.0)));
    const J c = J::constant(3.0);
    CHECK(c.derivative(1) == 0.0);
    CHECK((c * x).derivative(1) == doctest::Approx(3.0));
}
