#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "henon/params.hpp"

#include <cmath>

using namespace henon;

TEST_CASE("accepts a supercritical strict triple and derives its constants") {
    const ProblemParams p = validate_params(8, 5.0, 0.0, Mode::strict);
    CHECK(p.derived.q == doctest::Approx(3.0));
    CHECK(p.derived.b == doctest::Approx(0.0));
    CHECK(p.derived.c_n == doctest::Approx(0.25));
    CHECK(p.derived.alpha_limit == doctest::Approx(0.5));
    CHECK(p.derived.beta_limit == doctest::Approx(std::sqrt(2.0 / 5.75)).epsilon(1e-14));
    CHECK(p.derived.critical_p == doctest::Approx(3.0));
    CHECK(p.supercritical());
    CHECK(p.decay_rate() == doctest::Approx(1.0));
}

TEST_CASE("strict mode rejects the critical and subcritical exponents") {
    CHECK_THROWS_AS(validate_params(8, 3.0, 0.0, Mode::strict), HenonError);
    CHECK_THROWS_AS(validate_params(8, 2.5, 0.0, Mode::strict), HenonError);
    // the weight raises the threshold: (8+4+2)/4 = 3.5
    CHECK_THROWS_AS(validate_params(8, 3.5, 1.0, Mode::strict), HenonError);
    CHECK_NOTHROW(validate_params(8, 3.6, 1.0, Mode::strict));
}

TEST_CASE("exploratory mode accepts any p > 1") {
    const ProblemParams p = validate_params(8, 3.0, 0.0, Mode::exploratory);
    CHECK_FALSE(p.supercritical());
    CHECK(p.mode == Mode::exploratory);
    CHECK_NOTHROW(validate_params(6, 1.5, 2.0, Mode::exploratory));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(validate_params(4, 5.0, 0.0, Mode::strict), HenonError);
    CHECK_THROWS_AS(validate_params(4, 5.0, 0.0, Mode::exploratory), HenonError);
    CHECK_THROWS_AS(validate_params(8, 1.0, 0.0, Mode::exploratory), HenonError);
    CHECK_THROWS_AS(validate_params(8, 5.0, -0.1, Mode::exploratory), HenonError);
    CHECK_THROWS_AS(validate_params(8, std::nan(""), 0.0, Mode::exploratory), HenonError);
}

TEST_CASE("derived-constant invariants over a grid") {
    for (int n = 5; n <= 12; ++n) {
        for (double p = 1.25; p <= 12.0; p += 0.25) {
            const ProblemParams P = validate_params(n, p, 0.0, Mode::exploratory);
            CHECK(P.derived.c_n > 0.0);
            CHECK((p + 1.0) - P.derived.c_n > 0.0);
            CHECK(P.derived.beta_limit > P.derived.beta_souplet);
        }
    }
}

TEST_CASE("mode names round-trip") {
    CHECK(mode_from_string(to_string(Mode::strict)) == Mode::strict);
    CHECK(mode_from_string("exploratory") == Mode::exploratory);
    CHECK_THROWS_AS(mode_from_string("loose"), HenonError);
}
