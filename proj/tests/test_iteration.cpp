#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "henon/iteration.hpp"

#include <cmath>

using namespace henon;

namespace {
ProblemParams P(int n, double p, double a = 0.0, Mode m = Mode::strict) { return validate_params(n, p, a, m); }
}

TEST_CASE("alpha sequence: start, first step, limit") {
    const auto alphas = alpha_sequence(P(8, 5), 200);
    REQUIRE(alphas.size() == 201);
    CHECK(alphas[0] == 0.0);
    // closed form of the first step
    const double n = 8.0;
    CHECK(alphas[1] == doctest::Approx((4.0 - n + std::sqrt(n * n + 8.0 * n)) / (4.0 * n - 4.0)).epsilon(1e-15));
    CHECK(alphas[1] == doctest::Approx((-4.0 + std::sqrt(128.0)) / 28.0).epsilon(1e-15));
    CHECK(alphas[1] == doctest::Approx(0.261204).epsilon(1e-6));
    CHECK(std::abs(alphas[200] - 0.5) < 1e-10);
    CHECK_THROWS_AS(alpha_sequence(P(8, 5), 0), HenonError);
}

TEST_CASE("beta sequence: start, repeated first term, limit") {
    const ProblemParams p = P(8, 5);
    const auto alphas = alpha_sequence(p, 200);
    const auto betas = beta_sequence(p, alphas, 200);
    CHECK(betas[0] == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-15));
    CHECK(betas[1] == betas[0]);
    CHECK(std::abs(betas[200] - std::sqrt(2.0 / 5.75)) < 1e-10);
    CHECK_THROWS_AS(beta_sequence(p, std::vector<double>{0.0}, 5), HenonError);
}

TEST_CASE("fixed points reproduce the limits") {
    for (int n = 5; n <= 12; ++n) {
        const ProblemParams p = P(n, (n + 4.0) / (n - 4.0) + 0.5);
        CHECK(std::abs(alpha_step(n, p.derived.alpha_limit) - p.derived.alpha_limit) < 1e-12);
        CHECK(std::abs(beta_step(p, p.derived.alpha_limit, p.derived.beta_limit) - p.derived.beta_limit) < 1e-12);
    }
}

TEST_CASE("monotone convergence on the dimension grid") {
    for (int n = 5; n <= 12; ++n) {
        const ProblemParams p = P(n, (n + 4.0) / (n - 4.0) + 0.5);
        const auto alphas = alpha_sequence(p, 200);
        const auto betas = beta_sequence(p, alphas, 200);
        CHECK(monotonicity(alphas).strictly_increasing);
        CHECK(monotonicity(betas).nondecreasing);
        double prev_gap = INFINITY;
        for (double a : alphas) {
            CHECK(a <= p.derived.alpha_limit);
            const double gap = p.derived.alpha_limit - a;
            CHECK(gap <= prev_gap);
            prev_gap = gap;
        }
        for (double b : betas) CHECK(b <= p.derived.beta_limit + 1e-15);
    }
}

TEST_CASE("monotonicity helper") {
    CHECK(monotonicity({0.0, 1.0, 2.0, 2.0, 2.0}).strictly_increasing);
    CHECK(monotonicity({0.0, 1.0, 2.0, 2.0, 2.0}).stall_index == 2);
    CHECK_FALSE(monotonicity({0.0, 1.0, 1.0, 2.0}).strictly_increasing);
    CHECK(monotonicity({0.0, 1.0, 1.0, 2.0}).nondecreasing);
    CHECK_FALSE(monotonicity({0.0, 2.0, 1.0}).nondecreasing);
}

TEST_CASE("coefficient identities on every row") {
    for (int n = 5; n <= 12; ++n) {
        const IterationTable t = make_iteration_table(P(n, (n + 4.0) / (n - 4.0) + 0.5));
        for (const auto& row : t.rows) {
            CHECK(std::abs(row.I2) <= 1e-12 * (1.0 + row.alpha_next * row.alpha_next));
            CHECK(std::abs(row.I1 - (2.0 / n) * row.beta_k * row.beta_k * (row.alpha_next - row.alpha_k)) <= 1e-12);
            CHECK(row.I1 >= -1e-12);
            CHECK(row.I1_closed >= 0.0);
            CHECK(row.A > 0.0);
            CHECK(row.A_denominator > 0.0);
        }
        CHECK(std::abs(t.limit.I3 - t.limit.I3_factored) <= 1e-9 * std::abs(t.limit.I3));
    }
}

TEST_CASE("limit weight bound for n=8, p=5 by rational substitution") {
    // alpha = 1/2, beta^2 = 8/23, q = 3: I3/beta = (3-2)(3-1/2), denominator/beta = (3-1/2)^2 - 5/2
    const double i3_over_beta = (3.0 - 2.0) * (3.0 - 0.5);
    const double denom_over_beta = 6.25 - i3_over_beta;
    const double expected = 2.0 * 6.0 * i3_over_beta / denom_over_beta;
    CHECK(expected == doctest::Approx(8.0));
    const LimitCoefficients lim = limit_coefficients(P(8, 5));
    CHECK(lim.beta * lim.beta == doctest::Approx(8.0 / 23.0).epsilon(1e-14));
    CHECK(lim.I3 / lim.beta == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(std::abs(lim.A - expected) < 1e-9);
}

TEST_CASE("first weight bound by direct evaluation") {
    const ProblemParams p = P(8, 5);
    const double n = 8.0, q = 3.0;
    const double a1 = (-4.0 + std::sqrt(128.0)) / 28.0, a0 = 0.0;
    const double b0 = std::sqrt(1.0 / 3.0), b1 = b0;
    const double I3 = (4.0 / n) * a1 * b0 * (a1 + a0 + 1.0) + b1 * a1 - (p.p + 1.0) * b1 * a1 +
                      q * ((p.p - 1.0) / 2.0 - a1) * b1;
    const double A0 = 2.0 * (n - 2.0) * I3 / (b1 * (q - a1) * (q - a1) - I3);
    CHECK(A0 == doctest::Approx(14.27).epsilon(1e-3));
    const IterationTable t = make_iteration_table(p, 10);
    CHECK(t.rows[0].A == doctest::Approx(A0).epsilon(1e-13));
    CHECK(t.rows[0].I3 == doctest::Approx(I3).epsilon(1e-13));
}

TEST_CASE("admissible weight bound report") {
    const WeightBoundReport wb = admissible_weight_bound(P(8, 5), 200);
    CHECK(wb.A.size() == 201);
    CHECK(wb.A_limit == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(wb.inf_bound <= wb.A_limit);
    CHECK(wb.inf_bound <= wb.window_min);
    CHECK(wb.A[wb.argmin] == wb.window_min);
    CHECK(wb.nonincreasing);
    CHECK_THROWS_AS(admissible_weight_bound(P(8, 3, 0, Mode::exploratory), 10), HenonError);
    CHECK(theorem_regime(P(8, 5)));
    CHECK(theorem_regime(P(8, 5, 0.5)));
    CHECK_FALSE(theorem_regime(P(8, 3, 0, Mode::exploratory)));
}

TEST_CASE("subcritical exploratory tables lose the positive weight bound") {
    // q = 3/2 < n/(n-4) = 2 makes the limit I3 negative
    const IterationTable t = make_iteration_table(P(8, 2, 0, Mode::exploratory), 20);
    CHECK(t.limit.I3 < 0.0);
    CHECK_FALSE(t.limit.A > 0.0);
    CHECK_FALSE(t.rows.back().A > 0.0);
    CHECK_THROWS_AS(iteration_coefficients(P(8, 5), t.alpha, t.beta, 0, 0.0), HenonError);
}

TEST_CASE("I4 at the problem's weight") {
    const ProblemParams p = P(8, 5, 1.0);
    const IterationTable t = make_iteration_table(p, 5);
    const auto& row = t.rows[2];
    const double b = 0.5;
    const double expected = b * row.beta_next * (8.0 + b - 2.0) -
                            1.0 * row.beta_next * row.beta_next * std::pow(3.0 - row.alpha_next, 2) / (4.0 * row.I3);
    CHECK(coefficient_I4(p, row, 1.0) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(row.I4 == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("growth bookkeeping: recursion against closed forms") {
    for (double p : {1.5, 2.0, 3.0}) {
        for (double a : {0.0, 1.0}) {
            const GrowthTable g = growth_sequences(P(8, p, a, Mode::exploratory), 30);
            for (const auto& row : g.rows) {
                CHECK(std::abs(row.t_recursive.value - row.t_closed.value) <= 1e-12 * std::abs(row.t_closed.value));
                if (row.k > 0) {
                    CHECK(std::abs(row.s_recursive.value - row.s_closed.value) <= 1e-12 * std::abs(row.s_closed.value));
                }
            }
            CHECK(g.growth_base == doctest::Approx(2.0 * p + a + 8.0 + 4.0));
        }
    }
    const GrowthTable g = growth_sequences(P(8, 2, 0, Mode::exploratory), 5);
    CHECK(g.rows[0].t_recursive.value == 2.0);
    CHECK(g.rows[0].s_recursive.value == 0.0);
    CHECK(g.rows[1].t_recursive.value == 8.0);
    CHECK(g.rows[1].t_closed.value == doctest::Approx((2.0 * 4 + 2.0 * 2 - 4.0) / 1.0));
    CHECK(g.rows[2].s_recursive.value == 16.0);
    CHECK(g.rows[2].s_closed.value == doctest::Approx((4.0 * 8 - 24.0 + 8.0) / 1.0));
    CHECK(g.rows[1].r_ratio == doctest::Approx(std::pow(2.0, 4.0 / (2.0 * 8.0 + 1.0))));
}

TEST_CASE("growth sequences switch to log space instead of overflowing") {
    const GrowthTable g = growth_sequences(P(8, 8, 0, Mode::exploratory), 400);
    const auto& last = g.rows.back();
    CHECK(last.t_recursive.log_only());
    CHECK(std::isfinite(last.t_recursive.log_value));
    CHECK(last.t_recursive.log_value == doctest::Approx(last.t_closed.log_value).epsilon(1e-12));
    CHECK(std::isfinite(last.Mk_bound.log_value));
    CHECK(std::isfinite(g.r_product_limit));
    // Cauchy partial products
    CHECK(g.rows[399].r_cumulative == doctest::Approx(g.rows[400].r_cumulative).epsilon(1e-12));
}

TEST_CASE("exponent table for n=8, p=5, a=0") {
    const ExponentTable e = exponent_table(P(8, 5));
    CHECK(e.s == doctest::Approx(0.4));
    CHECK(e.eta1 == doctest::Approx(5.0));
    CHECK(e.eta2 == doctest::Approx(2.8));
    CHECK(e.eta3 == doctest::Approx(5.6));
    CHECK(e.eta == doctest::Approx(2.8));
    CHECK(e.decay_exponents.at("lemma1bound") == doctest::Approx(3.0));
    CHECK(e.decay_exponents.at("corollary_u") == doctest::Approx(7.0));
    CHECK(e.decay_exponents.at("corgrad") == doctest::Approx(6.0));
    CHECK(e.decay_exponents.at("lemma1boundLap") == doctest::Approx(5.0));
    CHECK(e.decay_exponents.at("delta2") == doctest::Approx(3.0));
    CHECK(e.decay_exponents.at("up_sphere") == doctest::Approx(3.0));
    CHECK(e.decay_exponents.size() == 6);
}

TEST_CASE("exponent positivity across the strict grid") {
    for (int n = 5; n <= 12; ++n) {
        for (double a : {0.0, 0.5, 2.0}) {
            const ProblemParams p = P(n, (n + 4.0 + 2.0 * a) / (n - 4.0) + 0.5, a);
            const ExponentTable e = exponent_table(p);
            CHECK(e.s > 0.0);
            CHECK(e.s <= 1.0);
            CHECK(e.eta1 > 0.0);
            CHECK(e.eta2 > 0.0);
            CHECK(e.eta3 > 0.0);
            CHECK(e.side_condition > 0.0);
        }
    }
}
