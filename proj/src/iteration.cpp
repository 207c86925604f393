#include "henon/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace henon {

double alpha_step(int n, double alpha) {
    const double nd = n;
    const double root = std::sqrt(nd * (16.0 * alpha * alpha + 24.0 * alpha + nd + 8.0));
    return (4.0 * (alpha + 1.0) - nd + root) / (4.0 * (nd - 1.0));
}

std::vector<double> alpha_sequence(const ProblemParams& params, std::size_t K) {
    if (K < 1) throw HenonError("alpha_sequence requires K >= 1");
    std::vector<double> alphas(K + 1);
    alphas[0] = 0.0;
    for (std::size_t k = 0; k < K; ++k) alphas[k + 1] = alpha_step(params.n, alphas[k]);
    return alphas;
}

double beta_step(const ProblemParams& params, double alpha, double beta) {
    const double p1 = params.p + 1.0;
    return std::sqrt(2.0 / p1 + 4.0 / (p1 * params.n) * alpha * beta * beta);
}

std::vector<double> beta_sequence(const ProblemParams& params, const std::vector<double>& alphas, std::size_t K) {
    if (alphas.size() < K) {
        throw HenonError("beta_sequence needs at least K alpha values");
    }
    std::vector<double> betas(K + 1);
    betas[0] = params.derived.beta_souplet;
    for (std::size_t k = 0; k < K; ++k) betas[k + 1] = beta_step(params, alphas[k], betas[k]);
    return betas;
}

namespace {

// I3 at ratio rho with (alpha_k, alpha_{k+1}, beta_k, beta_{k+1}).
double coefficient_I3(const ProblemParams& params, double ak, double an, double bk, double bn, double rho) {
    const double nd = params.n;
    const double p = params.p;
    const double q = params.derived.q;
    return 4.0 / nd * an * bk * (an + ak + 1.0) * rho * rho + bn * an * rho * rho - (p + 1.0) * bn * an * rho +
           q * (0.5 * (p - 1.0) - an * rho) * bn;
}

double I4_at(const ProblemParams& params, double an, double bn, double I3, double rho, double a) {
    const double q = params.derived.q;
    const double b = 0.5 * a;
    const double gap = q - an * rho;
    if (a == 0.0) return 0.0;
    return b * bn * (params.n + b - 2.0) - a * a * bn * bn * gap * gap / (4.0 * I3);
}

CoefficientSet compute_row(const ProblemParams& params, const std::vector<double>& alphas,
                           const std::vector<double>& betas, std::size_t k, double rho) {
    if (k + 1 >= alphas.size() || k + 1 >= betas.size()) {
        throw HenonError("iteration_coefficients: k+1 outside the table range");
    }
    if (!(rho > 0.0 && rho <= 1.0)) throw HenonError("ratio rho must lie in (0, 1]");

    const double nd = params.n;
    const double q = params.derived.q;
    CoefficientSet row;
    row.k = k;
    row.rho = rho;
    row.alpha_k = alphas[k];
    row.alpha_next = alphas[k + 1];
    row.beta_k = betas[k];
    row.beta_next = betas[k + 1];

    const double ak = row.alpha_k, an = row.alpha_next, bk = row.beta_k, bn = row.beta_next;
    row.I1 = 1.0 - q * bn * bn + 2.0 / nd * an * bk * bk * rho;
    row.I2 = 2.0 / nd * (an + ak + 1.0) * (an + ak + 1.0) - 2.0 * an * (an + 1.0) + an;
    row.I3 = coefficient_I3(params, ak, an, bk, bn, rho);
    row.I4 = I4_at(params, an, bn, row.I3, rho, params.a);
    row.I1_closed = 2.0 / nd * bk * bk * (an - ak);

    const double I3_0 = coefficient_I3(params, ak, an, bk, bn, 1.0);
    row.A_numerator = 2.0 * (nd - 2.0) * I3_0;
    row.A_denominator = bn * (q - an) * (q - an) - I3_0;
    row.A = row.A_denominator > 0.0 ? row.A_numerator / row.A_denominator
                                    : std::numeric_limits<double>::quiet_NaN();
    return row;
}

} // namespace

CoefficientSet iteration_coefficients(const ProblemParams& params, const std::vector<double>& alphas,
                                      const std::vector<double>& betas, std::size_t k, double rho) {
    CoefficientSet row = compute_row(params, alphas, betas, k, rho);
    if (!(row.A_denominator > 0.0)) {
        std::ostringstream msg;
        msg << "A_k denominator is not positive at k = " << k << " (" << row.A_denominator
            << "); parameters outside the strict regime or numerical fault";
        throw HenonError(msg.str());
    }
    return row;
}

double coefficient_I4(const ProblemParams& params, const CoefficientSet& row, double a) {
    return I4_at(params, row.alpha_next, row.beta_next, row.I3, row.rho, a);
}

LimitCoefficients limit_coefficients(const ProblemParams& params) {
    const double nd = params.n;
    const double q = params.derived.q;
    LimitCoefficients lim;
    lim.alpha = params.derived.alpha_limit;
    lim.beta = params.derived.beta_limit;
    const double al = lim.alpha, be = lim.beta;
    lim.I3 = 4.0 / nd * al * be * (2.0 * al + 1.0) + al * be + be * q * (q - 3.0 * al - 1.0);
    lim.I3_factored = be * (q - nd / (nd - 4.0)) * (q - 2.0 / (nd - 4.0));
    lim.A_denominator = be * (q - al) * (q - al) - lim.I3;
    lim.A = lim.A_denominator > 0.0 ? 2.0 * (nd - 2.0) * lim.I3 / lim.A_denominator
                                    : std::numeric_limits<double>::quiet_NaN();
    return lim;
}

IterationTable make_iteration_table(const ProblemParams& params, std::size_t K) {
    IterationTable table;
    table.params = params;
    table.alpha = alpha_sequence(params, K + 1);
    table.beta = beta_sequence(params, table.alpha, K + 1);
    table.rows.reserve(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
        if (params.mode == Mode::strict) {
            table.rows.push_back(iteration_coefficients(params, table.alpha, table.beta, k));
        } else {
            table.rows.push_back(compute_row(params, table.alpha, table.beta, k, 1.0));
        }
    }
    table.limit = limit_coefficients(params);
    return table;
}

WeightBoundReport admissible_weight_bound(const ProblemParams& params, std::size_t K) {
    if (params.mode != Mode::strict) {
        throw HenonError("admissible_weight_bound requires strict mode");
    }
    const IterationTable table = make_iteration_table(params, K);
    WeightBoundReport report;
    report.A.reserve(table.rows.size());
    for (const auto& row : table.rows) report.A.push_back(row.A);

    const auto it = std::min_element(report.A.begin(), report.A.end());
    report.window_min = *it;
    report.argmin = static_cast<std::size_t>(it - report.A.begin());
    report.A_limit = table.limit.A;
    report.inf_bound = std::min(report.window_min, report.A_limit);
    report.nonincreasing = std::is_sorted(report.A.rbegin(), report.A.rend());
    report.nondecreasing = std::is_sorted(report.A.begin(), report.A.end());
    return report;
}

bool theorem_regime(const ProblemParams& params) {
    if (params.mode != Mode::strict || !params.supercritical()) return false;
    return params.a <= admissible_weight_bound(params, kLimitDepth).inf_bound;
}

bool Magnitude::log_only() const { return !std::isfinite(value); }

Magnitude magnitude_from_log(double log_value) {
    Magnitude m;
    m.log_value = log_value;
    m.value = log_value > std::log(kOverflowThreshold) ? std::numeric_limits<double>::infinity()
                                                       : std::exp(log_value);
    return m;
}

namespace {

Magnitude magnitude_from_value(double value) {
    Magnitude m;
    m.value = value;
    m.log_value = value > 0.0 ? std::log(value) : -std::numeric_limits<double>::infinity();
    return m;
}

} // namespace

GrowthTable growth_sequences(const ProblemParams& params, std::size_t K) {
    if (K < 1) throw HenonError("growth_sequences requires K >= 1");
    const double p = params.p;
    const double a = params.a;
    const double lp = std::log(p);

    GrowthTable table;
    table.p = p;
    table.a = a;
    table.n = params.n;
    table.growth_base = 2.0 * p + a + params.n + 4.0;
    const double log_base = std::log(table.growth_base);

    // Recursions in linear space while representable, then in log space.
    double t_lin = 2.0, s_lin = 0.0;
    double t_log = std::log(2.0), s_log = -std::numeric_limits<double>::infinity();
    bool t_in_log = false, s_in_log = false;
    double r_cumulative = 1.0;

    table.rows.reserve(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
        const double kd = static_cast<double>(k);
        GrowthRow row;
        row.k = k;
        row.t_recursive = t_in_log ? magnitude_from_log(t_log) : magnitude_from_value(t_lin);
        row.s_recursive = s_in_log ? magnitude_from_log(s_log) : magnitude_from_value(s_lin);

        // Closed forms. p^k is evaluated directly while finite.
        const double log_pk = kd * lp;
        if (log_pk + std::log(2.0 * p + a + 2.0) < std::log(kOverflowThreshold)) {
            const double pk = std::pow(p, kd);
            const double pk1 = pk * p;
            row.t_closed = magnitude_from_value((2.0 * pk1 + (a + 2.0) * pk - (a + 4.0)) / (p - 1.0));
            row.s_closed = magnitude_from_value((4.0 * pk1 - 4.0 * p * (kd + 1.0) + 4.0 * kd) /
                                                ((p - 1.0) * (p - 1.0)));
        } else {
            const double lead_t = log_pk + std::log(2.0 * p + a + 2.0);
            row.t_closed = magnitude_from_log(lead_t - std::log(p - 1.0) +
                                              std::log1p(-(a + 4.0) * std::exp(-lead_t)));
            const double lead_s = (kd + 1.0) * lp + std::log(4.0);
            row.s_closed = magnitude_from_log(lead_s - 2.0 * std::log(p - 1.0) +
                                              std::log1p((4.0 * kd - 4.0 * p * (kd + 1.0)) * std::exp(-lead_s)));
        }

        row.Mk_bound = magnitude_from_log((4.0 * kd + 4.0) * log_base);

        // r_ratio = 2^{4/(p t_k + a + 1)}; for huge t_k the exponent underflows to 0.
        const double log_pt = lp + row.t_recursive.log_value;
        const double denom_log = log_pt + std::log1p((a + 1.0) * std::exp(-log_pt));
        row.r_ratio = std::exp(std::log(2.0) * 4.0 * std::exp(-denom_log));
        row.r_cumulative = r_cumulative;
        r_cumulative *= row.r_ratio;
        table.rows.push_back(row);

        // Advance t_{k+1} = p t_k + a + 4 and s_{k+1} = p s_k + 4k + 4.
        if (!t_in_log && p * t_lin + a + 4.0 > kOverflowThreshold) {
            t_in_log = true;
            t_log = std::log(t_lin);
        }
        if (t_in_log) {
            t_log = t_log + lp + std::log1p((a + 4.0) * std::exp(-(t_log + lp)));
        } else {
            t_lin = p * t_lin + a + 4.0;
        }
        if (!s_in_log && p * s_lin + 4.0 * kd + 4.0 > kOverflowThreshold) {
            s_in_log = true;
            s_log = std::log(s_lin);
        }
        if (s_in_log) {
            s_log = s_log + lp + std::log1p((4.0 * kd + 4.0) * std::exp(-(s_log + lp)));
        } else {
            s_lin = p * s_lin + 4.0 * kd + 4.0;
        }
    }
    table.r_product_limit = r_cumulative;
    return table;
}

double log_envelope(const GrowthTable& table, std::size_t k, double alpha_bar, double r) {
    if (k >= table.rows.size()) throw HenonError("log_envelope: k outside the growth table");
    if (!(alpha_bar > 0.0) || !(r > 0.0)) throw HenonError("log_envelope needs alpha_bar > 0 and r > 0");
    const GrowthRow& row = table.rows[k];
    const double pk = std::pow(table.p, static_cast<double>(k));
    const double s = row.s_recursive.log_only() ? std::exp(row.s_recursive.log_value) : row.s_recursive.value;
    const double t = row.t_recursive.log_only() ? std::exp(row.t_recursive.log_value) : row.t_recursive.value;
    return pk * std::log(alpha_bar) - s * std::log(table.growth_base) + t * std::log(r);
}

ExponentTable exponent_table(const ProblemParams& params) {
    const double nd = params.n;
    const double p = params.p;
    const double a = params.a;
    ExponentTable table;
    table.s = 2.0 / (nd - 3.0);
    const double s1 = table.s + 1.0;
    table.side_condition = p / (p - 1.0) - 0.5 * s1;
    table.eta1 = a * table.side_condition + 4.0 * p / (p - 1.0);
    table.eta2 = s1 / (p + 1.0) * (a * p + 2.0 * (p + 1.0));
    table.eta3 = 2.0 * (p + 3.0 + a) * s1 / (p - 1.0);
    table.eta = std::min({table.eta1, table.eta2, table.eta3});

    table.decay_exponents = {
        {"lemma1bound", nd - (4.0 * p + a) / (p - 1.0)},
        {"corollary_u", nd - (a + 4.0) / (p - 1.0)},
        {"lemma1boundLap", nd - (2.0 * p + 2.0 + a) / (p - 1.0)},
        {"corgrad", nd - (p + 3.0 + a) / (p - 1.0)},
        {"delta2", nd - (4.0 * p + a) / (p - 1.0)},
        {"up_sphere", nd - (a + 4.0) * p / (p - 1.0)},
    };
    return table;
}

Monotonicity monotonicity(const std::vector<double>& xs) {
    Monotonicity out;
    out.stall_index = xs.empty() ? 0 : xs.size() - 1;
    bool stalled = false;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        if (xs[k + 1] < xs[k]) out.nondecreasing = false;
        if (stalled) {
            if (xs[k + 1] != xs[k]) out.strictly_increasing = false;
        } else if (xs[k + 1] == xs[k]) {
            stalled = true;
            out.stall_index = k;
        }
    }
    if (!out.nondecreasing) out.strictly_increasing = false;
    return out;
}

} // namespace henon
