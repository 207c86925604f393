#pragma once

// Closed-form constants, recursions and coefficient formulas of the
// Moser-type iteration for Delta^2 u = |x|^a u^p. Pure arithmetic.

#include "henon/params.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace henon {

inline constexpr std::size_t kLimitDepth = 200;
inline constexpr std::size_t kLadderDepth = 50;

/// alpha_0 = 0 and alpha_{k+1} = (4(alpha_k+1) - n + sqrt(n(16 alpha_k^2 + 24 alpha_k + n + 8))) / (4(n-1)).
/// Returns K+1 values alpha_0..alpha_K.
std::vector<double> alpha_sequence(const ProblemParams& params, std::size_t K);

/// One application of the alpha recursion; exposed for fixed-point checks.
double alpha_step(int n, double alpha);

/// beta_0 = sqrt(2/(p+1)) and beta_{k+1} = sqrt(2/(p+1) + 4 alpha_k beta_k^2 / ((p+1) n)).
/// Requires alphas.size() >= K.
std::vector<double> beta_sequence(const ProblemParams& params, const std::vector<double>& alphas, std::size_t K);

double beta_step(const ProblemParams& params, double alpha, double beta);

/// Coefficients of the differential inequality for w_{k+1}, evaluated with the
/// ratio u/(u+eps) = rho (rho = 1 is the eps -> 0 limit used by all verdicts).
struct CoefficientSet {
    std::size_t k = 0;
    double alpha_k = 0.0;
    double alpha_next = 0.0;
    double beta_k = 0.0;
    double beta_next = 0.0;
    double rho = 1.0;
    double I1 = 0.0;
    double I2 = 0.0;
    double I3 = 0.0;
    double I4 = 0.0;          // at the problem's weight exponent a
    double I1_closed = 0.0;   // (2/n) beta_k^2 (alpha_{k+1} - alpha_k)
    double A_numerator = 0.0;
    double A_denominator = 0.0; // beta_{k+1}(q - alpha_{k+1})^2 - I3 at rho = 1
    double A = 0.0;             // admissible weight bound A_k
};

/// Throws HenonError if the A_k denominator is not strictly positive.
CoefficientSet iteration_coefficients(const ProblemParams& params, const std::vector<double>& alphas,
                                      const std::vector<double>& betas, std::size_t k, double rho = 1.0);

/// I4 as a function of the weight exponent, with the other data of `row`.
double coefficient_I4(const ProblemParams& params, const CoefficientSet& row, double a);

/// Limit coefficients at (alpha, beta) = (2/(n-4), sqrt(2/((p+1)-c_n))).
struct LimitCoefficients {
    double alpha = 0.0;
    double beta = 0.0;
    double I3 = 0.0;          // (4/n) a b (2a+1) + a b + b q (q - 3a - 1)
    double I3_factored = 0.0; // beta (q - n/(n-4)) (q - 2/(n-4))
    double A_denominator = 0.0;
    double A = 0.0;
};

LimitCoefficients limit_coefficients(const ProblemParams& params);

struct IterationTable {
    ProblemParams params;
    std::vector<double> alpha; // 0..K+1
    std::vector<double> beta;  // 0..K+1
    std::vector<CoefficientSet> rows; // 0..K
    LimitCoefficients limit;

    [[nodiscard]] std::size_t depth() const { return rows.size() == 0 ? 0 : rows.size() - 1; }
};

/// Builds rows k = 0..K. In strict mode a nonpositive A_k denominator throws;
/// in exploratory mode the affected A_k are stored as NaN.
IterationTable make_iteration_table(const ProblemParams& params, std::size_t K = kLimitDepth);

struct WeightBoundReport {
    std::vector<double> A;         // k = 0..K
    double window_min = 0.0;
    std::size_t argmin = 0;        // observed minimiser inside the window
    double A_limit = 0.0;
    double inf_bound = 0.0;        // min(window_min, A_limit)
    bool nonincreasing = false;    // observed over the window, not assumed
    bool nondecreasing = false;
};

/// Requires strict mode.
WeightBoundReport admissible_weight_bound(const ProblemParams& params, std::size_t K = kLimitDepth);

/// True for strict-mode parameters whose weight exponent satisfies a <= inf_k A_k
/// (window K = kLimitDepth together with the limit value).
bool theorem_regime(const ProblemParams& params);

/// A number that may exceed double range; `log_value` is always valid.
/// Monotonicity of a sequence computed in floating point. A convergent
/// sequence stalls once it reaches its floating-point fixed point; it counts as
/// strictly increasing if it increases strictly up to the stall and stays
/// constant afterwards.
struct Monotonicity {
    bool nondecreasing = true;
    bool strictly_increasing = true;
    std::size_t stall_index = 0; // first k with x_{k+1} == x_k, or the last index
};
Monotonicity monotonicity(const std::vector<double>& xs);

struct Magnitude {
    double value = 0.0; // +inf once the magnitude passes kOverflowThreshold
    double log_value = 0.0;
    [[nodiscard]] bool log_only() const;
};

inline constexpr double kOverflowThreshold = 1e300;

Magnitude magnitude_from_log(double log_value);

struct GrowthRow {
    std::size_t k = 0;
    Magnitude t_recursive;
    Magnitude t_closed;
    Magnitude s_recursive;
    Magnitude s_closed;
    Magnitude Mk_bound;       // B^{4k+4}
    double r_ratio = 0.0;     // 2^{4/(p t_k + a + 1)}
    double r_cumulative = 1.0; // r_k / r_0 = prod_{i<k} r_ratio_i
};

struct GrowthTable {
    double p = 0.0;
    double a = 0.0;
    int n = 0;
    double growth_base = 0.0; // B = 2p + a + n + 4
    std::vector<GrowthRow> rows;
    double r_product_limit = 1.0; // estimate of prod_{i>=0} r_ratio_i
    std::optional<double> alpha_bar; // -v(0)/(2n) when attached to a blow-up run
};

/// Requires only p > 1; supercriticality is not needed.
GrowthTable growth_sequences(const ProblemParams& params, std::size_t K);

/// log of the envelope alpha^{p^k} B^{-s_k} r^{t_k}.
double log_envelope(const GrowthTable& table, std::size_t k, double alpha_bar, double r);

struct ExponentTable {
    double s = 0.0;             // 2/(n-3)
    double eta1 = 0.0;
    double eta2 = 0.0;
    double eta3 = 0.0;
    double eta = 0.0;           // min of the three
    double side_condition = 0.0; // p/(p-1) - (s+1)/2
    std::map<std::string, double> decay_exponents;
};

ExponentTable exponent_table(const ProblemParams& params);

} // namespace henon
