#pragma once

// Independent checks of the algebraic identities and elementary inequalities,
// by finite differences, quadrature and seeded random sampling.

#include "henon/fd.hpp"
#include "henon/params.hpp"
#include "henon/radial.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace henon {

struct OracleResidual {
    std::string name;
    std::vector<double> grid_h;
    std::vector<double> residual; // max-norm per h
    double scale = 0.0;           // max |expansion| on the finest grid
    double order = 0.0;
    double order_threshold = 1.9;
    double residual_cap = 0.0;
    bool pass = false;
};

/// Refinement window on which FD residuals are measured.
struct OracleWindow {
    double r_lo = 0.25;
    double r_hi = 3.0;
    std::vector<double> h = {0.02, 0.01, 0.005, 0.0025};
};

struct TraceCheck {
    double margin = 0.0; // dim |A|^2 - (tr A)^2
    double norm2 = 0.0;  // Frobenius norm squared
    bool equality = false;
    bool within_tolerance = false;
};

/// `matrix` is row-major. Rejects non-square or non-finite input.
TraceCheck check_trace_inequality(const std::vector<std::vector<double>>& matrix);

/// (t-s)^2 - (t_star^2 - 2 t_star s + s^2). Requires t <= t_star <= 0 <= s.
double check_square_inequality(double t, double t_star, double s);

struct RandomSweep {
    std::string name;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    double min_relative_margin = 0.0;
    std::size_t violations = 0; // margins below -tol
    double tol = 1e-12;
    bool pass = false;
};

RandomSweep random_trace_sweep(std::uint64_t seed, std::size_t trials, std::size_t dim = 5);
RandomSweep random_square_sweep(std::uint64_t seed, std::size_t trials);

/// J: Delta(|x|^b u^q) against its four-term expansion. I: Delta(|grad u|^2/(u+eps))
/// against its five-term expansion. Both sides use the same centered stencils
/// on u samples, so the degenerate case b = 0, q = 1 cancels to rounding.
std::vector<OracleResidual> check_expansion_identities(const TestFunctionSpec& test_fn, const ProblemParams& params,
                                                       double b, double q, double epsilon,
                                                       const OracleWindow& window = {});

/// Residual of sqrt(2/(p+1)) u^{(1-p)/2} Delta w - (Delta u + sqrt(2/(p+1)) u^{(p+1)/2} + ((p-1)/2)|grad u|^2/u)
/// with w = Delta u + sqrt(2/(p+1)) u^{(p+1)/2}. Rejects a != 0.
OracleResidual check_auxiliary_equation(const RadialProfile& profile, const ProblemParams& params,
                                        const OracleWindow& window = {});

/// Power-law model source(t) ~ coefficient * t^{-exponent} beyond the grid.
struct PowerTail {
    double coefficient = 0.0;
    double exponent = 0.0;
};

/// w(r) = int_r^inf s^{1-n} int_0^s t^{n-1} source(t) dt ds on `r`, using
/// Simpson on each grid interval with midpoints from `source`.
struct PotentialValues {
    std::vector<double> w;
    std::vector<double> enclosed; // int_0^r t^{n-1} source
    bool tail_converges = true;
};
PotentialValues radial_potential(const std::vector<double>& r, const std::function<double(double)>& source, int n,
                                 const PowerTail& tail);

struct PotentialReport {
    std::vector<double> r;
    std::vector<double> w_vals;
    double omega_n = 0.0;
    std::vector<double> h_vals; // w + Delta u = w - v
    double c1 = 0.0;
    double c2 = 0.0;
    double fit_residual = 0.0;
    double max_abs_h = 0.0;
    double sup_v = 0.0;
    double tail_exponent = 0.0; // fitted decay rate of u
    bool tail_converges = true;
    bool pass = false;          // max |h| <= 1e-4 sup v
};

/// Rejects profiles whose last decade does not decay.
PotentialReport newton_potential_check(const RadialProfile& profile, const ProblemParams& params);

enum class DecayQuantity { lemma1bound, corollary_u, lemma1boundLap, corgrad, delta2 };

std::string to_string(DecayQuantity q);
DecayQuantity decay_quantity_from_string(const std::string& name);

struct SlopeReport {
    DecayQuantity quantity = DecayQuantity::lemma1bound;
    std::vector<double> R;
    std::vector<double> integral;
    double predicted = 0.0;
    double fitted = 0.0;
    double slope_tol = 0.2;
    bool pass = false; // fitted <= predicted + slope_tol
};

/// Needs at least two decades of radius.
SlopeReport decay_slope_check(const RadialProfile& profile, const ProblemParams& params, DecayQuantity quantity,
                              std::size_t ladder_points = 21, double slope_tol = 0.2);

/// Unit ball volume pi^{n/2}/Gamma(n/2+1).
double unit_ball_volume(int n);

} // namespace henon
