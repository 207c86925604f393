#pragma once

// Radial solutions of Delta^2 u = |x|^a u^p written as the first-order system
//   -Delta_r u = v,   -Delta_r v = r^a u^p,   Delta_r f = f'' + (n-1) f'/r.

#include "henon/iteration.hpp"
#include "henon/params.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace henon {

enum class Classification {
    none,
    exact,        // closed-form profile
    synthetic,    // analytic test profile, not a solution
    entire_like,  // reached r_max positive, decreasing, with the expected tail
    reached_rmax, // reached r_max without an event
    u_crossing,
    v_crossing,
    growth,
};

std::string to_string(Classification c);

struct ProfileMeta {
    ProblemParams params;
    double u0 = 0.0;
    double v0 = 0.0;
    double tol = 0.0;
    double r_start = 0.0;
    Classification classification = Classification::none;
    bool theorem_covered = false; // strict-mode params and a <= inf A_k
    std::vector<std::string> warnings;
};

/// Samples of u, u', v = -Delta u and v' on a strictly increasing radial grid.
/// `lap_v` holds Delta v at the same radii; it feeds the interpolant only.
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> u;
    std::vector<double> du;
    std::vector<double> v;
    std::vector<double> dv;
    std::vector<double> lap_v;
    ProfileMeta meta;

    [[nodiscard]] std::size_t size() const { return r.size(); }
    /// Throws HenonError on ragged arrays, short or non-increasing grids.
    void validate() const;
};

/// Piecewise quintic Hermite interpolation of (u, v) using first and second
/// derivatives at the nodes; second derivatives come from the radial
/// Laplacian relations u'' = -v - (n-1)u'/r and v'' = lap_v - (n-1)v'/r.
class ProfileInterpolant {
public:
    explicit ProfileInterpolant(const RadialProfile& profile);

    struct Sample {
        double u, du, v, dv;
    };

    [[nodiscard]] Sample operator()(double r) const;
    [[nodiscard]] double r_min() const { return r_.front(); }
    [[nodiscard]] double r_max() const { return r_.back(); }

private:
    std::vector<double> r_, u_, du_, d2u_, v_, dv_, d2v_;
};

struct IvpOptions {
    double escape_factor = 1e6; // "growth" once u > escape_factor * u0
    double escape_value = 0.0;  // absolute escape bound; overrides the factor when > 0
    std::size_t max_steps = 2'000'000;
};

/// Integrates from the Taylor start to the first of r_max or an event
/// (u-crossing, v-crossing, growth). The v-crossing event is armed only when
/// v0 >= 0. Step underflow and non-finite states are reported as growth.
RadialProfile integrate_radial_ivp(const ProblemParams& params, double u0, double v0, double r_max, double tol,
                                   const IvpOptions& options = {});

/// Start radius used by integrate_radial_ivp.
double taylor_start_radius(const ProblemParams& params, double u0, double v0, double tol);

struct ShootingOptions {
    double r_max = 1e3;        // extent of the returned profile
    double r_probe = 1e8;      // trial integrations run this far looking for an event
    double ivp_tol = 1e-12;
    double tail_slope_tol = 0.1;
    std::size_t max_iterations = 300;
};

struct ShootingTrial {
    double v0 = 0.0;
    Classification event = Classification::none;
};

struct ShootingResult {
    double v0_star = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
    std::vector<ShootingTrial> classification_trace;
    RadialProfile profile;
    double tail_slope_deviation = 0.0; // max |d log u/d log r + m| over the last decade
    std::vector<std::string> warnings;
};

/// Bisection on v(0) for the entire decaying radial solution with u(0) = u0.
ShootingResult shoot_entire_solution(const ProblemParams& params, double u0, double tol,
                                     const ShootingOptions& options = {});

/// C_n = (n(n-4)(n^2-4))^{(n-4)/8}.
double bubble_constant(int n);

/// u(r) = C_n (lambda/(lambda^2 + r^2))^{(n-4)/2}, an exact solution of
/// Delta^2 u = u^{(n+4)/(n-4)}. Parameters are tagged exploratory.
RadialProfile critical_bubble(int n, double lambda, const std::vector<double>& grid);

struct EnvelopeCheck {
    std::size_t k = 0;
    double r_k = 0.0;
    std::size_t points = 0;     // grid points with r >= r_k
    double min_log_margin = 0.0; // min over those points of log u - log envelope
    bool pass = false;
};

struct BlowupReport {
    double alpha_bar = 0.0;
    double bound_check = 0.0;      // fraction of grid with u >= alpha_bar r^2
    double min_quadratic_margin = 0.0; // min of u - alpha_bar r^2
    std::optional<double> R_escape;
    bool v_nonincreasing = false;
    bool v_below_origin = false;   // v(r) <= v(0) on the grid
    bool slope_bound = false;      // u'(r) >= 0.9 (-v(0)) r / n on the grid
    double r_zero = 0.0;           // base radius of the envelope ladder
    std::vector<EnvelopeCheck> envelope_checks;
    bool partial = false;          // integration ended before reaching the escape value
    RadialProfile profile;
    GrowthTable growth;
};

BlowupReport simulate_average_blowup(const ProblemParams& params, double u0, double v0_neg, double escape,
                                     std::size_t envelope_depth = 3, double tol = 1e-11);

/// Catalog of analytic positive radial test functions.
enum class TestFunction { gaussian, bubble, rational, constant };

std::string to_string(TestFunction f);
TestFunction test_function_from_string(const std::string& name);

struct TestFunctionSpec {
    TestFunction kind = TestFunction::gaussian;
    double sigma = 1.0;  // exponent of the rational (1+r^2)^{-sigma}
    double value = 1.0;  // level of the constant profile
};

/// Derivatives f, f', ..., f'''' at r.
std::array<double, 5> test_function_derivatives(const TestFunctionSpec& spec, int n, double r);

/// Profile of an analytic test function: v = -Delta f, lap_v = -Delta^2 f.
RadialProfile synthetic_profile(const TestFunctionSpec& spec, const ProblemParams& params,
                                const std::vector<double>& grid);

std::vector<double> uniform_grid(double r0, double r1, std::size_t points);
std::vector<double> log_grid(double r0, double r1, std::size_t points);

} // namespace henon
