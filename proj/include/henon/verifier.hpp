#pragma once

// Pointwise evaluation of the lower bounds for -Delta u on radial profiles.
// Evaluation (margins, ladders) is kept separate from judgment (verdicts).

#include "henon/iteration.hpp"
#include "henon/fd.hpp"
#include "henon/radial.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace henon {

enum class Verdict { pass, fail, report_only, outside_weight_range };

std::string to_string(Verdict v);

struct LadderRow {
    int k = 0; // -1 is the bare Laplacian row
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> w;        // w_k on the profile grid
    std::vector<double> wtilde;   // (u+eps)^{-alpha_k} w_k
    std::vector<std::size_t> region_mask; // indices with w_k >= 0
    double max_w = 0.0;
    double argmax_radius = 0.0;
};

struct LadderValues {
    double epsilon = 0.0;
    std::size_t K = 0;
    double scale = 0.0;
    double tol = 0.0;
    std::vector<LadderRow> rows; // k = -1..K
    bool ordering_holds = true;  // w_{k+1} >= w_k pointwise (asserted only at eps = 0)
    Verdict verdict = Verdict::report_only;
};

struct InequalityReport {
    std::vector<double> r;
    std::vector<double> lhs;          // -Delta u = v
    std::vector<double> rhs_main;
    std::vector<double> rhs_souplet;
    std::vector<double> margins_main;
    std::vector<double> margins_souplet;
    std::vector<double> dominance;    // rhs_main - rhs_souplet
    double min_margin_main = 0.0;
    double argmin_radius = 0.0;
    double min_margin_souplet = 0.0;
    double min_dominance = 0.0;
    double scale = 0.0;               // sup of rhs_main on the grid
    double tol_rel = 0.0;
    double weight_bound = 0.0;        // inf_k A_k (NaN outside strict mode)
    std::vector<double> ladder_max;   // max_r w_k for k = -1..kLadderDepth
    Verdict verdict = Verdict::report_only;
    Verdict ladder_verdict = Verdict::report_only;
};

/// Requires u > 0 on the grid.
InequalityReport inequality_report(const RadialProfile& profile, const ProblemParams& params,
                                   double tol_rel = 1e-6);

/// Ladder of w_k = Delta u + alpha_k |grad u|^2/(u+eps) + beta_k |x|^{a/2} u^{(p+1)/2}.
LadderValues ladder_check(const RadialProfile& profile, const IterationTable& table, double epsilon,
                          std::size_t K, double tol);

struct WtildeDiagnostic {
    std::vector<std::size_t> region_mask; // profile indices with w >= 0
    bool mask_empty = true;
    std::vector<double> fd_radii;         // uniform-grid radii inside the region
    std::vector<double> fd_laplacian;     // FD Laplacian of wtilde at those radii
    double min_laplacian = 0.0;           // over the region (0 when empty)
    double subharmonicity_defect = 0.0;   // max(0, -min_laplacian)
};

/// Requires p + 1 > 2 alpha. `fd_points` sets the uniform resampling grid.
WtildeDiagnostic wtilde_diagnostic(const RadialProfile& profile, double alpha, double beta, double epsilon,
                                   std::size_t fd_points = 4001);

struct CurvatureReport {
    double conformal_exponent = 0.0; // 4/(n-4)
    double inner_power = 0.0;        // (n-2)/(n-4)
    std::vector<double> r;
    std::vector<double> S_g;
    std::vector<double> gradient_margin; // -(Delta u + (2/(n-4)) |grad u|^2/u)
    std::vector<double> fd_radii;
    std::vector<double> identity_residual;
    double min_S_g = 0.0;
    bool positive = false;
    Verdict verdict = Verdict::report_only;
};

CurvatureReport conformal_scalar_curvature(const RadialProfile& profile, const ProblemParams& params,
                                           std::size_t fd_points = 4001);

/// Delta(u^m) - m u^{m-1} (Delta u + (m-1) u'^2/u) by finite differences on a
/// uniform grid resampled from the profile.
std::vector<double> curvature_identity_residual(const RadialProfile& profile, const fd::UniformGrid& grid);

} // namespace henon
