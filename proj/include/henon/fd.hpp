#pragma once

// Second-order centered finite differences on uniform radial grids, plus the
// small fitting helpers shared by the oracle and the verifier.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace henon::fd {

/// Uniform grid r_i = r0 + i h, i = 0..count-1.
struct UniformGrid {
    double r0 = 0.0;
    double h = 0.0;
    std::size_t count = 0;

    [[nodiscard]] double at(std::size_t i) const { return r0 + h * static_cast<double>(i); }
    [[nodiscard]] std::vector<double> radii() const;
};

/// Radial Laplacian f'' + (n-1) f'/r at interior points 1..count-2; the two
/// endpoints are NaN.
std::vector<double> radial_laplacian(std::span<const double> f, const UniformGrid& grid, int n);

/// Centered first derivative at interior points; endpoints NaN.
std::vector<double> first_derivative(std::span<const double> f, const UniformGrid& grid);

/// Centered second derivative at interior points; endpoints NaN.
std::vector<double> second_derivative(std::span<const double> f, const UniformGrid& grid);

/// Least-squares slope and intercept of y against x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Observed order from (h, residual) pairs: least-squares slope of log residual
/// against log h.
double convergence_order(std::span<const double> h, std::span<const double> residual);

/// Max |value| over entries that are finite.
double max_abs_finite(std::span<const double> values);

} // namespace henon::fd
