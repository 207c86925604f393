#include "henon/fd.hpp"

#include "henon/params.hpp"

#include <cmath>
#include <limits>

namespace henon::fd {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check(std::span<const double> f, const UniformGrid& grid) {
    if (f.size() != grid.count || grid.count < 3 || !(grid.h > 0.0)) {
        throw HenonError("finite differences need a uniform grid of at least three points matching the data");
    }
}
} // namespace

std::vector<double> UniformGrid::radii() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = at(i);
    return out;
}

std::vector<double> first_derivative(std::span<const double> f, const UniformGrid& grid) {
    check(f, grid);
    std::vector<double> out(f.size(), kNaN);
    for (std::size_t i = 1; i + 1 < f.size(); ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * grid.h);
    return out;
}

std::vector<double> second_derivative(std::span<const double> f, const UniformGrid& grid) {
    check(f, grid);
    std::vector<double> out(f.size(), kNaN);
    const double h2 = grid.h * grid.h;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    return out;
}

std::vector<double> radial_laplacian(std::span<const double> f, const UniformGrid& grid, int n) {
    check(f, grid);
    std::vector<double> out(f.size(), kNaN);
    const double h = grid.h;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        const double r = grid.at(i);
        if (!(r > 0.0)) continue;
        const double d2 = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
        const double d1 = (f[i + 1] - f[i - 1]) / (2.0 * h);
        out[i] = d2 + (n - 1.0) * d1 / r;
    }
    return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw HenonError("fit_line needs two or more paired samples");
    const double m = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw HenonError("fit_line: degenerate abscissae");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

double convergence_order(std::span<const double> h, std::span<const double> residual) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < h.size() && i < residual.size(); ++i) {
        if (h[i] > 0.0 && residual[i] > 0.0) {
            lx.push_back(std::log(h[i]));
            ly.push_back(std::log(residual[i]));
        }
    }
    if (lx.size() < 2) return kNaN;
    return fit_line(lx, ly).slope;
}

double max_abs_finite(std::span<const double> values) {
    double out = 0.0;
    for (double v : values) {
        if (std::isfinite(v)) out = std::max(out, std::abs(v));
    }
    return out;
}

} // namespace henon::fd
