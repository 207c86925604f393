#pragma once

// Truncated Taylor series in one variable: f(r0 + t) = sum_k c[k] t^k.
// Used to differentiate the analytic catalog profiles exactly.

#include <array>
#include <cmath>
#include <cstddef>

namespace henon {

template <std::size_t D>
struct Jet {
    std::array<double, D + 1> c{};

    static Jet variable(double r0) {
        Jet j;
        j.c[0] = r0;
        if constexpr (D >= 1) j.c[1] = 1.0;
        return j;
    }
    static Jet constant(double value) {
        Jet j;
        j.c[0] = value;
        return j;
    }

    /// k-th derivative at the expansion point.
    [[nodiscard]] double derivative(std::size_t k) const {
        double factorial = 1.0;
        for (std::size_t i = 2; i <= k; ++i) factorial *= static_cast<double>(i);
        return c[k] * factorial;
    }
};

template <std::size_t D>
Jet<D> operator+(Jet<D> x, const Jet<D>& y) {
    for (std::size_t k = 0; k <= D; ++k) x.c[k] += y.c[k];
    return x;
}

template <std::size_t D>
Jet<D> operator-(Jet<D> x, const Jet<D>& y) {
    for (std::size_t k = 0; k <= D; ++k) x.c[k] -= y.c[k];
    return x;
}

template <std::size_t D>
Jet<D> operator*(double s, Jet<D> x) {
    for (auto& v : x.c) v *= s;
    return x;
}

template <std::size_t D>
Jet<D> operator+(double s, Jet<D> x) {
    x.c[0] += s;
    return x;
}

template <std::size_t D>
Jet<D> operator*(const Jet<D>& x, const Jet<D>& y) {
    Jet<D> out;
    for (std::size_t k = 0; k <= D; ++k) {
        for (std::size_t i = 0; i <= k; ++i) out.c[k] += x.c[i] * y.c[k - i];
    }
    return out;
}

template <std::size_t D>
Jet<D> exp(const Jet<D>& x) {
    // e' = x' e  =>  k e_k = sum_{i=1..k} i x_i e_{k-i}
    Jet<D> e;
    e.c[0] = std::exp(x.c[0]);
    for (std::size_t k = 1; k <= D; ++k) {
        double acc = 0.0;
        for (std::size_t i = 1; i <= k; ++i) acc += static_cast<double>(i) * x.c[i] * e.c[k - i];
        e.c[k] = acc / static_cast<double>(k);
    }
    return e;
}

/// x^s for x.c[0] > 0.
template <std::size_t D>
Jet<D> pow(const Jet<D>& x, double s) {
    // y = x^s  =>  x y' = s x' y  =>  x0 k y_k = sum_{i=1..k} (s i - (k - i)) x_i y_{k-i}
    Jet<D> y;
    y.c[0] = std::pow(x.c[0], s);
    for (std::size_t k = 1; k <= D; ++k) {
        double acc = 0.0;
        for (std::size_t i = 1; i <= k; ++i) {
            acc += (s * static_cast<double>(i) - static_cast<double>(k - i)) * x.c[i] * y.c[k - i];
        }
        y.c[k] = acc / (static_cast<double>(k) * x.c[0]);
    }
    return y;
}

} // namespace henon
