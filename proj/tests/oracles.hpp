#pragma once

// Test-only oracles, deliberately independent of the library's adaptive
// integration path.

#include <cmath>
#include <vector>

#include "pulsedyn/vector_field.hpp"

namespace oracles {

/// Classic fixed-step RK4 flow of xdot = h(x).
inline double rk4_flow(const pulsedyn::PolynomialVectorField& vf, double x0, double t,
                       double dt) {
    const long n = std::max(1L, std::lround(std::ceil(t / dt)));
    const double h = t / static_cast<double>(n);
    double x = x0;
    for (long i = 0; i < n; ++i) {
        const double k1 = vf(x);
        const double k2 = vf(x + 0.5 * h * k1);
        const double k3 = vf(x + 0.5 * h * k2);
        const double k4 = vf(x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

/// Dense-grid arg-extremum of f over [a, b]; brute-force oracle for the
/// golden-section path.
template <class F>
std::pair<double, double> grid_argmax(F&& f, double a, double b, int n) {
    double best_x = a, best_v = f(a);
    for (int i = 1; i < n; ++i) {
        const double x = a + (b - a) * i / static_cast<double>(n - 1);
        const double v = f(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    return {best_x, best_v};
}

template <class F>
std::pair<double, double> grid_argmin(F&& f, double a, double b, int n) {
    auto [x, v] = grid_argmax([&](double xx) { return -f(xx); }, a, b, n);
    return {x, -v};
}

}  // namespace oracles
