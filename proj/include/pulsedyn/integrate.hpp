#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "pulsedyn/errors.hpp"
#include "pulsedyn/vector_field.hpp"

namespace pulsedyn {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 1'000'000;
};

namespace detail {

/// Dormand-Prince 5(4) embedded pair, autonomous form, FSAL.
///
/// Integrates dy/dt = rhs(y) from t=0 to t_end with per-step error control
/// on every component and an exact landing on t_end. The observer is
/// invoked after each accepted step (including the final one) and may throw
/// to abort the integration (used for domain-escape detection).
template <std::size_t N, class Rhs, class Observer>
std::array<double, N> dopri5(Rhs&& rhs, std::array<double, N> y, double t_end,
                             const IntegratorConfig& cfg, Observer&& observe) {
    using State = std::array<double, N>;

    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b(5th) - b(4th): error estimator weights
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (t_end == 0.0) return y;

    State k1, k2, k3, k4, k5, k6, k7, yt, ynew;
    rhs(y, k1);

    // Hairer-style initial step size estimate.
    double h;
    {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
            d0 = std::max(d0, std::abs(y[i]) / sk);
            d1 = std::max(d1, std::abs(k1[i]) / sk);
        }
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, t_end);
        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h0 * k1[i];
        rhs(yt, k2);
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
            d2 = std::max(d2, std::abs(k2[i] - k1[i]) / sk);
        }
        d2 /= h0;
        const double dm = std::max(d1, d2);
        const double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                        : std::pow(0.01 / dm, 0.2);
        h = std::min({100.0 * h0, h1, cfg.max_step, t_end});
    }

    double t = 0.0;
    long steps = 0;
    while (t < t_end) {
        if (++steps > cfg.max_steps) throw StepLimitError(cfg.max_steps);
        h = std::min(h, cfg.max_step);
        const bool last = h >= t_end - t;
        if (last) h = t_end - t;
        if (!(h > 0.0) || t + h == t)
            throw StepLimitError(cfg.max_steps);  // step size underflow

        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
        rhs(yt, k2);
        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(yt, k3);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(yt, k4);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(yt, k5);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                a65 * k5[i]);
        rhs(yt, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                  b6 * k6[i]);
        rhs(ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk =
                cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            err = std::max(err, std::abs(ei) / sk);
        }

        if (err <= 1.0) {
            t = last ? t_end : t + h;
            y = ynew;
            k1 = k7;
            observe(t, static_cast<const State&>(y));
            const double factor =
                (err == 0.0) ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
            h *= factor;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
    return y;
}

struct NullObserver {
    template <class... Args>
    void operator()(Args&&...) const {}
};

}  // namespace detail

/// phi_0(t, x0): value at time t of the smooth flow of xdot = h(x).
///
/// The result stays in [0, x_max]; crossing x_max raises EscapeError
/// (interpreted downstream as divergence), tiny negative undershoot from
/// roundoff is clamped to 0.
template <class Observer = detail::NullObserver>
double flow_map(const PolynomialVectorField& vf, double x0, double t,
                const IntegratorConfig& cfg = {}, Observer&& observe = Observer{}) {
    if (!(t >= 0.0)) throw DomainError("flow time must be nonnegative");
    if (!(x0 >= 0.0) || !(x0 <= vf.x_max()))
        throw DomainError("x0 outside [0, x_max]");
    const double cap = vf.x_max();
    auto rhs = [&vf](const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = vf(y[0]);
    };
    auto guard = [cap, &observe](double tt, const std::array<double, 1>& y) {
        if (y[0] > cap) throw EscapeError(y[0], tt);
        observe(tt, y[0]);
    };
    auto y = detail::dopri5<1>(rhs, {x0}, t, cfg, guard);
    return std::max(y[0], 0.0);
}

/// (phi_0(t, x0), y(t)) where y solves the variational equation
/// ydot = h'(phi_0(s, x0)) y, y(0) = 1, so y(t) = d phi_0(t, x0) / d x0.
inline std::pair<double, double> flow_with_variational(const PolynomialVectorField& vf,
                                                       double x0, double t,
                                                       const IntegratorConfig& cfg = {}) {
    if (!(t >= 0.0)) throw DomainError("flow time must be nonnegative");
    if (!(x0 >= 0.0) || !(x0 <= vf.x_max()))
        throw DomainError("x0 outside [0, x_max]");
    const double cap = vf.x_max();
    auto rhs = [&vf](const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = vf(y[0]);
        dy[1] = vf.deriv_unchecked(y[0]) * y[1];
    };
    auto guard = [cap](double tt, const std::array<double, 2>& y) {
        if (y[0] > cap) throw EscapeError(y[0], tt);
    };
    auto y = detail::dopri5<2>(rhs, {x0, 1.0}, t, cfg, guard);
    return {std::max(y[0], 0.0), y[1]};
}

}  // namespace pulsedyn
