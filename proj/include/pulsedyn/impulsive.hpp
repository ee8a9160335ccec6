#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "pulsedyn/errors.hpp"
#include "pulsedyn/integrate.hpp"
#include "pulsedyn/vector_field.hpp"

namespace pulsedyn {

struct JumpRecord {
    double t_k = 0.0;
    double x_before = 0.0;
    double x_after = 0.0;  // (1+lambda) * x_before, exactly
};

enum class TrajectoryFate { completed, escaped_domain };

/// Piecewise-smooth solution of the pulsed system: samples are
/// right-continuous at the pulse times (the value stored at t = T_k is the
/// post-pulse value); the pre-pulse limits live in `jumps`.
struct Trajectory {
    std::vector<std::pair<double, double>> samples;  // (t, x), strictly increasing t
    std::vector<JumpRecord> jumps;
    TrajectoryFate fate = TrajectoryFate::completed;
};

namespace detail {

inline void check_pulse_args(double omega, double lambda, double x0, double x_max) {
    if (!(omega > 0.0)) throw DomainError("omega must be positive");
    if (!(lambda >= -1.0))
        throw DomainError("invalid lambda: pulse strength must satisfy lambda > -1 "
                          "(lambda = -1 accepted as the annihilating boundary case)");
    if (!(x0 >= 0.0) || !(x0 <= x_max)) throw DomainError("x0 outside [0, x_max]");
}

}  // namespace detail

/// Integrates xdot = h(x) on [k*omega, (k+1)*omega) and applies
/// x -> (1+lambda) x at each T_k = k*omega, k = 1..n_pulses. No pulse acts
/// at t = 0. Escape (smooth or post-pulse value above x_max) terminates the
/// trajectory with fate = escaped_domain instead of throwing.
inline Trajectory simulate_impulsive(const PolynomialVectorField& vf, double omega,
                                     double lambda, double x0, int n_pulses,
                                     const IntegratorConfig& cfg = {}) {
    detail::check_pulse_args(omega, lambda, x0, vf.x_max());
    if (n_pulses < 0) throw DomainError("n_pulses must be nonnegative");

    Trajectory traj;
    traj.samples.emplace_back(0.0, x0);
    double x = x0;
    for (int k = 1; k <= n_pulses; ++k) {
        const double t_base = (k - 1) * omega;
        const double t_k = k * omega;
        try {
            x = flow_map(vf, x, omega, cfg, [&](double t_local, double xs) {
                if (t_local < omega) traj.samples.emplace_back(t_base + t_local, xs);
            });
        } catch (const EscapeError& e) {
            traj.samples.emplace_back(t_base + e.t_escape, e.x_escape);
            traj.fate = TrajectoryFate::escaped_domain;
            return traj;
        }
        const double x_after = (1.0 + lambda) * x;
        traj.jumps.push_back({t_k, x, x_after});
        traj.samples.emplace_back(t_k, x_after);
        x = x_after;
        if (x > vf.x_max()) {
            traj.fate = TrajectoryFate::escaped_domain;
            return traj;
        }
    }
    return traj;
}

/// Post-pulse values [phi_lambda(T_1, x0), ..., phi_lambda(T_K, x0)], i.e.
/// the iterates of x -> (1+lambda) R_omega(x). Escape is reported as
/// divergence; `values` then holds the iterates up to and including the
/// escaping one.
struct PulseSequence {
    std::vector<double> values;
    bool diverged = false;
};

inline PulseSequence pulse_sequence(const PolynomialVectorField& vf, double omega,
                                    double lambda, double x0, int K,
                                    const IntegratorConfig& cfg = {}) {
    detail::check_pulse_args(omega, lambda, x0, vf.x_max());
    if (K < 0) throw DomainError("K must be nonnegative");

    PulseSequence seq;
    seq.values.reserve(static_cast<std::size_t>(K));
    double x = x0;
    for (int k = 1; k <= K; ++k) {
        try {
            x = flow_map(vf, x, omega, cfg);
        } catch (const EscapeError& e) {
            seq.values.push_back(e.x_escape);
            seq.diverged = true;
            return seq;
        }
        x *= (1.0 + lambda);
        seq.values.push_back(x);
        if (x > vf.x_max()) {
            seq.diverged = true;
            return seq;
        }
    }
    return seq;
}

}  // namespace pulsedyn
