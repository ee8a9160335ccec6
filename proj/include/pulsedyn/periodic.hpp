#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "pulsedyn/errors.hpp"
#include "pulsedyn/impulsive.hpp"
#include "pulsedyn/strobe_map.hpp"

namespace pulsedyn {

enum class Stability { asymptotically_stable, unstable, degenerate };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::asymptotically_stable: return "stable";
        case Stability::unstable: return "unstable";
        default: return "degenerate";
    }
}

/// Seed of an omega-periodic solution of the pulsed system: a fixed point
/// of x -> (1+lambda) R_omega(x). The origin is always present; its
/// stability comes from the multiplier (1+lambda) exp(A omega) and its
/// g_prime_value is NaN (g' is undefined at 0).
struct PeriodicOrbit {
    double x0 = 0.0;
    double omega = 0.0;
    double lambda = 0.0;
    Stability stability = Stability::degenerate;
    double residual = 0.0;       // |(1+lambda) R(x0) - x0|
    double g_prime_value = 0.0;  // NaN for the origin
    bool tangential = false;     // found by the tangency sweep, no sign change
    bool near_domain_cap = false;
};

struct OrbitSearchParams {
    int grid_points = 4096;
    double x_tol = 1e-12;         // bisection width for transversal roots
    double tangency_tol = 1e-9;   // |F| at an F' zero below this => degenerate orbit
    double degeneracy_band = 1e-8;  // |g'| (or |multiplier-1|) below this => degenerate
};

namespace detail {

inline Stability classify_origin(const StroboscopicAnalyzer& an, double lambda,
                                 double band) {
    const double mult = (1.0 + lambda) * std::exp(an.field().linear_part() * an.omega());
    if (mult < 1.0 - band) return Stability::asymptotically_stable;
    if (mult > 1.0 + band) return Stability::unstable;
    return Stability::degenerate;
}

inline Stability classify_interior(const StroboscopicAnalyzer& an, double x0, double band) {
    const double gp = an.g_prime(x0);
    if (gp > band) return Stability::asymptotically_stable;
    if (gp < -band) return Stability::unstable;
    return Stability::degenerate;
}

}  // namespace detail

/// lambda = g(x0): the pulse strength for which x0 seeds an omega-periodic
/// solution (Theorem-A construction).
inline double lambda_for_initial_condition(const StroboscopicAnalyzer& an, double x0) {
    if (!(x0 > 0.0) || !(x0 <= an.field().x_max()))
        throw DomainError("x0 must lie in (0, x_max]");
    return an.g(x0);
}

/// Stability of a known fixed point of (1+lambda) R_omega. The point must
/// satisfy the fixed-point identity within fp_tol; the origin is handled
/// through its exact multiplier since g' does not extend to 0.
inline Stability classify(const StroboscopicAnalyzer& an, double x0, double lambda,
                          double fp_tol = 1e-8, double degeneracy_band = 1e-8) {
    if (!(lambda > -1.0)) throw DomainError("lambda must exceed -1");
    if (x0 == 0.0) return detail::classify_origin(an, lambda, degeneracy_band);
    const double residual = std::abs((1.0 + lambda) * an.r_omega(x0) - x0);
    if (residual > fp_tol * std::max(1.0, std::abs(x0)))
        throw NotAFixedPointError("x0 is not a fixed point of (1+lambda) R (residual " +
                                  std::to_string(residual) + ")");
    return detail::classify_interior(an, x0, degeneracy_band);
}

/// All omega-periodic orbit seeds for the given pulse strength: roots of
/// F(x) = (1+lambda) R_omega(x) - x on [0, x_max], ordered increasing,
/// always including the origin.
///
/// Roots are bracketed by sign changes of F on a uniform grid (the sign at
/// x = 0, where F vanishes identically, is taken from F'(0+) so that the
/// tiny root that splits off the origin near the transcritical value is
/// still bracketed). Cells where F' changes sign get special treatment:
/// either they hide an unresolved root pair (F at the interior extremum has
/// the opposite sign to the cell edges) or, when |F| at the extremum is
/// below tangency_tol, a saddle-node tangency reported as a degenerate
/// orbit.
inline std::vector<PeriodicOrbit> find_periodic_orbits(const StroboscopicAnalyzer& an,
                                                       double lambda,
                                                       const OrbitSearchParams& params = {}) {
    if (!(lambda > -1.0)) throw DomainError("lambda must exceed -1");
    const double x_max = an.field().x_max();
    const int n = std::max(params.grid_points, 16);
    const double cell = x_max / static_cast<double>(n - 1);
    const double one_plus = 1.0 + lambda;

    auto F = [&](double x) { return one_plus * an.r_omega(x) - x; };
    auto Fp = [&](double x) { return one_plus * an.r_omega_prime(x) - 1.0; };

    std::vector<double> xs(static_cast<std::size_t>(n)), f(static_cast<std::size_t>(n)),
        fp(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = (i == n - 1) ? x_max : i * cell;
        xs[static_cast<std::size_t>(i)] = x;
        const auto [r, rp] = an.eval(x);
        f[static_cast<std::size_t>(i)] = one_plus * r - x;
        fp[static_cast<std::size_t>(i)] = one_plus * rp - 1.0;
    }
    // F(0) = 0 identically; use the slope as the sign carrier for cell 0.
    f[0] = 0.0;
    const double slope0 = one_plus * std::exp(an.field().linear_part() * an.omega()) - 1.0;

    std::vector<double> roots;
    std::vector<double> tangent_roots;
    auto sign_at = [&](int i) { return i == 0 ? slope0 : f[static_cast<std::size_t>(i)]; };

    for (int i = 0; i + 1 < n; ++i) {
        const double fa = sign_at(i);
        const double fb = sign_at(i + 1);
        const double a = (i == 0) ? params.x_tol : xs[static_cast<std::size_t>(i)];
        const double b = xs[static_cast<std::size_t>(i + 1)];
        const bool crossing = fa != 0.0 && fb != 0.0 && (fa < 0.0) != (fb < 0.0);
        const double pa = fp[static_cast<std::size_t>(i)];
        const double pb = fp[static_cast<std::size_t>(i + 1)];
        const bool extremum = pa != 0.0 && pb != 0.0 && (pa < 0.0) != (pb < 0.0);

        if (extremum && i > 0) {
            const double xe = detail::bisect(Fp, a, b, pa, params.x_tol);
            const double fe = F(xe);
            if (fe != 0.0 && (fe < 0.0) != (fa < 0.0)) {
                // the extremum flips sign inside the cell: roots on both flanks
                roots.push_back(detail::bisect(F, a, xe, fa, params.x_tol));
                if ((fe < 0.0) != (fb < 0.0))
                    roots.push_back(detail::bisect(F, xe, b, fe, params.x_tol));
                continue;
            }
            if (std::abs(fe) < params.tangency_tol && !crossing) {
                tangent_roots.push_back(xe);
                continue;
            }
        }
        if (crossing) roots.push_back(detail::bisect(F, a, b, fa, params.x_tol));
    }

    std::vector<PeriodicOrbit> orbits;
    auto push = [&](double x0, bool tangential) {
        PeriodicOrbit o;
        o.x0 = x0;
        o.omega = an.omega();
        o.lambda = lambda;
        o.residual = std::abs(one_plus * an.r_omega(x0) - x0);
        if (x0 == 0.0) {
            o.g_prime_value = std::numeric_limits<double>::quiet_NaN();
            o.stability = detail::classify_origin(an, lambda, params.degeneracy_band);
        } else {
            o.g_prime_value = an.g_prime(x0);
            o.stability = tangential ? Stability::degenerate
                                     : detail::classify_interior(an, x0, params.degeneracy_band);
        }
        o.tangential = tangential;
        o.near_domain_cap = x0 > x_max - cell;
        orbits.push_back(o);
    };

    push(0.0, false);
    std::sort(roots.begin(), roots.end());
    for (double r : roots) {
        if (!orbits.empty() && r - orbits.back().x0 < 1e-9 * std::max(1.0, r)) continue;
        push(r, false);
    }
    for (double r : tangent_roots) {
        const bool dup = std::any_of(orbits.begin(), orbits.end(), [&](const PeriodicOrbit& o) {
            return std::abs(o.x0 - r) < 1e-7 * std::max(1.0, r);
        });
        if (!dup) push(r, true);
    }
    std::sort(orbits.begin(), orbits.end(),
              [](const PeriodicOrbit& a, const PeriodicOrbit& b) { return a.x0 < b.x0; });
    return orbits;
}

/// Outcome of one perturbation probe of verify_orbit.
struct ProbeResult {
    enum class Outcome { not_run, converged, exited, inconclusive };
    Outcome outcome = Outcome::not_run;
    double initial_dist = 0.0;
    double final_dist = 0.0;
    bool escaped = false;          // left [0, x_max]; counts as moved-away evidence
    bool distances_monotone = true;
};

/// Simulation-based cross-check of one orbit (Theorem A vs. brute force):
/// the return residual of the orbit itself plus the fate of the two
/// stroboscopic sequences started at x0 +- eps.
struct VerificationReport {
    double return_residual = 0.0;
    ProbeResult lower;
    ProbeResult upper;

    bool agrees_with(Stability s) const {
        auto ran = [](const ProbeResult& p) { return p.outcome != ProbeResult::Outcome::not_run; };
        auto all_probes = [&](ProbeResult::Outcome want) {
            bool any = false;
            for (const ProbeResult* p : {&lower, &upper}) {
                if (!ran(*p)) continue;
                any = true;
                if (p->outcome != want) return false;
            }
            return any;
        };
        if (s == Stability::asymptotically_stable)
            return all_probes(ProbeResult::Outcome::converged);
        if (s == Stability::unstable) return all_probes(ProbeResult::Outcome::exited);
        return false;
    }

    /// Worst final/initial distance ratio over the probes that ran.
    double contraction() const {
        double c = 0.0;
        for (const ProbeResult* p : {&lower, &upper})
            if (p->outcome != ProbeResult::Outcome::not_run && p->initial_dist > 0.0)
                c = std::max(c, p->final_dist / p->initial_dist);
        return c;
    }
};

inline VerificationReport verify_orbit(const StroboscopicAnalyzer& an,
                                       const PeriodicOrbit& orbit, int n_pulses,
                                       double eps) {
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    const auto& vf = an.field();
    VerificationReport rep;

    {
        auto seq = pulse_sequence(vf, orbit.omega, orbit.lambda, orbit.x0, n_pulses,
                                  an.integrator());
        for (double v : seq.values)
            rep.return_residual = std::max(rep.return_residual, std::abs(v - orbit.x0));
    }

    auto run_probe = [&](double start) {
        ProbeResult p;
        if (start < 0.0 || start > vf.x_max() || start == orbit.x0) return p;
        p.initial_dist = std::abs(start - orbit.x0);
        auto seq = pulse_sequence(vf, orbit.omega, orbit.lambda, start, n_pulses,
                                  an.integrator());
        p.escaped = seq.diverged;
        double prev = p.initial_dist;
        bool exited = seq.diverged;
        for (double v : seq.values) {
            const double d = std::abs(v - orbit.x0);
            if (d > prev + 1e-12) p.distances_monotone = false;
            if (d > eps * (1.0 + 1e-9)) exited = true;
            prev = d;
        }
        p.final_dist = seq.values.empty() ? p.initial_dist : std::abs(seq.values.back() - orbit.x0);
        if (exited)
            p.outcome = ProbeResult::Outcome::exited;
        else if (p.final_dist <= 0.5 * p.initial_dist)
            p.outcome = ProbeResult::Outcome::converged;
        else
            p.outcome = ProbeResult::Outcome::inconclusive;
        return p;
    };
    rep.lower = run_probe(orbit.x0 - eps);
    rep.upper = run_probe(orbit.x0 + eps);
    return rep;
}

/// 0.1x the gap to the nearest other orbit: a perturbation within this stays
/// inside the monotone bracket of Proposition 4.1.
inline double suggest_probe_eps(const std::vector<PeriodicOrbit>& orbits, std::size_t index,
                                double fallback = 1e-3) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < orbits.size(); ++i)
        if (i != index) gap = std::min(gap, std::abs(orbits[i].x0 - orbits[index].x0));
    if (!std::isfinite(gap)) return fallback;
    return std::min(fallback, 0.1 * gap);
}

}  // namespace pulsedyn
