#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "pulsedyn/errors.hpp"
#include "pulsedyn/impulsive.hpp"
#include "pulsedyn/periodic.hpp"
#include "pulsedyn/strobe_map.hpp"

namespace pulsedyn {

enum class BifurcationKind { saddle_node, transcritical };

struct BifurcationPoint {
    BifurcationKind kind = BifurcationKind::saddle_node;
    double lambda_star = 0.0;
    double x_star = 0.0;
    double omega = 0.0;
};

/// Result of the interior g' root scan. When the numerator R - x R' is flat
/// over a substantial part of the domain (linear field: g' vanishes
/// identically) no isolated saddle-node points exist and the scan is
/// flagged degenerate instead.
struct SaddleNodeScan {
    std::vector<BifurcationPoint> points;
    bool degenerate_plateau = false;
};

/// All x* in (0, x_max) with g'(x*) = 0, i.e. the roots of R - x R', each
/// paired with its critical pulse strength lambda* = g(x*). One-to-one with
/// the interior ratio extrema (m_1 = 0 excluded).
inline SaddleNodeScan saddle_node_points(const StroboscopicAnalyzer& an,
                                         const std::vector<Equilibrium>& equilibria,
                                         int grid_points = 4096) {
    (void)equilibria;  // the scan is global; equilibria fix the expected count in tests
    const double x_max = an.field().x_max();
    const int n = std::max(grid_points, 16);
    const double cell = x_max / static_cast<double>(n - 1);

    SaddleNodeScan scan;
    auto num = [&](double x) { return an.g_prime_numerator(x); };

    int flat_nodes = 0;
    double prev_x = cell;
    double prev_v = num(prev_x);
    for (int i = 2; i < n; ++i) {
        const double x = (i == n - 1) ? x_max : i * cell;
        const double v = num(x);
        if (std::abs(v) < 1e-8 * std::max(1.0, x)) ++flat_nodes;
        if (prev_v != 0.0 && v != 0.0 && (prev_v < 0.0) != (v < 0.0)) {
            const double x_star = detail::bisect(num, prev_x, x, prev_v, 1e-12);
            scan.points.push_back({BifurcationKind::saddle_node, an.g(x_star), x_star,
                                   an.omega()});
        }
        prev_x = x;
        prev_v = v;
    }
    if (flat_nodes > (n - 2) / 4) {
        scan.degenerate_plateau = true;
        scan.points.clear();
    }
    return scan;
}

/// lambda* = exp(-A omega) - 1, where the origin exchanges stability with
/// the nontrivial branch. Requires the canonical orientation A < 0.
inline BifurcationPoint transcritical_lambda(const StroboscopicAnalyzer& an) {
    const double A = an.field().linear_part();
    if (!(A < 0.0))
        throw PreconditionError("transcritical value requires A = dh(0) < 0");
    return {BifurcationKind::transcritical, std::expm1(-A * an.omega()), 0.0, an.omega()};
}

struct RegimeRow {
    double lambda_lo = 0.0;  // open interval bounds (-1 on the left edge)
    double lambda_hi = 0.0;  // +inf encoded as infinity on the right edge
    double probe = 0.0;      // lambda value the row was evaluated at
    std::vector<PeriodicOrbit> orbits;
    int count() const { return static_cast<int>(orbits.size()); }
    std::vector<Stability> signature() const {
        std::vector<Stability> s;
        for (const auto& o : orbits) s.push_back(o.stability);
        return s;
    }
};

/// Table-1 analogue: the critical pulse strengths partition (-1, inf) and
/// each open interval is characterized by the orbit set at an interior
/// probe.
struct RegimeTable {
    std::vector<double> criticals;  // sorted saddle-node lambda* plus transcritical
    std::vector<RegimeRow> rows;
};

inline RegimeTable regime_table(const StroboscopicAnalyzer& an,
                                const std::vector<Equilibrium>& equilibria,
                                const OrbitSearchParams& params = {}) {
    RegimeTable table;
    auto scan = saddle_node_points(an, equilibria, params.grid_points);
    for (const auto& p : scan.points) table.criticals.push_back(p.lambda_star);
    table.criticals.push_back(transcritical_lambda(an).lambda_star);
    std::sort(table.criticals.begin(), table.criticals.end());
    table.criticals.erase(std::unique(table.criticals.begin(), table.criticals.end(),
                                      [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                          table.criticals.end());

    std::vector<double> probes;
    probes.push_back((-1.0 + table.criticals.front()) / 2.0);
    for (std::size_t i = 0; i + 1 < table.criticals.size(); ++i)
        probes.push_back(0.5 * (table.criticals[i] + table.criticals[i + 1]));
    probes.push_back(table.criticals.back() + 1.0);

    for (std::size_t i = 0; i < probes.size(); ++i) {
        RegimeRow row;
        row.lambda_lo = (i == 0) ? -1.0 : table.criticals[i - 1];
        row.lambda_hi = (i == probes.size() - 1) ? std::numeric_limits<double>::infinity()
                                                 : table.criticals[i];
        row.probe = probes[i];
        row.orbits = find_periodic_orbits(an, probes[i], params);
        table.rows.push_back(std::move(row));
    }
    return table;
}

struct SweepPoint {
    double lambda = 0.0;
    double x0 = 0.0;
    Stability stability = Stability::degenerate;
};

/// Orbit sets over a uniform lambda grid (the data behind the fan of
/// ell-lines in the paper's intersection picture).
struct SweepDiagram {
    std::vector<SweepPoint> points;  // sorted by (lambda, x0)
};

inline SweepDiagram lambda_sweep(const StroboscopicAnalyzer& an, double lambda_min,
                                 double lambda_max, int n_points,
                                 const OrbitSearchParams& params = {}) {
    if (!(lambda_min > -1.0) || !(lambda_max > lambda_min))
        throw DomainError("need -1 < lambda_min < lambda_max");
    if (n_points < 2) throw DomainError("n_points must be at least 2");
    SweepDiagram diag;
    for (int i = 0; i < n_points; ++i) {
        const double lam =
            lambda_min + (lambda_max - lambda_min) * i / static_cast<double>(n_points - 1);
        for (const auto& o : find_periodic_orbits(an, lam, params))
            diag.points.push_back({lam, o.x0, o.stability});
    }
    return diag;
}

enum class ScanFate { not_determined, converges_to_zero, diverges, inconclusive };

inline const char* to_string(ScanFate f) {
    switch (f) {
        case ScanFate::converges_to_zero: return "converges_to_zero";
        case ScanFate::diverges: return "diverges";
        case ScanFate::inconclusive: return "inconclusive";
        default: return "not_determined";
    }
}

struct OmegaScanRow {
    double omega = 0.0;
    bool orbit_present = false;
    double x_tracked = std::numeric_limits<double>::quiet_NaN();
    bool tracking_uncertain = false;  // nearest root just outside the window
};

struct OmegaScanReport {
    double lambda = 0.0;
    double x_ref = 0.0;
    std::vector<OmegaScanRow> rows;
    std::optional<double> omega2;  // first grid omega with no tracked orbit
    ScanFate fate = ScanFate::not_determined;
    double fate_final_value = std::numeric_limits<double>::quiet_NaN();
    int fate_pulses = 0;
};

inline std::vector<double> geometric_omega_grid(double omega1, double ratio = 0.9,
                                                double min_fraction = 1e-3) {
    if (!(omega1 > 0.0) || !(ratio > 0.0) || !(ratio < 1.0) || !(min_fraction > 0.0))
        throw DomainError("bad omega grid parameters");
    std::vector<double> grid;
    for (double w = omega1; w >= omega1 * min_fraction; w *= ratio) grid.push_back(w);
    return grid;
}

/// Corollary-1 scan: follow the periodic orbit seeded near x_ref while
/// omega decreases along the grid, find the first omega with no orbit left
/// in the tracking window, and classify the fate of the trajectory from
/// x_ref at that omega by direct simulation.
inline OmegaScanReport omega_scan(const PolynomialVectorField& vf, double lambda,
                                  double x_ref, const std::vector<double>& omega_grid,
                                  const IntegratorConfig& cfg = {},
                                  const OrbitSearchParams& params = {},
                                  int max_fate_pulses = 500, double zero_tol = 1e-4) {
    if (lambda == 0.0)
        throw PreconditionError("omega scan requires lambda != 0 (lambda = 0 has no pulses)");
    if (!(lambda > -1.0)) throw DomainError("lambda must exceed -1");
    if (omega_grid.empty()) throw DomainError("empty omega grid");
    for (std::size_t i = 1; i < omega_grid.size(); ++i)
        if (!(omega_grid[i] < omega_grid[i - 1]))
            throw DomainError("omega grid must be strictly decreasing");

    OmegaScanReport rep;
    rep.lambda = lambda;
    rep.x_ref = x_ref;

    auto positive_roots = [&](const std::vector<PeriodicOrbit>& orbits) {
        std::vector<double> r;
        for (const auto& o : orbits)
            if (o.x0 > 1e-9) r.push_back(o.x0);
        return r;
    };

    // precondition: x_ref seeds an orbit at omega_grid[0]
    StroboscopicAnalyzer an0(vf, omega_grid.front(), cfg);
    const double res0 = std::abs((1.0 + lambda) * an0.r_omega(x_ref) - x_ref);
    if (!(x_ref > 0.0) || res0 > 1e-6 * std::max(1.0, x_ref))
        throw PreconditionError("x_ref does not seed a periodic orbit at omega_grid[0] "
                                "(residual " + std::to_string(res0) + ")");

    auto orbits0 = find_periodic_orbits(an0, lambda, params);
    double x_t = x_ref;
    double window = 0.25 * x_ref;
    {
        double gap = std::numeric_limits<double>::infinity();
        for (const auto& o : orbits0)
            if (std::abs(o.x0 - x_t) > 1e-9)
                gap = std::min(gap, std::abs(o.x0 - x_t));
        if (std::isfinite(gap)) window = 0.25 * gap;
    }
    rep.rows.push_back({omega_grid.front(), true, x_t, false});

    bool lost = false;
    for (std::size_t i = 1; i < omega_grid.size(); ++i) {
        const double w = omega_grid[i];
        StroboscopicAnalyzer an(vf, w, cfg);
        auto orbits = find_periodic_orbits(an, lambda, params);
        auto roots = positive_roots(orbits);

        OmegaScanRow row;
        row.omega = w;
        double nearest = std::numeric_limits<double>::infinity();
        double nearest_x = 0.0;
        for (double r : roots) {
            if (std::abs(r - x_t) < nearest) {
                nearest = std::abs(r - x_t);
                nearest_x = r;
            }
        }
        if (!lost && nearest <= window) {
            row.orbit_present = true;
            row.x_tracked = nearest_x;
            x_t = nearest_x;
            double gap = std::numeric_limits<double>::infinity();
            for (const auto& o : orbits)
                if (std::abs(o.x0 - x_t) > 1e-9) gap = std::min(gap, std::abs(o.x0 - x_t));
            if (std::isfinite(gap)) window = 0.25 * gap;
        } else {
            row.orbit_present = false;
            row.tracking_uncertain = !lost && nearest <= 2.0 * window;
            if (!lost) {
                lost = true;
                rep.omega2 = w;
            }
        }
        rep.rows.push_back(row);
    }

    if (rep.omega2) {
        auto seq = pulse_sequence(vf, *rep.omega2, lambda, x_ref, max_fate_pulses, cfg);
        rep.fate_pulses = static_cast<int>(seq.values.size());
        rep.fate_final_value = seq.values.empty() ? x_ref : seq.values.back();
        if (seq.diverged)
            rep.fate = ScanFate::diverges;
        else if (rep.fate_final_value < zero_tol)
            rep.fate = ScanFate::converges_to_zero;
        else
            rep.fate = ScanFate::inconclusive;
    }
    return rep;
}

}  // namespace pulsedyn
