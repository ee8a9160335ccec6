#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pulsedyn/errors.hpp"
#include "pulsedyn/integrate.hpp"
#include "pulsedyn/vector_field.hpp"

namespace pulsedyn {

namespace detail {

/// Golden-section minimization of f on [a, b] down to an x-interval of
/// width x_tol. Assumes a single interior minimum (P5); returns the final
/// bracket midpoint.
template <class F>
double golden_min(F&& f, double a, double b, double x_tol) {
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > x_tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

/// Memoized access to the time-omega map R_omega of the smooth system and
/// its x-derivative (computed together via the variational equation), plus
/// the auxiliary map g(x) = x / R_omega(x) - 1.
///
/// Queries are quantized to a 1e-12 grid before integration, so a cached
/// value is a pure function of its key and results do not depend on the
/// order sweeps fill the cache. Safe for concurrent use.
class StroboscopicAnalyzer {
public:
    StroboscopicAnalyzer(PolynomialVectorField vf, double omega, IntegratorConfig cfg = {})
        : vf_(std::move(vf)), omega_(omega), cfg_(cfg) {
        if (!(omega_ > 0.0)) throw DomainError("omega must be positive");
    }

    const PolynomialVectorField& field() const { return vf_; }
    double omega() const { return omega_; }
    const IntegratorConfig& integrator() const { return cfg_; }

    /// R_omega(x) = phi_0(omega, x). Strictly increasing, fixes equilibria.
    double r_omega(double x) const { return eval(x).first; }

    /// dR_omega/dx from the variational equation; strictly positive.
    double r_omega_prime(double x) const { return eval(x).second; }

    /// g(x) = x/R_omega(x) - 1 for x > 0; the continuity value
    /// exp(-A omega) - 1 at x = 0.
    double g(double x) const {
        if (x == 0.0) return std::expm1(-vf_.linear_part() * omega_);
        return x / r_omega(x) - 1.0;
    }

    /// g'(x) = (R - x R') / R^2; undefined at x = 0.
    double g_prime(double x) const {
        if (!(x > 0.0)) throw DomainError("g' is undefined at x = 0");
        const auto [r, rp] = eval(x);
        return (r - x * rp) / (r * r);
    }

    /// R_omega(x)/x, extended by its limit exp(A omega) at x = 0.
    double ratio(double x) const {
        if (x == 0.0) return std::exp(vf_.linear_part() * omega_);
        return r_omega(x) / x;
    }

    /// Numerator of g' (Eq. for the extremum condition R' = R/x); its zeros
    /// are the interior extrema of the ratio and the saddle-node seeds.
    double g_prime_numerator(double x) const {
        const auto [r, rp] = eval(x);
        return r - x * rp;
    }

    std::pair<double, double> eval(double x) const {
        if (!(x >= 0.0) || !(x <= vf_.x_max()))
            throw DomainError("x outside [0, x_max]");
        if (x == 0.0) return {0.0, std::exp(vf_.linear_part() * omega_)};
        const std::int64_t key = static_cast<std::int64_t>(std::llround(x / kQuantum));
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        const double xq = static_cast<double>(key) * kQuantum;
        const auto value = flow_with_variational(vf_, xq, omega_, cfg_);
        {
            std::lock_guard<std::mutex> lock(mu_);
            cache_.emplace(key, value);
        }
        return value;
    }

private:
    static constexpr double kQuantum = 1e-12;

    PolynomialVectorField vf_;
    double omega_;
    IntegratorConfig cfg_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::int64_t, std::pair<double, double>> cache_;
};

/// Envelope data of one interval [X_j^s, X_{j+1}^s]: the extreme values
/// beta_j <= 1 <= gamma_j of R_omega(x)/x and their (unique, by P5)
/// argument pair (m_j, M_j). The last interval is truncated at x_max and
/// its boundary value carries no envelope claim.
struct IntervalBounds {
    int j = 0;
    double m = 0.0;
    double M = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    bool m_at_boundary = false;
    bool M_at_boundary = false;
    bool truncated = false;   // [X_n^s, x_max] stand-in for the unbounded interval
    bool p5_violation = false;  // plateau or multiple extrema detected
};

namespace detail {

struct RatioExtremum {
    double x = 0.0;
    double value = 0.0;
    bool at_boundary = false;
    bool plateau = false;
};

/// Locate one extremum of the ratio on [lo, hi]: grid argscan, golden
/// refinement, then a bisection polish on the extremum condition
/// R - x R' = 0 (which is transversal where the ratio extremum is only
/// quadratic, so the polished location is far more accurate than the
/// argmax of the slightly noisy ratio landscape).
inline RatioExtremum locate_ratio_extremum(const StroboscopicAnalyzer& an, double lo,
                                           double hi, bool maximize, int grid_points) {
    const int n = std::max(grid_points, 16);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    std::vector<double> xs(n), vals(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = (i == n - 1) ? hi : lo + i * step;
        vals[i] = an.ratio(xs[i]);
    }
    const double sign = maximize ? -1.0 : 1.0;
    int best = 0;
    for (int i = 1; i < n; ++i)
        if (sign * vals[i] < sign * vals[best]) best = i;

    RatioExtremum ext;
    if (best == 0 || best == n - 1) {
        ext.x = xs[best];
        ext.value = vals[best];
        ext.at_boundary = true;
    } else {
        auto f = [&](double x) { return sign * an.ratio(x); };
        double x_star = golden_min(f, xs[best - 1], xs[best + 1], 1e-10);
        // polish on the extremum condition when it brackets
        const double num_lo = an.g_prime_numerator(xs[best - 1]);
        const double num_hi = an.g_prime_numerator(xs[best + 1]);
        if (num_lo != 0.0 && num_hi != 0.0 && (num_lo < 0.0) != (num_hi < 0.0)) {
            x_star = detail::bisect([&](double x) { return an.g_prime_numerator(x); },
                                    xs[best - 1], xs[best + 1], num_lo, 1e-12);
        }
        ext.x = x_star;
        ext.value = an.ratio(x_star);
    }

    // plateau / multiplicity scan: near-extremal values far from the arg
    const double spread = 1e-9 * std::max(1.0, std::abs(ext.value));
    for (int i = 0; i < n; ++i) {
        if (std::abs(i - best) <= 3) continue;
        if (sign * vals[i] <= sign * ext.value + spread) {
            ext.plateau = true;
            break;
        }
    }
    return ext;
}

inline std::vector<double> stable_locations(const std::vector<Equilibrium>& eq) {
    std::vector<double> s;
    for (const auto& e : eq)
        if (e.kind == EquilibriumKind::stable) s.push_back(e.location);
    return s;
}

inline std::vector<double> unstable_locations(const std::vector<Equilibrium>& eq) {
    std::vector<double> u;
    for (const auto& e : eq)
        if (e.kind == EquilibriumKind::unstable) u.push_back(e.location);
    return u;
}

}  // namespace detail

/// Minimizer/maximizer of R_omega(x)/x over interval j (1-based; stable
/// equilibrium j to stable equilibrium j+1, the last interval truncated at
/// x_max). The ratio at x = 0 is the limit exp(A omega), so m_1 = 0 comes
/// out of the same argscan instead of being special-cased.
inline IntervalBounds interval_bounds(const StroboscopicAnalyzer& an, int j,
                                      const std::vector<Equilibrium>& equilibria,
                                      int grid_points = 4096) {
    const auto stable = detail::stable_locations(equilibria);
    const int n = static_cast<int>(stable.size());
    if (n == 0) throw PreconditionError("no stable equilibria");
    if (j < 1 || j > n) throw DomainError("interval index out of range");

    const double lo = stable[static_cast<std::size_t>(j - 1)];
    const double hi = (j < n) ? stable[static_cast<std::size_t>(j)] : an.field().x_max();
    if (!(hi > lo)) throw PreconditionError("degenerate interval");

    IntervalBounds b;
    b.j = j;
    b.truncated = (j == n);
    auto mn = detail::locate_ratio_extremum(an, lo, hi, /*maximize=*/false, grid_points);
    auto mx = detail::locate_ratio_extremum(an, lo, hi, /*maximize=*/true, grid_points);
    b.m = mn.x;
    b.beta = mn.value;
    b.m_at_boundary = mn.at_boundary;
    b.M = mx.x;
    b.gamma = mx.value;
    b.M_at_boundary = mx.at_boundary;
    b.p5_violation = mn.plateau || mx.plateau;

    // exact limit value at the origin endpoint
    if (b.m_at_boundary && b.m == 0.0) b.beta = std::exp(an.field().linear_part() * an.omega());
    return b;
}

/// Shape diagnostics for one interval between consecutive stable equilibria.
struct ShapeIntervalCheck {
    int j = 0;
    bool truncated = false;
    bool convex_ok = true;        // R convex on (X_j^s, X_j^u)
    bool concave_ok = true;       // R concave on (X_j^u, X_{j+1}^s)
    bool p5_unique = true;
    bool sign_pattern_ok = true;  // Lemma-5.4 sign of R' - R/x
    IntervalBounds bounds;
};

struct ShapeReport {
    std::vector<ShapeIntervalCheck> intervals;
    bool p4_ok() const {
        return std::all_of(intervals.begin(), intervals.end(), [](const ShapeIntervalCheck& c) {
            return c.truncated || (c.convex_ok && c.concave_ok);
        });
    }
    bool p5_ok() const {
        return std::all_of(intervals.begin(), intervals.end(),
                           [](const ShapeIntervalCheck& c) { return c.p5_unique; });
    }
    bool sign_pattern_ok() const {
        return std::all_of(intervals.begin(), intervals.end(), [](const ShapeIntervalCheck& c) {
            return c.truncated || c.sign_pattern_ok;
        });
    }
    bool ok() const { return p4_ok() && p5_ok() && sign_pattern_ok(); }
};

namespace detail {

/// Second-difference convexity scan on (a, b), strict interior.
inline bool curvature_sign_ok(const StroboscopicAnalyzer& an, double a, double b,
                              bool want_convex, int samples = 96) {
    const double margin = (b - a) * 1e-3;
    a += margin;
    b -= margin;
    const double h = (b - a) / static_cast<double>(samples + 1);
    double r_prev = an.r_omega(a);
    double r_mid = an.r_omega(a + h);
    const double tol = 1e-8;
    for (int i = 0; i < samples; ++i) {
        const double r_next = an.r_omega(a + (i + 2) * h);
        const double d2 = r_next - 2.0 * r_mid + r_prev;
        if (want_convex ? (d2 < -tol) : (d2 > tol)) return false;
        r_prev = r_mid;
        r_mid = r_next;
    }
    return true;
}

/// Sign of D = R' - R/x on (a, b), excluding a small margin at each end
/// (the endpoints are the zeros m_j, M_j of D).
inline bool derivative_gap_sign_ok(const StroboscopicAnalyzer& an, double a, double b,
                                   bool want_positive, int samples = 48) {
    if (!(b > a)) return true;
    const double margin = std::max((b - a) * 0.02, 1e-6);
    a += margin;
    b -= margin;
    if (!(b > a)) return true;
    const double h = (b - a) / static_cast<double>(samples - 1);
    for (int i = 0; i < samples; ++i) {
        const double x = a + i * h;
        if (x <= 0.0) continue;
        const double d = an.r_omega_prime(x) - an.ratio(x);
        const double tol = 1e-7 * std::max(1.0, std::abs(an.r_omega_prime(x)));
        if (want_positive ? (d < -tol) : (d > tol)) return false;
    }
    return true;
}

}  // namespace detail

/// P4 (convex/concave pattern of R_omega), P5 (unique ratio extrema) and
/// the Lemma-5.4 sign pattern of R' - R/x, all evaluated on grids.
/// Violations are reported, never thrown: downstream consumers warn and
/// proceed.
inline ShapeReport check_shape_hypotheses(const StroboscopicAnalyzer& an,
                                          const std::vector<Equilibrium>& equilibria,
                                          int grid_points = 2048) {
    const auto stable = detail::stable_locations(equilibria);
    const auto unstable = detail::unstable_locations(equilibria);
    const int n = static_cast<int>(stable.size());

    ShapeReport rep;
    std::vector<IntervalBounds> bounds;
    for (int j = 1; j <= n; ++j)
        bounds.push_back(interval_bounds(an, j, equilibria, grid_points));

    for (int j = 1; j <= n; ++j) {
        ShapeIntervalCheck c;
        c.j = j;
        c.bounds = bounds[static_cast<std::size_t>(j - 1)];
        c.truncated = c.bounds.truncated;
        c.p5_unique = !c.bounds.p5_violation;
        if (!c.truncated) {
            const double s_lo = stable[static_cast<std::size_t>(j - 1)];
            const double u = unstable[static_cast<std::size_t>(j - 1)];
            const double s_hi = stable[static_cast<std::size_t>(j)];
            c.convex_ok = detail::curvature_sign_ok(an, s_lo, u, /*want_convex=*/true);
            c.concave_ok = detail::curvature_sign_ok(an, u, s_hi, /*want_convex=*/false);
            // R' > R/x between m_j and M_j, R' < R/x between M_j and m_{j+1}
            const auto& bnd = c.bounds;
            const double m_next = bounds[static_cast<std::size_t>(j)].m;
            c.sign_pattern_ok =
                detail::derivative_gap_sign_ok(an, bnd.m, bnd.M, /*want_positive=*/true) &&
                detail::derivative_gap_sign_ok(an, bnd.M, m_next, /*want_positive=*/false);
        }
        rep.intervals.push_back(std::move(c));
    }
    return rep;
}

}  // namespace pulsedyn
