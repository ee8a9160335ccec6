#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pulsedyn/errors.hpp"

namespace pulsedyn {

/// Scalar autonomous right-hand side h(x) = sum_i c_i x^i on [0, x_max].
///
/// Construction only enforces structural sanity (finite coefficients, a
/// positive domain cap); the modelling hypotheses h(0)=0, h'(0)!=0, deg>=2
/// are checked separately by validate_hypotheses() so that degenerate
/// fields (pure linear decay, shifted polynomials) remain usable as test
/// oracles.
class PolynomialVectorField {
public:
    PolynomialVectorField(std::vector<double> coefficients, double x_max)
        : coeffs_(std::move(coefficients)), x_max_(x_max) {
        if (coeffs_.empty())
            throw DomainError("vector field needs at least one coefficient");
        for (double c : coeffs_)
            if (!std::isfinite(c)) throw DomainError("non-finite coefficient");
        if (!(x_max_ > 0.0) || !std::isfinite(x_max_))
            throw DomainError("x_max must be positive and finite");
    }

    /// Horner evaluation without a domain check; used inside integrators
    /// where transient overshoot past x_max is handled by the caller.
    double operator()(double x) const {
        double acc = 0.0;
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }

    double eval(double x) const {
        require_in_domain(x);
        return (*this)(x);
    }

    /// Exact polynomial derivative h'(x).
    double deriv(double x) const {
        require_in_domain(x);
        return deriv_unchecked(x);
    }

    double deriv_unchecked(double x) const {
        double acc = 0.0;
        for (std::size_t i = coeffs_.size(); i-- > 1;)
            acc = acc * x + static_cast<double>(i) * coeffs_[i];
        return acc;
    }

    /// A = h'(0), the linear part at the origin.
    double linear_part() const { return coeffs_.size() > 1 ? coeffs_[1] : 0.0; }

    int degree() const {
        for (std::size_t i = coeffs_.size(); i-- > 0;)
            if (coeffs_[i] != 0.0) return static_cast<int>(i);
        return 0;
    }

    bool has_nonlinear_part() const {
        for (std::size_t i = 2; i < coeffs_.size(); ++i)
            if (coeffs_[i] != 0.0) return true;
        return false;
    }

    const std::vector<double>& coeffs() const { return coeffs_; }
    double x_max() const { return x_max_; }

private:
    void require_in_domain(double x) const {
        if (!(x >= 0.0) || !(x <= x_max_))
            throw DomainError("x=" + std::to_string(x) + " outside [0, x_max]");
    }

    std::vector<double> coeffs_;
    double x_max_;
};

enum class EquilibriumKind { stable, unstable };

struct Equilibrium {
    double location = 0.0;
    double slope = 0.0;  // h'(location)
    EquilibriumKind kind = EquilibriumKind::stable;
};

namespace detail {

/// Bisection on a sign-changing bracket; f(lo) and f(hi) must have opposite
/// signs. Returns the midpoint of the final bracket of width <= x_tol.
template <class F>
double bisect(F&& f, double lo, double hi, double f_lo, double x_tol) {
    for (int it = 0; it < 200 && (hi - lo) > x_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((f_lo < 0.0) == (fm < 0.0)) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// All zeros of h in [0, x_max], located by sign-change bracketing on a
/// uniform grid refined by bisection, each with its slope and kind.
///
/// A root with |h'| < hyperbolicity_tol violates the hyperbolicity
/// assumption and is reported by throwing DomainError; callers that must
/// not throw (validation) catch it.
inline std::vector<Equilibrium> find_equilibria(const PolynomialVectorField& vf,
                                                double tol = 1e-12,
                                                int grid_points = 4096,
                                                double hyperbolicity_tol = 1e-8) {
    if (!(tol > 0.0)) throw DomainError("tol must be positive");
    std::vector<double> roots;
    const double x_hi = vf.x_max();
    const double h_cell = x_hi / static_cast<double>(grid_points - 1);

    double prev_x = 0.0;
    double prev_f = vf(0.0);
    if (prev_f == 0.0) roots.push_back(0.0);
    for (int i = 1; i < grid_points; ++i) {
        const double x = (i == grid_points - 1) ? x_hi : i * h_cell;
        const double f = vf(x);
        if (f == 0.0) {
            roots.push_back(x);
        } else if (prev_f != 0.0 && (prev_f < 0.0) != (f < 0.0)) {
            roots.push_back(detail::bisect(vf, prev_x, x, prev_f, tol));
        }
        prev_x = x;
        prev_f = f;
    }

    std::vector<Equilibrium> out;
    for (double r : roots) {
        if (!out.empty() && r - out.back().location < 4.0 * tol) continue;
        const double slope = vf.deriv_unchecked(r);
        if (std::abs(slope) < hyperbolicity_tol)
            throw DomainError("non-hyperbolic equilibrium at x=" + std::to_string(r) +
                              " (|h'|=" + std::to_string(std::abs(slope)) + ")");
        out.push_back({r, slope, slope < 0.0 ? EquilibriumKind::stable : EquilibriumKind::unstable});
    }
    return out;
}

enum class CheckStatus { pass, warn, fail };

struct HypothesisCheck {
    std::string id;
    CheckStatus status = CheckStatus::pass;
    std::string detail;
};

struct ValidationReport {
    std::vector<HypothesisCheck> checks;
    std::vector<Equilibrium> equilibria;  // empty when equilibrium analysis failed

    bool ok() const {
        return std::none_of(checks.begin(), checks.end(),
                            [](const HypothesisCheck& c) { return c.status == CheckStatus::fail; });
    }
    bool warned() const {
        return std::any_of(checks.begin(), checks.end(),
                           [](const HypothesisCheck& c) { return c.status == CheckStatus::warn; });
    }
};

/// P1/P2 screening: h(0)=0, A!=0, nonzero nonlinear part, hyperbolic
/// equilibria alternating in kind. A>0 is accepted with a warning since the
/// canonical orientation used downstream (regime table, transcritical
/// value) assumes A<0.
inline ValidationReport validate_hypotheses(const PolynomialVectorField& vf) {
    ValidationReport rep;
    auto add = [&rep](std::string id, CheckStatus st, std::string detail) {
        rep.checks.push_back({std::move(id), st, std::move(detail)});
    };

    const bool origin_fixed = vf.coeffs()[0] == 0.0;
    add("P1:h(0)=0", origin_fixed ? CheckStatus::pass : CheckStatus::fail,
        origin_fixed ? "c0 = 0" : "c0 = " + std::to_string(vf.coeffs()[0]));

    const double A = vf.linear_part();
    if (A == 0.0)
        add("P1:A!=0", CheckStatus::fail, "dh(0) = 0 (origin not hyperbolic)");
    else
        add("P1:A!=0", CheckStatus::pass, "A = " + std::to_string(A));

    add("P1:H!=0", vf.has_nonlinear_part() ? CheckStatus::pass : CheckStatus::fail,
        vf.has_nonlinear_part() ? "degree " + std::to_string(vf.degree())
                                : "no nonlinear part (degree < 2)");

    if (A > 0.0)
        add("P1:A<0", CheckStatus::warn,
            "A > 0; canonical orientation assumes A < 0 (regime table unavailable)");
    else if (A < 0.0)
        add("P1:A<0", CheckStatus::pass, "A < 0");

    if (!origin_fixed || A == 0.0) return rep;

    try {
        rep.equilibria = find_equilibria(vf);
    } catch (const DomainError& e) {
        add("P2:hyperbolic", CheckStatus::fail, e.what());
        return rep;
    }
    add("P2:hyperbolic", CheckStatus::pass,
        "k = " + std::to_string(rep.equilibria.size()) + " hyperbolic zeros");

    bool alternates = true;
    for (std::size_t i = 1; i < rep.equilibria.size(); ++i)
        if (rep.equilibria[i].kind == rep.equilibria[i - 1].kind) alternates = false;
    if (!alternates) {
        add("P2:alternation", CheckStatus::fail, "equilibrium kinds do not alternate");
        return rep;
    }
    add("P2:alternation", CheckStatus::pass, "kinds alternate along [0, x_max]");

    if (A < 0.0) {
        const bool odd = rep.equilibria.size() % 2 == 1;
        const bool starts_stable =
            !rep.equilibria.empty() && rep.equilibria.front().kind == EquilibriumKind::stable;
        const bool ends_stable =
            !rep.equilibria.empty() && rep.equilibria.back().kind == EquilibriumKind::stable;
        if (odd && starts_stable && ends_stable)
            add("P2:pattern", CheckStatus::pass,
                "odd count, pattern s,u,...,s (n = " +
                    std::to_string((rep.equilibria.size() + 1) / 2) + ")");
        else
            add("P2:pattern", CheckStatus::fail,
                odd ? "pattern does not start/end stable" : "even equilibrium count in domain");
    }
    return rep;
}

}  // namespace pulsedyn
