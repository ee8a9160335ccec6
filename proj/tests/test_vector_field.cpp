#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pulsedyn/vector_field.hpp"

using namespace pulsedyn;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
PolynomialVectorField cubic() { return PolynomialVectorField({0.0, -2.0, 3.0, -1.0}, 25.0); }
}  // namespace

TEST_CASE("polynomial evaluation", "[vectorfield]") {
    auto vf = cubic();
    CHECK(vf.eval(0.0) == 0.0);
    CHECK_THAT(vf.eval(1.0), WithinAbs(0.0, 1e-15));
    CHECK_THAT(vf.eval(0.5), WithinAbs(-0.375, 1e-15));  // -0.5 * (-0.5) * (-1.5)
    CHECK_THROWS_AS(vf.eval(-0.1), DomainError);
    CHECK_THROWS_AS(vf.eval(25.5), DomainError);
}

TEST_CASE("exact derivative", "[vectorfield]") {
    auto vf = cubic();
    CHECK_THAT(vf.deriv(0.0), WithinAbs(-2.0, 1e-15));
    CHECK_THAT(vf.deriv(1.0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(vf.deriv(2.0), WithinAbs(-2.0, 1e-15));
}

TEST_CASE("derivative matches central differences of eval", "[vectorfield]") {
    auto vf = cubic();
    const double delta = 1e-6;
    for (int i = 1; i < 40; ++i) {
        const double x = 0.5 + i * 0.1;
        const double fd = (vf(x + delta) - vf(x - delta)) / (2.0 * delta);
        CHECK_THAT(vf.deriv(x), WithinRel(fd, 1e-8));
    }
}

TEST_CASE("cubic equilibria with kinds", "[vectorfield]") {
    auto eq = find_equilibria(cubic(), 1e-12);
    REQUIRE(eq.size() == 3);
    CHECK_THAT(eq[0].location, WithinAbs(0.0, 1e-10));
    CHECK_THAT(eq[1].location, WithinAbs(1.0, 1e-10));
    CHECK_THAT(eq[2].location, WithinAbs(2.0, 1e-10));
    CHECK(eq[0].kind == EquilibriumKind::stable);
    CHECK(eq[1].kind == EquilibriumKind::unstable);
    CHECK(eq[2].kind == EquilibriumKind::stable);
    for (const auto& e : eq) {
        CHECK(std::abs(cubic().eval(e.location)) < 1e-10);
        CHECK(((e.slope < 0.0) == (e.kind == EquilibriumKind::stable)));
    }
}

TEST_CASE("linear field has the single origin equilibrium", "[vectorfield]") {
    PolynomialVectorField vf({0.0, -1.0}, 10.0);
    auto eq = find_equilibria(vf);
    REQUIRE(eq.size() == 1);
    CHECK(eq[0].location == 0.0);
    CHECK(eq[0].kind == EquilibriumKind::stable);
}

TEST_CASE("bisection refinement reaches irrational roots", "[vectorfield]") {
    // h(x) = -x (x - sqrt2) (x - e)
    const double r1 = std::sqrt(2.0), r2 = std::exp(1.0);
    PolynomialVectorField vf({0.0, -r1 * r2, r1 + r2, -1.0}, 5.0);
    auto eq = find_equilibria(vf, 1e-12);
    REQUIRE(eq.size() == 3);
    CHECK_THAT(eq[1].location, WithinAbs(r1, 1e-10));
    CHECK_THAT(eq[2].location, WithinAbs(r2, 1e-10));
}

TEST_CASE("equilibria are increasing and alternate starting stable", "[vectorfield]") {
    // quintic shipped as the Table-1 reference system
    PolynomialVectorField vf(
        {0.0, -1.0, 3.25, -3.0138888888888888, 1.0972222222222223, -0.1388888888888889},
        15.0);
    auto eq = find_equilibria(vf);
    REQUIRE(eq.size() == 5);
    for (std::size_t i = 1; i < eq.size(); ++i) {
        CHECK(eq[i].location > eq[i - 1].location);
        CHECK(eq[i].kind != eq[i - 1].kind);
    }
    CHECK(eq.front().kind == EquilibriumKind::stable);
    CHECK(eq.back().kind == EquilibriumKind::stable);
}

TEST_CASE("hypothesis validation on the cubic", "[vectorfield]") {
    auto rep = validate_hypotheses(cubic());
    CHECK(rep.ok());
    CHECK_FALSE(rep.warned());
    REQUIRE(rep.equilibria.size() == 3);
}

TEST_CASE("A>0 passes with a sign warning", "[vectorfield]") {
    PolynomialVectorField vf({0.0, 1.0, -1.0}, 3.0);  // x - x^2
    auto rep = validate_hypotheses(vf);
    CHECK(rep.ok());
    CHECK(rep.warned());
}

TEST_CASE("pure linear field fails the nonlinearity hypothesis", "[vectorfield]") {
    PolynomialVectorField vf({0.0, -1.0}, 10.0);
    auto rep = validate_hypotheses(vf);
    CHECK_FALSE(rep.ok());
}

TEST_CASE("nonzero constant coefficient fails h(0)=0", "[vectorfield]") {
    PolynomialVectorField vf({0.5, -2.0, 3.0, -1.0}, 25.0);
    auto rep = validate_hypotheses(vf);
    CHECK_FALSE(rep.ok());
}

TEST_CASE("double root is a hard failure", "[vectorfield]") {
    // h(x) = -x (x-1)^2: non-hyperbolic equilibrium at 1
    PolynomialVectorField vf({0.0, -1.0, 2.0, -1.0}, 5.0);
    CHECK_THROWS_AS(find_equilibria(vf), DomainError);
    auto rep = validate_hypotheses(vf);
    CHECK_FALSE(rep.ok());
}

TEST_CASE("even equilibrium count violates the P2 pattern", "[vectorfield]") {
    // h(x) = -x (x-1) (x-2) (x-3): four zeros in domain, A < 0
    PolynomialVectorField vf({0.0, -6.0, 11.0, -6.0, 1.0}, 3.5);
    REQUIRE(vf.deriv(0.0) < 0.0);
    auto rep = validate_hypotheses(vf);
    CHECK_FALSE(rep.ok());
}
