#include <doctest.h>

#include <string>

#include "fraclag/constraints.hpp"
#include "fraclag/error.hpp"
#include "fraclag/parser.hpp"

using namespace fraclag;

namespace {

LagrangianModel coupled_singular() {
    return make_model("coupled-singular", 3,
                      parse("1/2*(a1^2 + a2^2) - 1/2*(v1^2 + v2^2) + 1/2*x3^2 + v3*a3", 3));
}

const ConstraintRecord& find_constraint(const AnalysisReport& rep, const std::string& label) {
    for (const auto& rec : rep.constraints)
        if (rec.label == label) return rec;
    FAIL(("missing constraint " + label));
    static ConstraintRecord dummy;
    return dummy;
}

}  // namespace

TEST_CASE("hessian and rank split of the bundled model") {
    LagrangianModel m = coupled_singular();
    auto w = hessian(m);
    CHECK(w[0][0] == parse("1", 3));
    CHECK(w[1][1] == parse("1", 3));
    CHECK(w[2][2].is_zero());
    CHECK(w[0][1].is_zero());
    CHECK(w[2][0].is_zero());
    HessianSplit split = hessian_rank(w);
    CHECK(split.rank == 2);
    CHECK(split.regular == std::vector<int>{1, 2});
    CHECK(split.singular == std::vector<int>{3});
}

TEST_CASE("momenta of the bundled model") {
    LagrangianModel m = coupled_singular();
    MomentaSet ms = momenta(m);
    CHECK(ms.pi[0] == parse("a1", 3));
    CHECK(ms.pi[1] == parse("a2", 3));
    CHECK(ms.pi[2] == parse("v3", 3));
    CHECK(ms.p[0] == parse("-v1 - j1_1", 3));
    CHECK(ms.p[1] == parse("-v2 - j2_1", 3));
    CHECK(ms.p[2].is_zero());
}

TEST_CASE("full analysis of the bundled model reproduces the frozen derivation") {
    AnalysisReport rep = analyze(coupled_singular());

    CHECK(rep.split.regular == std::vector<int>{1, 2});
    CHECK(rep.split.singular == std::vector<int>{3});

    // Regular accelerations invert to the velocity momenta.
    CHECK(rep.accelSolutions.at(1) == parse("pi1", 3));
    CHECK(rep.accelSolutions.at(2) == parse("pi2", 3));

    // Primary constraints, one pair for the singular coordinate.
    const auto& phiP = find_constraint(rep, "phi_p3");
    CHECK(phiP.origin == ConstraintOrigin::PrimaryP);
    CHECK(phiP.expr == parse("p3", 3));
    const auto& phiPi = find_constraint(rep, "phi_pi3");
    CHECK(phiPi.origin == ConstraintOrigin::PrimaryPi);
    CHECK(phiPi.expr == parse("pi3 - v3", 3));

    // Canonical Hamiltonian on the primary surface.
    Expr h0 = parse("-1/2*x3^2 + 1/2*v1^2 + 1/2*v2^2 + v1*p1 + v2*p2 + 1/2*pi1^2 + 1/2*pi2^2", 3);
    CHECK(rep.h0 == h0);
    CHECK(rep.h0prime == h0 + parse("p0", 3));

    // Exactly one secondary constraint, then the closure stops.
    const auto& sigma = find_constraint(rep, "sigma1");
    CHECK(sigma.origin == ConstraintOrigin::Secondary);
    CHECK(sigma.expr == parse("x3", 3));
    CHECK(rep.constraints.size() == 3);

    int secondaries = 0;
    for (const auto& rec : rep.constraints)
        if (rec.origin == ConstraintOrigin::Secondary) ++secondaries;
    CHECK(secondaries == 1);

    // Classification: the velocity-momentum constraint commutes with
    // everything on the surface; the other two pair up second class.
    CHECK(phiPi.cls == ConstraintClass::FirstClass);
    CHECK(phiP.cls == ConstraintClass::SecondClass);
    CHECK(sigma.cls == ConstraintClass::SecondClass);
}

TEST_CASE("closure steps record the one secondary appearance") {
    AnalysisReport rep = analyze(coupled_singular());
    REQUIRE(!rep.closureSteps.empty());
    int appended = 0;
    for (const auto& step : rep.closureSteps) {
        CHECK(!step.absorbed);
        if (!step.appendedLabel.empty()) {
            ++appended;
            CHECK(step.appendedLabel == "sigma1");
            CHECK(step.reducedRemainder == parse("x3", 3));
        }
    }
    CHECK(appended == 1);
}

TEST_CASE("degenerate first-order model: everything first class") {
    // L = v1*a1 is a total time derivative of v1^2/2: the Hessian vanishes,
    // both momenta are primary-constrained, and the Hamiltonian is zero.
    LagrangianModel m = make_model("total-derivative", 1, parse("v1*a1", 1));
    AnalysisReport rep = analyze(m);
    CHECK(rep.split.rank == 0);
    CHECK(rep.split.singular == std::vector<int>{1});
    CHECK(rep.h0.is_zero());
    REQUIRE(rep.constraints.size() == 2);
    CHECK(find_constraint(rep, "phi_p1").expr == parse("p1", 1));
    CHECK(find_constraint(rep, "phi_pi1").expr == parse("pi1 - v1", 1));
    for (const auto& rec : rep.constraints) CHECK(rec.cls == ConstraintClass::FirstClass);
}

TEST_CASE("remainder absorbed by a primary bracket fixes the multiplier") {
    // L = 1/2*a1^2 + 1/2*v2^2: coordinate 2 is singular, and the consistency
    // condition for phi_p2 = p2 - v2 ... closes through phi_pi2.
    LagrangianModel m = make_model("absorbed", 2, parse("1/2*a1^2 + 1/2*v2^2", 2));
    AnalysisReport rep = analyze(m);
    bool sawAbsorbed = false;
    for (const auto& step : rep.closureSteps) sawAbsorbed = sawAbsorbed || step.absorbed;
    CHECK(sawAbsorbed);
    // No secondary constraints appear.
    for (const auto& rec : rep.constraints) CHECK(rec.origin != ConstraintOrigin::Secondary);
}

TEST_CASE("inconsistent dynamics raise NonSolvableConstraint") {
    LagrangianModel m = make_model(
        "linear-potential", 3,
        parse("1/2*(a1^2 + a2^2) - 1/2*(v1^2 + v2^2) + 1/2*x3 + v3*a3", 3));
    try {
        analyze(m);
        FAIL("expected NonSolvableConstraint");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonSolvableConstraint);
        CHECK(e.stage() == "closure");
    }
}

TEST_CASE("regular model has no constraints") {
    LagrangianModel m = make_model("regular", 1, parse("1/2*a1^2", 1));
    AnalysisReport rep = analyze(m);
    CHECK(rep.constraints.empty());
    CHECK(rep.split.rank == 1);
    CHECK(rep.h0 == parse("v1*p1 + 1/2*pi1^2", 1));
}

TEST_CASE("poisson bracket canonical pairs") {
    CHECK(poisson_bracket(parse("x1", 2), parse("p1", 2)) == parse("1", 2));
    CHECK(poisson_bracket(parse("x1", 2), parse("p2", 2)).is_zero());
    CHECK(poisson_bracket(parse("v1", 2), parse("pi1", 2)) == parse("1", 2));
    CHECK(poisson_bracket(parse("x1", 2), parse("pi1", 2)).is_zero());
    CHECK(poisson_bracket(parse("t", 2), parse("p0", 2)).is_zero());
    CHECK(poisson_bracket(parse("x1*p1", 2), parse("p1", 2)) == parse("p1", 2));
}

TEST_CASE("surface reduction substitutes solved constraints to fixpoint") {
    AnalysisReport rep = analyze(coupled_singular());
    Expr reduced = reduce_by_constraints(parse("p3 + pi3 + x3 + v1", 3), rep.constraints);
    CHECK(reduced == parse("v3 + v1", 3));
}

TEST_CASE("model validation rejects foreign variables") {
    CHECK_THROWS_AS(make_model("bad", 1, parse("p1*a1", 1)), Error);
    CHECK_THROWS_AS(make_model("bad", 1, parse("j1_1", 1)), Error);
    CHECK_NOTHROW(make_model("ok", 1, parse("t*a1", 1)));
}
