#include <doctest.h>

#include <cmath>
#include <complex>

#include "fraclag/error.hpp"
#include "fraclag/kernel.hpp"
#include "fraclag/parser.hpp"
#include "fraclag/report.hpp"

using namespace fraclag;

namespace {

const double kPi = std::acos(-1.0);

AnalysisReport coupled_singular_report() {
    return analyze(make_model(
        "coupled-singular", 3,
        parse("1/2*(a1^2 + a2^2) - 1/2*(v1^2 + v2^2) + 1/2*x3^2 + v3*a3", 3)));
}

PathGrid grid_for(const ReducedLagrangian& red, double tEnd, int slices) {
    PathGrid grid;
    grid.tStart = 0;
    grid.tEnd = tEnd;
    grid.slices = slices;
    grid.coords = red.coords;
    grid.nodes.assign(red.coords.size(), std::vector<double>(slices + 1, 0.0));
    grid.xStart.assign(red.coords.size(), 0.0);
    return grid;
}

}  // namespace

TEST_CASE("reduction of the bundled model to a configuration Lagrangian") {
    ReducedLagrangian red = reduce_for_kernel(coupled_singular_report());
    CHECK(red.coords == std::vector<int>{1, 2});
    CHECK(red.mass.size() == 2);
    CHECK(red.mass[0][0] == Rational(1));
    CHECK(red.mass[1][1] == Rational(1));
    CHECK(red.mass[0][1] == Rational(0));
    CHECK(red.linear[0].is_zero());
    CHECK(red.linear[1].is_zero());
    CHECK(red.potential == parse("1/2*v1^2 + 1/2*v2^2", 3));
    CHECK(red.lred == parse("-1/2*v1^2 - 1/2*v2^2 + 1/2*a1^2 + 1/2*a2^2", 3));
    CHECK(!red.dependsOnX);
    CHECK(red.degree == 2);
}

TEST_CASE("pure second-order kinetic models round-trip through the reduction") {
    AnalysisReport rep = analyze(make_model("cross", 2, parse("a1^2 + 1/2*a2^2 + a1*a2", 2)));
    ReducedLagrangian red = reduce_for_kernel(rep);
    // Mass of the momentum form is the inverse acceleration Hessian.
    CHECK(red.mass == RatMat{{Rational(1), Rational(-1)}, {Rational(-1), Rational(2)}});
    CHECK(red.massInv == RatMat{{Rational(2), Rational(1)}, {Rational(1), Rational(1)}});
    CHECK(red.lred == parse("a1^2 + a1*a2 + 1/2*a2^2", 2));
}

TEST_CASE("unsupported reductions") {
    // Time-dependent potential.
    AnalysisReport t_dep = analyze(make_model("t-dep", 1, parse("1/2*a1^2 - t*v1", 1)));
    CHECK_THROWS_AS(reduce_for_kernel(t_dep), Error);

    // A gauge-sector velocity survives on the reduced surface.
    AnalysisReport gauge = analyze(make_model("gauge-left", 2, parse("1/2*a1^2 + 1/2*v2^2", 2)));
    try {
        reduce_for_kernel(gauge);
        FAIL("expected UnsupportedKernel");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedKernel);
    }
}

TEST_CASE("discretized action of a hand-computed two-slice path") {
    ReducedLagrangian red =
        reduce_for_kernel(analyze(make_model("free", 1, parse("1/2*a1^2", 1))));
    PathGrid grid = grid_for(red, 0.6, 2);
    grid.nodes[0] = {0.2, 0.5, -0.4};
    // S = dt/2 * [((0.5-0.2)/0.3)^2 + ((-0.4-0.5)/0.3)^2] = 0.15*(1 + 9) = 1.5
    CHECK(discretized_action(red, grid) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("zero path is stationary exactly") {
    ReducedLagrangian red = reduce_for_kernel(coupled_singular_report());
    PathGrid grid = grid_for(red, 1.0, 8);
    CHECK(stationary_phase_check(red, grid) == 0.0);
}

TEST_CASE("classical cosine path is stationary, perturbed path is not") {
    ReducedLagrangian red = reduce_for_kernel(coupled_singular_report());
    int slices = 200;
    PathGrid grid = grid_for(red, kPi / 4, slices);
    for (int k = 0; k <= slices; ++k) grid.nodes[0][k] = std::cos(grid.dt() * k);
    CHECK(stationary_phase_check(red, grid) < 1e-6);

    for (int k = 0; k <= slices; ++k)
        grid.nodes[0][k] += 0.1 * std::sin(kPi * k / slices);
    CHECK(stationary_phase_check(red, grid) > 1e-3);
}

TEST_CASE("semigroup: one interior slice of the free kernel in closed form") {
    ReducedLagrangian red =
        reduce_for_kernel(analyze(make_model("free", 1, parse("1/2*a1^2", 1))));
    double tau = 0.3, A = 0.2, B = -0.4;
    PathGrid grid = grid_for(red, 2 * tau, 2);
    grid.nodes[0][0] = A;
    grid.nodes[0][2] = B;
    QuadraticActionMatrix qam = discretize_action(red, grid);
    REQUIRE(qam.dim() == 1);
    std::complex<double> got = gaussian_kernel_eval(qam);
    std::complex<double> expected = std::sqrt(kPi * tau) *
                                    std::exp(std::complex<double>(0, kPi / 4)) *
                                    std::exp(std::complex<double>(0, (A - B) * (A - B) / (4 * tau)));
    CHECK(std::abs(got - expected) <= 1e-12 * std::abs(expected));
}

TEST_CASE("fresnel closed form against the damped quadrature, dimension 1") {
    QuadraticActionMatrix qam;
    qam.q = {{2.0}};
    qam.b = {0.3};
    qam.c = 0.1;
    std::complex<double> gauss = gaussian_kernel_eval(qam);
    std::complex<double> expected = std::sqrt(kPi) * std::exp(std::complex<double>(0, kPi / 4)) *
                                    std::exp(std::complex<double>(0, 0.1 - 0.5 * 0.09 / 2.0));
    CHECK(std::abs(gauss - expected) <= 1e-12 * std::abs(expected));
    std::complex<double> quad = oscillatory_kernel_quadrature(qam);
    CHECK(std::abs(gauss - quad) <= 1e-6 * std::abs(gauss));

    // Negative eigenvalue flips the branch.
    qam.q = {{-1.5}};
    qam.b = {0.0};
    qam.c = 0.0;
    std::complex<double> gaussNeg = gaussian_kernel_eval(qam);
    std::complex<double> expectedNeg = std::sqrt(2 * kPi / 1.5) *
                                       std::exp(std::complex<double>(0, -kPi / 4));
    CHECK(std::abs(gaussNeg - expectedNeg) <= 1e-12 * std::abs(expectedNeg));
    CHECK(std::abs(gaussNeg - oscillatory_kernel_quadrature(qam)) <= 1e-6 * std::abs(gaussNeg));
}

TEST_CASE("gaussian kernel matches quadrature on a coupled three-node form") {
    ReducedLagrangian red = reduce_for_kernel(
        analyze(make_model("harmonic", 1, parse("1/2*a1^2 - 1/2*v1^2", 1))));
    PathGrid grid = grid_for(red, 1.0, 4);
    grid.nodes[0][0] = 0.3;
    grid.nodes[0][4] = -0.2;
    QuadraticActionMatrix qam = discretize_action(red, grid);
    REQUIRE(qam.dim() == 3);
    std::complex<double> gauss = gaussian_kernel_eval(qam);
    std::complex<double> quad = oscillatory_kernel_quadrature(qam);
    CHECK(std::abs(gauss - quad) <= 1e-6 * std::abs(gauss));
}

TEST_CASE("quadratic form reproduces the discretized action") {
    ReducedLagrangian red = reduce_for_kernel(coupled_singular_report());
    PathGrid grid = grid_for(red, 1.2, 3);
    grid.nodes[0] = {0.1, 0.0, 0.0, -0.3};
    grid.nodes[1] = {0.2, 0.0, 0.0, 0.4};
    QuadraticActionMatrix qam = discretize_action(red, grid);
    REQUIRE(qam.dim() == 4);  // 2 coordinates x 2 interior nodes

    std::vector<double> z = {0.7, -0.1, 0.25, 0.5};  // coordinate-major
    PathGrid filled = grid;
    filled.nodes[0][1] = z[0];
    filled.nodes[0][2] = z[1];
    filled.nodes[1][1] = z[2];
    filled.nodes[1][2] = z[3];
    double direct = discretized_action(red, filled);

    double viaForm = qam.c;
    for (int i = 0; i < 4; ++i) {
        viaForm += qam.b[i] * z[i];
        for (int j = 0; j < 4; ++j) viaForm += 0.5 * qam.q[i][j] * z[i] * z[j];
    }
    CHECK(direct == doctest::Approx(viaForm).epsilon(1e-10));
}

TEST_CASE("degenerate and malformed inputs") {
    ReducedLagrangian cubic = reduce_for_kernel(
        analyze(make_model("cubic", 1, parse("1/2*a1^2 - 1/3*v1^3", 1))));
    CHECK(cubic.degree == 3);
    PathGrid grid = grid_for(cubic, 1.0, 4);
    CHECK_THROWS_AS(discretize_action(cubic, grid), Error);

    ReducedLagrangian red =
        reduce_for_kernel(analyze(make_model("free", 1, parse("1/2*a1^2", 1))));
    PathGrid bad = grid_for(red, 1.0, 0);
    CHECK_THROWS_AS(discretized_action(red, bad), Error);
    PathGrid shortNodes = grid_for(red, 1.0, 4);
    shortNodes.nodes[0].pop_back();
    CHECK_THROWS_AS(discretized_action(red, shortNodes), Error);
    PathGrid backwards = grid_for(red, -1.0, 4);
    CHECK_THROWS_AS(discretized_action(red, backwards), Error);

    QuadraticActionMatrix singular;
    singular.q = {{1.0, 0.0}, {0.0, 0.0}};
    singular.b = {0.0, 0.0};
    CHECK_THROWS_AS(gaussian_kernel_eval(singular), Error);
}
