#include <doctest.h>

#include <map>
#include <random>

#include "fraclag/error.hpp"
#include "fraclag/expr.hpp"
#include "fraclag/parser.hpp"
#include "fraclag/selfcheck.hpp"
#include "fraclag/variable.hpp"

using namespace fraclag;

TEST_CASE("canonical variable ordering drives rendering") {
    // t < x < v < a < j < p < pi < p0, index within kind, jet depth last.
    CHECK(var_t() < var_x(1));
    CHECK(var_x(2) < var_x(3));
    CHECK(var_x(3) < var_v(1));
    CHECK(var_a(2) < var_j(1, 1));
    CHECK(var_j(1, 1) < var_j(1, 2));
    CHECK(var_j(2, 1) < var_p(1));
    CHECK(var_p(3) < var_pi(1));
    CHECK(var_pi(3) < var_p0());
    CHECK(to_string(var_j(1, 2)) == "j1_2");
    CHECK(to_string(var_pi(3)) == "pi3");
    CHECK(to_string(var_p0()) == "p0");
}

TEST_CASE("rendering orders terms canonically and elides unit magnitudes") {
    Expr e = parse("v3*a3 + 1/2*x3^2 - 1/2*v1^2 - 1/2*v2^2 + 1/2*a1^2 + 1/2*a2^2", 3);
    CHECK(render(e) == "1/2*x3^2 - 1/2*v1^2 - 1/2*v2^2 + v3*a3 + 1/2*a1^2 + 1/2*a2^2");
    CHECK(render(Expr()) == "0");
    CHECK(render(parse("x1 - x1", 1)) == "0");
    CHECK(render(parse("-x1", 1)) == "-x1");
    CHECK(render(parse("x1^1", 1)) == "x1");
}

TEST_CASE("arithmetic is exact polynomial arithmetic") {
    Expr a = parse("x1 + v1", 2);
    Expr b = parse("x1 - v1", 2);
    CHECK(a * b == parse("x1^2 - v1^2", 2));
    CHECK(a.pow(2) == parse("x1^2 + 2*x1*v1 + v1^2", 2));
    CHECK(a.scaled(Rational(1, 2)) == parse("1/2*x1 + 1/2*v1", 2));
    CHECK((a - a).is_zero());
    CHECK(a.pow(0) == Expr::constant(Rational(1)));
}

TEST_CASE("partial derivatives") {
    Expr e = parse("1/2*x1^2*v1 + p1*x1 + 3", 1);
    CHECK(e.diff(var_x(1)) == parse("x1*v1 + p1", 1));
    CHECK(e.diff(var_v(1)) == parse("1/2*x1^2", 1));
    CHECK(e.diff(var_p(1)) == parse("x1", 1));
    CHECK(e.diff(var_pi(1)).is_zero());
}

TEST_CASE("prolonged time derivative walks the jet ladder") {
    CHECK(parse("x1", 1).total_time_derivative() == parse("v1", 1));
    CHECK(parse("v1", 1).total_time_derivative() == parse("a1", 1));
    CHECK(parse("a1", 1).total_time_derivative() == parse("j1_1", 1));
    CHECK(parse("j1_1", 1).total_time_derivative() == parse("j1_2", 1));
    CHECK(parse("t", 1).total_time_derivative() == Expr::constant(Rational(1)));
    // Product rule.
    CHECK(parse("x1*v1", 1).total_time_derivative() == parse("v1^2 + x1*a1", 1));
    // Momenta carry no prescribed evolution.
    CHECK_THROWS_AS(parse("p1", 1).total_time_derivative(), Error);
}

TEST_CASE("substitution is simultaneous and validated") {
    Expr e = parse("x1*v1 + v1^2", 1);
    std::map<CanonicalVar, Expr> rules{{var_x(1), parse("p1 + 1", 1)},
                                       {var_v(1), parse("2*pi1", 1)}};
    CHECK(e.substitute(rules) == parse("2*p1*pi1 + 2*pi1 + 4*pi1^2", 1));

    // A replacement mentioning any substituted variable is rejected, the
    // variable itself included: substitution is one-shot, not iterative.
    std::map<CanonicalVar, Expr> bad{{var_x(1), parse("x1 + 1", 1)}};
    CHECK_THROWS_AS(e.substitute(bad), Error);
    std::map<CanonicalVar, Expr> swap{{var_x(1), parse("v1", 1)}, {var_v(1), parse("x1", 1)}};
    CHECK_THROWS_AS(e.substitute(swap), Error);
    std::map<CanonicalVar, Expr> cross{{var_x(1), parse("v1", 1)}, {var_v(1), parse("p1", 1)}};
    CHECK_THROWS_AS(e.substitute(cross), Error);
}

TEST_CASE("exact evaluation at a rational point") {
    Expr e = parse("1/2*x1^2 - v1", 1);
    std::map<CanonicalVar, Rational> point{{var_x(1), Rational(3)}, {var_v(1), Rational(1, 4)}};
    CHECK(e.eval_exact(point) == Rational(17, 4));
}

TEST_CASE("compiled evaluation matches exact evaluation") {
    Expr e = parse("2*x1^2*v1 - 3*p1 + 1/2", 1);
    VarSlots slots;
    CompiledExpr compiled(e, slots);
    std::vector<double> values(slots.order().size());
    std::map<CanonicalVar, Rational> point;
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> pick(-5, 5);
    for (std::size_t s = 0; s < slots.order().size(); ++s) {
        int val = pick(rng);
        values[s] = val;
        point[slots.order()[s]] = Rational(val);
    }
    CHECK(compiled.eval(values) == doctest::Approx(e.eval_exact(point).to_double()));
}

TEST_CASE("round trip on random polynomials") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Expr e = random_polynomial(seed, 3, 3);
        CHECK(parse(render(e), 3) == e);
    }
}
