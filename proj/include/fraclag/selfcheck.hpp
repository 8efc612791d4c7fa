#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fraclag/expr.hpp"

namespace fraclag {

struct SelfTestReport {
    std::vector<std::string> lines;
    bool ok = true;
};

// Deterministic sparse polynomial over x/v/p/pi with indices 1..n and total
// degree <= maxDegree. Same seed, same polynomial; never the zero polynomial.
// Shared by the bracket identity checks here and by external stress tests.
Expr random_polynomial(std::uint64_t seed, int n, int maxDegree);

// Runs the numerical and algebraic self checks: gamma closed forms, the
// conformal and Riemann-Liouville operators against known derivatives, exact
// linearity of the fixed-depth evaluations, the order-1 reductions, and the
// Poisson bracket identities (antisymmetry, Leibniz, Jacobi) on random
// polynomial triples. One line per check; ok is the conjunction.
SelfTestReport run_selftest();

}  // namespace fraclag
