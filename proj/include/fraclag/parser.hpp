#pragma once

#include <string>

#include "fraclag/expr.hpp"

namespace fraclag {

// Parses the expression grammar over coordinates 1..n:
//
//   expr    := ['-'] term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := primary ['^' INTEGER]        (positive exponents only)
//   primary := '(' expr ')' | INTEGER ['/' INTEGER] | variable
//
// Variables: t, x<i>, v<i>, a<i>, j<i>_<k>, p<i>, pi<i>, p0. There is no
// implicit multiplication. Errors are ParseError with a byte-level span;
// an index outside 1..n is IndexOutOfRange, a negative or zero exponent is
// UnsupportedExpression. The result is in canonical form.
Expr parse(const std::string& text, int n);

// Canonical rendering; parse(render(e), n) == e for any e over 1..n.
std::string render(const Expr& e);

}  // namespace fraclag
