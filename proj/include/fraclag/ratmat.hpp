#pragma once

#include <vector>

#include "fraclag/rational.hpp"

namespace fraclag {

using RatMat = std::vector<std::vector<Rational>>;

// Rank by exact Gaussian elimination.
int rank_exact(RatMat m);

// Exact inverse of a square matrix; DomainError when singular.
RatMat invert_exact(RatMat m);

}  // namespace fraclag
