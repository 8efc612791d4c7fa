#pragma once

#include <functional>

namespace fraclag {

using RealFn = std::function<double(double)>;

// Gamma function via the Lanczos approximation (g = 7, 9 coefficients),
// reflection formula for arguments below 1/2. Poles at non-positive integers
// raise DomainError.
double gamma_fn(double x);

// Conformal fractional derivative of order alpha in (0, 1] at t > 0:
// limit of (f(t + eps*t^(1-alpha)) - f(t))/eps as eps -> 0+, computed from a
// halving step ladder with two Richardson levels. The returned value is the
// fixed deepest extrapolant, so the operator is exactly linear in f; the
// ladder must have converged to 1e-6 relative or NoConvergence is thrown.
double conformal_derivative(const RealFn& f, double alpha, double t);

// Left Riemann-Liouville derivative of order alpha >= 0 on [a, t], t > a:
//   (1/Gamma(n-alpha)) d^n/ds^n  integral_a^s (s-tau)^(n-alpha-1) f(tau) dtau
// with n = ceil(alpha) in {1, 2} for fractional orders; integer orders 0, 1, 2
// reduce to f and plain finite-difference derivatives. The weakly singular
// integral is regularized by the substitution u = (s-tau)^(n-alpha), which
// makes the integrand smooth, then evaluated by 64-point Gauss-Legendre and
// differentiated with 5-point O(h^4) stencils.
double rl_left_derivative(const RealFn& f, double alpha, double a, double t);

// Right-sided mirror on [t, b], t < b:
//   (1/Gamma(n-alpha)) (-d/ds)^n  integral_s^b (tau-s)^(n-alpha-1) f(tau) dtau
double rl_right_derivative(const RealFn& f, double alpha, double t, double b);

}  // namespace fraclag
