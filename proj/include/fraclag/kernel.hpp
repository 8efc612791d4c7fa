#pragma once

#include <complex>
#include <vector>

#include "fraclag/constraints.hpp"
#include "fraclag/ratmat.hpp"

namespace fraclag {

// Configuration-space Lagrangian left after integrating the momenta out of
// the reduced phase-space action: the P integrals force dX_a = V_a dt, the
// Gaussian PI integrals leave
//   L_red = 1/2 (vdot - c)^T M^-1 (vdot - c) - U(x, v)
// where H_red = sum_a P_a V_a + 1/2 PI^T M PI + c^T PI + U on the second-class
// reduced surface. Acceleration variables stand in for vdot.
struct ReducedLagrangian {
    std::vector<int> coords;  // regular coordinate indices, ascending
    RatMat mass, massInv;     // M and M^-1, constant by contract
    std::vector<Expr> linear; // c_a(X, V)
    Expr potential;           // U(X, V)
    Expr lred;                // over X_a, V_a, A_a
    bool dependsOnX = false;
    int degree = 0;           // total degree of lred
};

// Requires a classified report. UnsupportedKernel when the reduced
// Hamiltonian is time dependent, keeps gauge-sector variables, is not linear
// in P with dH/dP_a = V_a, or is not quadratic in PI with a constant
// invertible mass matrix.
ReducedLagrangian reduce_for_kernel(const AnalysisReport& report);

// Velocity-node path grid: nodes[coordPos][k] holds V_a(t_k) on the uniform
// grid t_k = tStart + k*dt, k = 0..slices. X paths are reconstructed from
// xStart by the forward rule x_{k+1} = x_k + dt*v_k that the momentum
// integrals enforce.
struct PathGrid {
    double tStart = 0, tEnd = 1;
    int slices = 1;
    std::vector<int> coords;
    std::vector<std::vector<double>> nodes;
    std::vector<double> xStart;

    double dt() const { return (tEnd - tStart) / slices; }
    int interior_count() const { return static_cast<int>(coords.size()) * (slices - 1); }
};

// Left-endpoint rectangle discretization with forward-difference vdot:
//   S = sum_{k=0}^{M-1} dt * L_red(x_k, v_k, (v_{k+1} - v_k)/dt).
double discretized_action(const ReducedLagrangian& red, const PathGrid& grid);

// Max |dS/dv_{a,k}| over the interior nodes, from the analytic partials of
// L_red (the x-reconstruction chain rule included).
double stationary_phase_check(const ReducedLagrangian& red, const PathGrid& grid);

// S restricted to the interior nodes z (boundary fixed from the grid):
//   S(z) = 1/2 z^T Q z + b^T z + c, z indexed coordinate-major.
struct QuadraticActionMatrix {
    std::vector<std::vector<double>> q;
    std::vector<double> b;
    double c = 0;
    int dim() const { return static_cast<int>(b.size()); }
};

// Exact for quadratic actions (assembled by polarization); UnsupportedKernel
// when deg L_red > 2, GridError on malformed grids.
QuadraticActionMatrix discretize_action(const ReducedLagrangian& red, const PathGrid& grid);

// Closed-form Fresnel value of integral dz^d exp(i S(z)):
//   det(Q/(2 pi i))^(-1/2) exp(i(c - 1/2 b^T Q^-1 b))
// with the branch fixed per eigenvalue (e^{+i pi/4} for positive, e^{-i pi/4}
// for negative). Near-zero eigenvalues raise DegenerateQuadraticForm.
std::complex<double> gaussian_kernel_eval(const QuadraticActionMatrix& qam);

// Independent oracle: the same integral evaluated numerically with damping
// exp(-eta |z|^2) for eta in {1e-2, 1e-3, 1e-4} and polynomial extrapolation
// eta -> 0. The quadratic form is rotated to its eigenbasis (the damping is
// rotation invariant), which factorizes the integral into 1D oscillatory
// integrals handled by phase-adaptive composite Gauss-Legendre panels.
std::complex<double> oscillatory_kernel_quadrature(const QuadraticActionMatrix& qam);

}  // namespace fraclag
