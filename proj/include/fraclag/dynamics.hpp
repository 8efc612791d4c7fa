#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fraclag/constraints.hpp"

namespace fraclag {

// One total differential equation in resolved form:
//   d(target) = dtCoeff dt + sum_mu dXmuCoeff[mu] dX_mu + sum_mu dVmuCoeff[mu] dV_mu.
// Only nonzero coefficients are stored. `momentumForm` records that the
// source convention writes momentum equations with -d(target) on the left;
// the stored coefficients are always those of the resolved (positive) form.
struct TotalDifferentialEquation {
    CanonicalVar target;
    Expr dtCoeff;
    std::map<int, Expr> dXmuCoeff;
    std::map<int, Expr> dVmuCoeff;
    bool momentumForm = false;
};

// Differential of the action along solutions, restricted to the primary
// constraint surface:
//   dS = dtCoeff dt + sum_mu dXmuCoeff[mu] dX_mu + sum_mu dVmuCoeff[mu] dV_mu.
struct ActionForm {
    Expr dtCoeff;
    std::map<int, Expr> dXmuCoeff;
    std::map<int, Expr> dVmuCoeff;
};

// general: on the primary surface. reduced: second-class constraints
// eliminated as well.
struct ActionForms {
    ActionForm general;
    ActionForm reduced;
};

// Evolution equations for the regular positions/velocities and all momenta.
// The singular positions and velocities are free (gauge) inputs, so their
// trivial identities are not emitted.
std::vector<TotalDifferentialEquation> derive_equations_of_motion(const AnalysisReport& report);

ActionForms derive_action_form(const AnalysisReport& report);

// Prescribed trajectories for the singular (gauge) sector.
struct GaugeChoice {
    std::map<int, std::function<double(double)>> x;  // mu -> X_mu(t)
    std::map<int, std::function<double(double)>> v;  // mu -> V_mu(t)

    static GaugeChoice zero(const std::vector<int>& singular);
    // X_mu(t) = 0, V_mu(t) = value.
    static GaugeChoice constant_v(const std::vector<int>& singular, double value);
    // "zero" or "constant:<value>".
    static GaugeChoice named(const std::string& text, const std::vector<int>& singular);
};

struct PhasePoint {
    std::vector<double> x, v, p, pi;  // size n each, [i-1] for coordinate i
};

struct TrajectorySample {
    double t = 0;
    PhasePoint state;
    double action = 0;       // accumulated dt-part + gauge part
    double actionGauge = 0;  // accumulated gauge (dX_mu, dV_mu) part alone
    double residualMax = 0;  // max |constraint| at this sample
};

struct Trajectory {
    int n = 0;
    std::vector<int> regular, singular;
    std::vector<TrajectorySample> samples;

    double action() const { return samples.empty() ? 0.0 : samples.back().action; }
    double max_residual() const;
};

// Fixed-step RK4 on the resolved equations, gauge functions driving the
// singular sector (their time derivatives by central differences). The
// initial point must satisfy every constraint and match the gauge at tStart
// to 1e-12 (ConstraintViolation otherwise); non-finite values raise
// NumericalBlowup. The action is accumulated per step by Simpson's rule with
// a cubic Hermite midpoint state.
Trajectory integrate(const AnalysisReport& report,
                     const std::vector<TotalDifferentialEquation>& equations,
                     const ActionForm& actionForm, const GaugeChoice& gauge,
                     const PhasePoint& init, double dt, double tStart, double tEnd);

double action_along(const Trajectory& trajectory);

// Header t,x1..xn,v1..vn,p1..pn,pi1..pin,S,residual_max.
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);

}  // namespace fraclag
