#pragma once

#include <map>
#include <string>
#include <vector>

#include "fraclag/expr.hpp"
#include "fraclag/model_file.hpp"

namespace fraclag {

// Lagrangian over (t, X_i, V_i, A_i), i = 1..n. Momentum and jet variables in
// the input are rejected; jets only ever arise from total time derivatives.
struct LagrangianModel {
    std::string name;
    int n = 0;
    Expr lagrangian;
};

LagrangianModel make_model(std::string name, int n, Expr lagrangian);
LagrangianModel make_model(const ModelFile& file);

// Index split induced by the acceleration Hessian W_ij = d2L/dA_i dA_j.
// `regular` are the coordinates whose accelerations the Legendre map inverts
// (1-based, ascending), `singular` the rest.
struct HessianSplit {
    int rank = 0;
    std::vector<int> regular;
    std::vector<int> singular;
};

// Momenta as functions on the jet prolongation:
//   pi_i = dL/dA_i
//   p_i  = dL/dV_i - d/dt(dL/dA_i)
struct MomentaSet {
    std::vector<Expr> p;   // [i-1] for coordinate i
    std::vector<Expr> pi;
};

enum class ConstraintOrigin { PrimaryP, PrimaryPi, Secondary };
enum class ConstraintClass { Unclassified, FirstClass, SecondClass };

// One Hamiltonian constraint, expr == 0 on the surface, plus its solved form
// solvedVar == solvedRhs used to reduce expressions onto the surface.
struct ConstraintRecord {
    std::string label;
    ConstraintOrigin origin;
    Expr expr;
    ConstraintClass cls = ConstraintClass::Unclassified;
    CanonicalVar solvedVar;
    Expr solvedRhs;
};

// One consistency step of the closure loop: the constraint processed, its
// bracket with the total Hamiltonian before and after surface reduction, the
// reduced brackets against the primary constraints, and the outcome.
struct ClosureStep {
    std::string label;
    Expr bracketWithH;
    Expr reducedRemainder;
    std::vector<std::pair<std::string, Expr>> primaryBrackets;
    bool absorbed = false;
    std::string appendedLabel;
};

struct AnalysisReport {
    LagrangianModel model;
    std::vector<std::vector<Expr>> hessianMatrix;
    HessianSplit split;
    std::map<int, Expr> accelSolutions;  // regular index -> A in terms of (X, V, PI)
    MomentaSet momenta;
    Expr h0;       // canonical Hamiltonian on the primary surface
    Expr h0prime;  // p0 + h0
    std::vector<ConstraintRecord> constraints;  // primaries first, then closure order
    std::vector<ClosureStep> closureSteps;
};

std::vector<std::vector<Expr>> hessian(const LagrangianModel& model);

// Constant Hessians: exact elimination. Non-constant: exact evaluation at
// deterministic rational sample points, the rank is the maximum over samples
// (degenerate sample points can only underestimate the generic rank). The
// regular set is grown greedily by lowest index, accepting an index when the
// principal block stays invertible; if the greedy block stalls below the rank
// (possible off the symmetric-definite mainstream) RankUndecided is thrown.
HessianSplit hessian_rank(const std::vector<std::vector<Expr>>& w);

MomentaSet momenta(const LagrangianModel& model);

// Inverts pi_a = dL/dA_a for the regular accelerations, exactly:
//   A_a = sum_b (W_reg^-1)_ab (PI_b - k_b - sum_mu W_b,mu A_mu).
// The regular block must be constant (UnsupportedLagrangian otherwise); cross
// terms may keep singular accelerations, which must cancel downstream.
std::map<int, Expr> solve_accelerations(const LagrangianModel& model,
                                        const std::vector<std::vector<Expr>>& w,
                                        const HessianSplit& split, const MomentaSet& momenta);

// Primary constraints, one pair per singular index mu:
//   P_mu  - p_mu(X, V)   (momentum-type)
//   PI_mu - pi_mu(X, V)  (velocity-momentum-type)
// where the right sides are the momentum definitions with regular
// accelerations eliminated. A surviving acceleration or jet in an eliminated
// momentum throws JetLeak: it would re-enter the Hamiltonian.
std::vector<ConstraintRecord> primary_constraints(const LagrangianModel& model,
                                                  const HessianSplit& split,
                                                  const MomentaSet& momenta,
                                                  const std::map<int, Expr>& accel);

// Canonical Hamiltonian on the primary surface:
//   H0 = -L + sum_a P_a V_a + sum_mu p_mu V_mu + sum_a PI_a A_a + sum_mu pi_mu A_mu
// with regular accelerations eliminated everywhere. Must come out free of
// accelerations and jets (HamiltonianNotReduced otherwise).
Expr canonical_hamiltonian(const LagrangianModel& model, const HessianSplit& split,
                           const MomentaSet& momenta, const std::map<int, Expr>& accel);

// Canonical Poisson bracket over the (X, P) and (V, PI) pairs; T and P0 are
// bracket-inert.
Expr poisson_bracket(const Expr& f, const Expr& g);

// Consistency closure: each constraint is bracketed with h0prime; a nonzero
// surface remainder that no primary-constraint bracket can absorb becomes a
// secondary constraint, until nothing new appears. A remainder that reduces
// to a nonzero constant (inconsistent dynamics) or cannot be solved for a
// phase variable throws NonSolvableConstraint; more than 2n constraints
// throws ClosureOverflow.
std::vector<ConstraintRecord> constraint_closure(const Expr& h0prime,
                                                 std::vector<ConstraintRecord> primaries, int n,
                                                 std::vector<ClosureStep>* steps = nullptr);

// First class: all brackets with the full constraint set vanish on the
// surface. Second class otherwise.
void classify(std::vector<ConstraintRecord>& constraints);

// Full pipeline; failures are rethrown with the derivation stage attached.
AnalysisReport analyze(const LagrangianModel& model);

// Surface reduction: substitute every solved constraint into e, repeatedly,
// until fixpoint.
Expr reduce_by_constraints(const Expr& e, const std::vector<ConstraintRecord>& constraints);

}  // namespace fraclag
