// Acceptance gate: nine end-to-end checks, one line each, exit 0 only when
// every one passes. Numeric thresholds are stated inline with each check.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fraclag/constraints.hpp"
#include "fraclag/dynamics.hpp"
#include "fraclag/error.hpp"
#include "fraclag/fraccalc.hpp"
#include "fraclag/kernel.hpp"
#include "fraclag/model_file.hpp"
#include "fraclag/parser.hpp"
#include "fraclag/ratmat.hpp"
#include "fraclag/report.hpp"
#include "fraclag/selfcheck.hpp"

#ifndef FRACLAG_FIXTURE_DIR
#error "FRACLAG_FIXTURE_DIR must be defined by the build"
#endif

using namespace fraclag;

namespace {

const double kPi = std::acos(-1.0);

struct Gate {
    bool all = true;

    void report(int k, bool ok, const std::string& what) {
        std::printf("[%d/9] %s %s\n", k, ok ? "PASS" : "FAIL", what.c_str());
        all = all && ok;
    }

    void run(int k, const std::string& what, const std::function<bool(std::string&)>& body) {
        std::string detail = what;
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = what + " (exception: " + e.what() + ")";
        }
        report(k, ok, detail);
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

LagrangianModel bundled_model() {
    return make_model(load_model_file(std::string(FRACLAG_FIXTURE_DIR) + "/eq25.model"));
}

PhasePoint cosine_init() {
    PhasePoint init;
    init.x = {0, 0, 0};
    init.v = {1, 0, 0};
    init.p = {0, 0, 0};
    init.pi = {0, 0, 0};
    return init;
}

const TotalDifferentialEquation* equation_for(const std::vector<TotalDifferentialEquation>& eqs,
                                              const CanonicalVar& target) {
    for (const auto& eq : eqs)
        if (eq.target == target) return &eq;
    return nullptr;
}

// ---- criterion 4 support: independent variational (jet-space) route ----

struct JetSystem {
    int n = 0;
    std::vector<Expr> j2;        // prolonged equations solved for the deepest jet
    std::vector<double> state;   // x_1..n, v_1..n, a_1..n, j1_1..n
};

double eval_at(const Expr& e, const std::function<double(const CanonicalVar&)>& point) {
    return e.eval(point);
}

// Solves the variational equations dL/dx - d/dt dL/dv + d^2/dt^2 dL/da = 0
// for the deepest jets, then maps canonical initial data onto the jet chart:
//   A(0)  from the velocity-momentum definition,
//   J1(0) from the momentum definition.
JetSystem make_jet_system(const LagrangianModel& m, const PhasePoint& init) {
    int n = m.n;
    auto w = hessian(m);
    RatMat wmat(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) wmat[i][j] = *w[i][j].as_constant();
    RatMat winv = invert_exact(wmat);

    // Residual of each variational equation with the deepest jet removed.
    std::map<CanonicalVar, Expr> dropJ2;
    for (int i = 1; i <= n; ++i) dropJ2[var_j(i, 2)] = Expr();
    std::vector<Expr> residual(n);
    for (int i = 1; i <= n; ++i) {
        Expr el = m.lagrangian.diff(var_x(i)) -
                  m.lagrangian.diff(var_v(i)).total_time_derivative() +
                  m.lagrangian.diff(var_a(i)).total_time_derivative().total_time_derivative();
        residual[i - 1] = el.substitute(dropJ2);
    }

    JetSystem sys;
    sys.n = n;
    sys.j2.resize(n);
    for (int i = 0; i < n; ++i) {
        Expr sol;
        for (int j = 0; j < n; ++j) sol += residual[j].scaled(-winv[i][j]);
        sys.j2[i] = sol;
    }

    // Map the canonical initial point to the jet chart.
    MomentaSet ms = momenta(m);
    auto boundary = [&](const CanonicalVar& v) -> double {
        if (v.kind == VarKind::X) return init.x[v.index - 1];
        if (v.kind == VarKind::V) return init.v[v.index - 1];
        return 0.0;  // A and J contributions handled via the linear solve
    };

    // pi_i = sum_j W_ij A_j + k_i(x, v): strip the A part, solve for A.
    std::map<CanonicalVar, Expr> dropA;
    for (int i = 1; i <= n; ++i) dropA[var_a(i)] = Expr();
    std::vector<double> accel(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double rhs = 0;
        for (int j = 0; j < n; ++j) {
            double k_j = eval_at(ms.pi[j].substitute(dropA), boundary);
            rhs += winv[i][j].to_double() * (init.pi[j] - k_j);
        }
        accel[i] = rhs;
    }

    // p_i = dL/dv_i - d/dt dL/da_i, linear in J1 with coefficient -W.
    std::map<CanonicalVar, Expr> dropJ1;
    for (int i = 1; i <= n; ++i) dropJ1[var_j(i, 1)] = Expr();
    auto withAccel = [&](const CanonicalVar& v) -> double {
        if (v.kind == VarKind::X) return init.x[v.index - 1];
        if (v.kind == VarKind::V) return init.v[v.index - 1];
        if (v.kind == VarKind::A) return accel[v.index - 1];
        return 0.0;
    };
    std::vector<double> jet1(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double rhs = 0;
        for (int j = 0; j < n; ++j) {
            double pFree = eval_at(ms.p[j].substitute(dropJ1), withAccel);
            rhs += winv[i][j].to_double() * (pFree - init.p[j]);
        }
        jet1[i] = rhs;
    }

    sys.state.resize(4 * n);
    for (int i = 0; i < n; ++i) {
        sys.state[i] = init.x[i];
        sys.state[n + i] = init.v[i];
        sys.state[2 * n + i] = accel[i];
        sys.state[3 * n + i] = jet1[i];
    }
    return sys;
}

void jet_step(JetSystem& sys, double h) {
    int n = sys.n;
    auto deriv = [&](const std::vector<double>& s) {
        auto at = [&](const CanonicalVar& v) -> double {
            switch (v.kind) {
                case VarKind::X: return s[v.index - 1];
                case VarKind::V: return s[n + v.index - 1];
                case VarKind::A: return s[2 * n + v.index - 1];
                case VarKind::J: return v.jet == 1 ? s[3 * n + v.index - 1] : 0.0;
                default: return 0.0;
            }
        };
        std::vector<double> d(4 * n);
        for (int i = 0; i < n; ++i) {
            d[i] = s[n + i];
            d[n + i] = s[2 * n + i];
            d[2 * n + i] = s[3 * n + i];
            d[3 * n + i] = eval_at(sys.j2[i], at);
        }
        return d;
    };
    auto axpy = [&](const std::vector<double>& s, double c, const std::vector<double>& d) {
        std::vector<double> out(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] + c * d[i];
        return out;
    };
    auto k1 = deriv(sys.state);
    auto k2 = deriv(axpy(sys.state, h / 2, k1));
    auto k3 = deriv(axpy(sys.state, h / 2, k2));
    auto k4 = deriv(axpy(sys.state, h, k3));
    for (std::size_t i = 0; i < sys.state.size(); ++i)
        sys.state[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

// Random regular (invertible Hessian) quadratic second-order Lagrangian.
LagrangianModel random_regular_model(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> diag(0, 4);
    std::uniform_int_distribution<int> small(0, 5);
    std::uniform_int_distribution<int> coin(0, 2);
    const Rational diagChoices[5] = {Rational(1), Rational(2), Rational(1, 2), Rational(-1),
                                     Rational(-2)};
    const Rational smallChoices[6] = {Rational(1),     Rational(-1),    Rational(1, 2),
                                      Rational(-1, 2), Rational(2),     Rational(-2)};

    for (;;) {
        Expr lag;
        for (int i = 1; i <= n; ++i) {
            Expr ai = Expr::variable(var_a(i));
            lag += (ai * ai).scaled(diagChoices[diag(rng)] * Rational(1, 2));
        }
        if (n == 2 && coin(rng) == 0)
            lag += (Expr::variable(var_a(1)) * Expr::variable(var_a(2)))
                       .scaled(smallChoices[small(rng)] * Rational(1, 2));

        std::vector<CanonicalVar> lows;
        for (int i = 1; i <= n; ++i) {
            lows.push_back(var_x(i));
            lows.push_back(var_v(i));
        }
        for (std::size_t a = 0; a < lows.size(); ++a)
            for (std::size_t b = a; b < lows.size(); ++b)
                if (coin(rng) == 0)
                    lag += (Expr::variable(lows[a]) * Expr::variable(lows[b]))
                               .scaled(smallChoices[small(rng)] * Rational(1, 2));
        for (int i = 1; i <= n; ++i)
            for (std::size_t b = 0; b < lows.size(); ++b)
                if (coin(rng) == 0 && coin(rng) == 0)
                    lag += (Expr::variable(var_a(i)) * Expr::variable(lows[b]))
                               .scaled(smallChoices[small(rng)] * Rational(1, 2));

        if (lag.is_zero()) continue;
        LagrangianModel m = make_model("random-regular", n, lag);
        HessianSplit split = hessian_rank(hessian(m));
        if (split.rank == n) return m;
    }
}

}  // namespace

int main() {
    Gate gate;

    // 1: the bundled model's symbolic derivation, exactly.
    gate.run(1, "bundled-model derivation reproduced exactly", [&](std::string& detail) {
        auto start = std::chrono::steady_clock::now();
        DerivationDocument doc = derive_document(bundled_model());
        const AnalysisReport& rep = doc.analysis;

        bool ok = rep.split.regular == std::vector<int>{1, 2} &&
                  rep.split.singular == std::vector<int>{3};

        ok = ok && rep.momenta.p[0] == parse("-v1 - j1_1", 3) &&
             rep.momenta.p[1] == parse("-v2 - j2_1", 3) && rep.momenta.p[2].is_zero() &&
             rep.momenta.pi[0] == parse("a1", 3) && rep.momenta.pi[1] == parse("a2", 3) &&
             rep.momenta.pi[2] == parse("v3", 3);

        ok = ok && rep.constraints.size() == 3;
        if (ok) {
            ok = rep.constraints[0].expr == parse("p3", 3) &&
                 rep.constraints[1].expr == parse("pi3 - v3", 3) &&
                 rep.constraints[2].expr == parse("x3", 3) &&
                 rep.constraints[2].origin == ConstraintOrigin::Secondary;
            ok = ok && rep.constraints[0].cls == ConstraintClass::SecondClass &&
                 rep.constraints[1].cls == ConstraintClass::FirstClass &&
                 rep.constraints[2].cls == ConstraintClass::SecondClass;
        }

        Expr h0 = parse(
            "-1/2*x3^2 + 1/2*v1^2 + 1/2*v2^2 + v1*p1 + v2*p2 + 1/2*pi1^2 + 1/2*pi2^2", 3);
        ok = ok && rep.h0 == h0 && rep.h0prime == h0 + parse("p0", 3);

        ok = ok && doc.equations.size() == 10;
        auto plain_dt = [&](const CanonicalVar& target, const Expr& want) {
            const auto* eq = equation_for(doc.equations, target);
            return eq && eq->dtCoeff == want && eq->dXmuCoeff.empty() && eq->dVmuCoeff.empty();
        };
        ok = ok && plain_dt(var_x(1), parse("v1", 3)) && plain_dt(var_x(2), parse("v2", 3)) &&
             plain_dt(var_v(1), parse("pi1", 3)) && plain_dt(var_v(2), parse("pi2", 3)) &&
             plain_dt(var_p(1), Expr()) && plain_dt(var_p(2), Expr()) &&
             plain_dt(var_p(3), parse("x3", 3)) &&
             plain_dt(var_pi(1), parse("-p1 - v1", 3)) &&
             plain_dt(var_pi(2), parse("-p2 - v2", 3));
        const auto* dpi1 = equation_for(doc.equations, var_pi(1));
        ok = ok && dpi1 && dpi1->momentumForm;
        const auto* dpi3 = equation_for(doc.equations, var_pi(3));
        ok = ok && dpi3 && dpi3->dtCoeff.is_zero() && dpi3->dXmuCoeff.empty() &&
             dpi3->dVmuCoeff.size() == 1 && dpi3->dVmuCoeff.count(3) == 1 &&
             dpi3->dVmuCoeff.at(3) == parse("1", 3);

        double dt = seconds_since(start);
        ok = ok && dt < 1.0;
        char buf[64];
        std::snprintf(buf, sizeof(buf), " (%.3f s, budget 1 s)", dt);
        detail += buf;
        return ok;
    });

    // 2: the closure adds exactly one secondary constraint, then stops.
    gate.run(2, "closure appends one secondary constraint and terminates",
             [&](std::string& detail) {
                 auto start = std::chrono::steady_clock::now();
                 AnalysisReport rep = analyze(bundled_model());
                 int secondaries = 0;
                 for (const auto& rec : rep.constraints)
                     if (rec.origin == ConstraintOrigin::Secondary) ++secondaries;
                 int appended = 0;
                 for (const auto& step : rep.closureSteps)
                     if (!step.appendedLabel.empty()) ++appended;
                 bool ok = secondaries == 1 && appended == 1 && rep.constraints.size() == 3;
                 double dt = seconds_since(start);
                 ok = ok && dt < 1.0;
                 char buf[64];
                 std::snprintf(buf, sizeof(buf), " (%.3f s, budget 1 s)", dt);
                 detail += buf;
                 return ok;
             });

    // 3: Poisson bracket identities, exact, on random triples.
    gate.run(3, "poisson identities exact on 120 random triples", [&](std::string& detail) {
        auto start = std::chrono::steady_clock::now();
        int bad = 0;
        const int trials = 120;
        for (int i = 0; i < trials; ++i) {
            Expr f = random_polynomial(5000 + 3 * i, 3, 3);
            Expr g = random_polynomial(5001 + 3 * i, 3, 3);
            Expr h = random_polynomial(5002 + 3 * i, 3, 3);
            if (!(poisson_bracket(f, g) + poisson_bracket(g, f)).is_zero()) ++bad;
            if (!(poisson_bracket(f, g * h) - poisson_bracket(f, g) * h -
                  g * poisson_bracket(f, h))
                     .is_zero())
                ++bad;
            if (!(poisson_bracket(f, poisson_bracket(g, h)) +
                  poisson_bracket(g, poisson_bracket(h, f)) +
                  poisson_bracket(h, poisson_bracket(f, g)))
                     .is_zero())
                ++bad;
        }
        double dt = seconds_since(start);
        char buf[80];
        std::snprintf(buf, sizeof(buf), " (%d failures, %.2f s, budget 10 s)", bad, dt);
        detail += buf;
        return bad == 0 && dt < 10.0;
    });

    // 4: canonical flow vs the independent variational route on random
    // regular quadratic models.
    gate.run(4, "canonical flow matches the variational route on 20 random regular models",
             [&](std::string& detail) {
                 double worst = 0;
                 std::mt19937_64 rng(424242);
                 std::uniform_int_distribution<int> eighth(-8, 8);
                 for (int trial = 0; trial < 20; ++trial) {
                     int n = 1 + trial % 2;
                     LagrangianModel m = random_regular_model(90000 + trial, n);
                     DerivationDocument doc = derive_document(m);

                     PhasePoint init;
                     init.x.resize(n);
                     init.v.resize(n);
                     init.p.resize(n);
                     init.pi.resize(n);
                     for (int i = 0; i < n; ++i) {
                         init.x[i] = eighth(rng) / 8.0;
                         init.v[i] = eighth(rng) / 8.0;
                         init.p[i] = eighth(rng) / 8.0;
                         init.pi[i] = eighth(rng) / 8.0;
                     }

                     double dt = 1e-3, tEnd = 1.0;
                     Trajectory traj = integrate(doc.analysis, doc.equations,
                                                 doc.actionForms.general, GaugeChoice{}, init, dt,
                                                 0.0, tEnd);
                     JetSystem jet = make_jet_system(m, init);
                     std::size_t sample = 0;
                     double t = 0;
                     auto compare = [&]() {
                         const PhasePoint& s = traj.samples[sample].state;
                         for (int i = 0; i < n; ++i) {
                             worst = std::max(worst, std::abs(s.x[i] - jet.state[i]));
                             worst = std::max(worst, std::abs(s.v[i] - jet.state[n + i]));
                         }
                     };
                     compare();
                     while (t < tEnd - 1e-12) {
                         double h = std::min(dt, tEnd - t);
                         jet_step(jet, h);
                         t += h;
                         ++sample;
                         compare();
                     }
                 }
                 char buf[64];
                 std::snprintf(buf, sizeof(buf), " (max deviation %.2e, budget 1e-6)", worst);
                 detail += buf;
                 return worst <= 1e-6;
             });

    // 5: bundled-model dynamics: endpoint values, conserved quantities,
    // constraint residuals.
    gate.run(5, "bundled-model trajectory endpoints, drifts, and residuals",
             [&](std::string& detail) {
                 DerivationDocument doc = derive_document(bundled_model());
                 GaugeChoice gauge = GaugeChoice::zero(doc.analysis.split.singular);

                 Trajectory quarter =
                     integrate(doc.analysis, doc.equations, doc.actionForms.general, gauge,
                               cosine_init(), 1e-3, 0.0, kPi / 2);
                 const PhasePoint& end = quarter.samples.back().state;
                 double vErr = std::abs(end.v[0] - 0.0);
                 double piErr = std::abs(end.pi[0] - (-1.0));

                 Trajectory full =
                     integrate(doc.analysis, doc.equations, doc.actionForms.general, gauge,
                               cosine_init(), 1e-3, 0.0, 2 * kPi);
                 double pDrift = 0, hDrift = 0;
                 auto h0At = [&](const TrajectorySample& s) {
                     auto value = [&](const CanonicalVar& v) -> double {
                         int i = v.index - 1;
                         switch (v.kind) {
                             case VarKind::X: return s.state.x[i];
                             case VarKind::V: return s.state.v[i];
                             case VarKind::P: return s.state.p[i];
                             case VarKind::PI: return s.state.pi[i];
                             default: return 0.0;
                         }
                     };
                     return doc.analysis.h0.eval(value);
                 };
                 double h0Start = h0At(full.samples.front());
                 for (const auto& s : full.samples) {
                     pDrift = std::max(pDrift, std::abs(s.state.p[0]));
                     hDrift = std::max(hDrift, std::abs(h0At(s) - h0Start));
                 }
                 double residual = full.max_residual();

                 bool ok = vErr <= 1e-8 && piErr <= 1e-8 && pDrift <= 1e-12 && hDrift <= 1e-8 &&
                           residual <= 1e-9;
                 char buf[160];
                 std::snprintf(buf, sizeof(buf),
                               " (v %.1e, pi %.1e, p drift %.1e, h drift %.1e, residual %.1e)",
                               vErr, piErr, pDrift, hDrift, residual);
                 detail += buf;
                 return ok;
             });

    // 6: closed-form action values on the cosine trajectory.
    gate.run(6, "action values at the quarter and half period", [&](std::string& detail) {
        DerivationDocument doc = derive_document(bundled_model());
        GaugeChoice gauge = GaugeChoice::zero(doc.analysis.split.singular);
        Trajectory quarter = integrate(doc.analysis, doc.equations, doc.actionForms.general,
                                       gauge, cosine_init(), 1e-3, 0.0, kPi / 4);
        Trajectory half = integrate(doc.analysis, doc.equations, doc.actionForms.general, gauge,
                                    cosine_init(), 1e-3, 0.0, kPi / 2);
        double errQ = std::abs(quarter.action() - (-0.25));
        double errH = std::abs(half.action() - 0.0);
        char buf[96];
        std::snprintf(buf, sizeof(buf), " (S(T/8) err %.1e, S(T/4) err %.1e, budget 1e-6)", errQ,
                      errH);
        detail += buf;
        return errQ <= 1e-6 && errH <= 1e-6;
    });

    // 7: the discretized action is stationary on the classical path and not
    // on a perturbed one.
    gate.run(7, "discretized action stationary exactly on the classical path",
             [&](std::string& detail) {
                 DerivationDocument doc = derive_document(bundled_model());
                 ReducedLagrangian red = reduce_for_kernel(doc.analysis);
                 GaugeChoice gauge = GaugeChoice::zero(doc.analysis.split.singular);

                 int slices = 200;
                 double tEnd = kPi / 4;
                 double gridDt = tEnd / slices;
                 int stride = std::max(1, static_cast<int>(std::ceil(gridDt / 1e-3)));
                 Trajectory traj =
                     integrate(doc.analysis, doc.equations, doc.actionForms.general, gauge,
                               cosine_init(), gridDt / stride, 0.0, tEnd);

                 PathGrid grid;
                 grid.tStart = 0;
                 grid.tEnd = tEnd;
                 grid.slices = slices;
                 grid.coords = red.coords;
                 grid.nodes.assign(red.coords.size(), std::vector<double>(slices + 1, 0.0));
                 grid.xStart.assign(red.coords.size(), 0.0);
                 for (std::size_t c = 0; c < red.coords.size(); ++c)
                     for (int k = 0; k <= slices; ++k)
                         grid.nodes[c][k] =
                             traj.samples[static_cast<std::size_t>(k) * stride].state
                                 .v[red.coords[c] - 1];

                 double onPath = stationary_phase_check(red, grid);
                 for (int k = 0; k <= slices; ++k)
                     grid.nodes[0][k] += 0.1 * std::sin(kPi * k / slices);
                 double offPath = stationary_phase_check(red, grid);

                 char buf[96];
                 std::snprintf(buf, sizeof(buf), " (on path %.1e < 1e-6, perturbed %.1e > 1e-3)",
                               onPath, offPath);
                 detail += buf;
                 return onPath < 1e-6 && offPath > 1e-3;
             });

    // 8: Gaussian kernel against the damped-quadrature oracle, plus
    // first-order grid refinement of the discretized action.
    gate.run(8, "gaussian kernel matches quadrature; refinement ratio is first order",
             [&](std::string& detail) {
                 LagrangianModel m =
                     make_model("harmonic", 1, parse("1/2*a1^2 - 1/2*v1^2", 1));
                 AnalysisReport rep = analyze(m);
                 ReducedLagrangian red = reduce_for_kernel(rep);

                 PathGrid grid;
                 grid.tStart = 0;
                 grid.tEnd = 1.0;
                 grid.slices = 4;  // 3 interior nodes
                 grid.coords = red.coords;
                 grid.nodes.assign(1, std::vector<double>(5, 0.0));
                 grid.nodes[0][0] = 0.3;
                 grid.nodes[0][4] = -0.2;
                 grid.xStart.assign(1, 0.0);
                 QuadraticActionMatrix qam = discretize_action(red, grid);
                 std::complex<double> gauss = gaussian_kernel_eval(qam);
                 std::complex<double> quad = oscillatory_kernel_quadrature(qam);
                 double rel = std::abs(gauss - quad) / std::abs(gauss);

                 auto actionAt = [&](int slices) {
                     PathGrid g;
                     g.tStart = 0;
                     g.tEnd = kPi / 4;
                     g.slices = slices;
                     g.coords = red.coords;
                     g.nodes.assign(1, std::vector<double>(slices + 1, 0.0));
                     g.xStart.assign(1, 0.0);
                     for (int k = 0; k <= slices; ++k) g.nodes[0][k] = std::cos(g.dt() * k);
                     return discretized_action(red, g);
                 };
                 double s1 = actionAt(16), s2 = actionAt(32), s3 = actionAt(64);
                 double ratio = (s1 - s2) / (s2 - s3);

                 char buf[96];
                 std::snprintf(buf, sizeof(buf),
                               " (rel err %.1e, budget 1e-6; ratio %.3f in [1.8, 2.2])", rel,
                               ratio);
                 detail += buf;
                 return rel <= 1e-6 && ratio >= 1.8 && ratio <= 2.2;
             });

    // 9: fractional-operator closed forms, order-1 reductions, linearity.
    gate.run(9, "fractional operators: closed forms, reductions, linearity",
             [&](std::string& detail) {
                 auto sq = [](double t) { return t * t; };
                 double conf = conformal_derivative(sq, 0.5, 1.0);
                 double confErr = std::abs(conf - 2.0);

                 auto one = [](double) { return 1.0; };
                 double rl = rl_left_derivative(one, 0.5, 0.0, 1.0);
                 double rlErr = std::abs(rl - 1.0 / std::sqrt(kPi));

                 auto f = [](double t) { return std::sin(t); };
                 double h = 1e-5;
                 double central = (f(0.7 + h) - f(0.7 - h)) / (2 * h);
                 double redErr =
                     std::max(std::abs(conformal_derivative(f, 1.0, 0.7) - central),
                              std::abs(rl_left_derivative(f, 1.0, 0.0, 0.7) - central));

                 auto g = [](double t) { return t * t * std::exp(-t); };
                 auto combo = [&](double t) { return 2.0 * f(t) + 3.0 * g(t); };
                 double linConf =
                     std::abs(conformal_derivative(combo, 0.5, 0.9) -
                              2.0 * conformal_derivative(f, 0.5, 0.9) -
                              3.0 * conformal_derivative(g, 0.5, 0.9));
                 double linRl = std::abs(rl_left_derivative(combo, 0.5, 0.0, 0.9) -
                                         2.0 * rl_left_derivative(f, 0.5, 0.0, 0.9) -
                                         3.0 * rl_left_derivative(g, 0.5, 0.0, 0.9));
                 double lin = std::max(linConf, linRl);

                 bool ok = confErr <= 1e-4 && rlErr <= 1e-6 && redErr <= 1e-6 && lin <= 1e-8;
                 char buf[128];
                 std::snprintf(buf, sizeof(buf),
                               " (conformal %.1e, rl %.1e, order-1 %.1e, linearity %.1e)",
                               confErr, rlErr, redErr, lin);
                 detail += buf;
                 return ok;
             });

    if (!gate.all) std::printf("acceptance: FAIL\n");
    else std::printf("acceptance: PASS\n");
    return gate.all ? 0 : 1;
}
