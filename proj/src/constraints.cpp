#include "fraclag/constraints.hpp"

#include <algorithm>
#include <deque>

#include "fraclag/parser.hpp"
#include "fraclag/ratmat.hpp"

namespace fraclag {

namespace {

void validate_model(const LagrangianModel& model) {
    if (model.n < 1) throw Error(ErrorCode::InvalidModel, "coordinate count must be >= 1");
    for (const CanonicalVar& v : model.lagrangian.variables()) {
        if (v.kind == VarKind::J || is_momentum(v.kind))
            throw Error(ErrorCode::InvalidModel,
                        "lagrangian must be a function of t, x, v, a; found " + to_string(v));
        if (v.kind != VarKind::T && (v.index < 1 || v.index > model.n))
            throw Error(ErrorCode::IndexOutOfRange,
                        "variable " + to_string(v) + " outside coordinate range 1.." +
                            std::to_string(model.n));
    }
}

}  // namespace

LagrangianModel make_model(std::string name, int n, Expr lagrangian) {
    LagrangianModel model{std::move(name), n, std::move(lagrangian)};
    validate_model(model);
    return model;
}

LagrangianModel make_model(const ModelFile& file) {
    return make_model(file.name.empty() ? "model" : file.name, file.n, file.lagrangian);
}

std::vector<std::vector<Expr>> hessian(const LagrangianModel& model) {
    std::vector<std::vector<Expr>> w(model.n, std::vector<Expr>(model.n));
    for (int i = 1; i <= model.n; ++i)
        for (int j = 1; j <= model.n; ++j)
            w[i - 1][j - 1] = model.lagrangian.diff(var_a(i)).diff(var_a(j));
    return w;
}

namespace {

bool matrix_is_constant(const std::vector<std::vector<Expr>>& w) {
    for (const auto& row : w)
        for (const Expr& e : row)
            if (!e.is_constant()) return false;
    return true;
}

RatMat constant_matrix(const std::vector<std::vector<Expr>>& w) {
    RatMat m(w.size(), std::vector<Rational>(w.size(), Rational(0)));
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j) m[i][j] = w[i][j].constant_term();
    return m;
}

// Deterministic rational sample point for rank probing.
std::map<CanonicalVar, Rational> sample_point(const std::set<CanonicalVar>& vars, int sample) {
    std::map<CanonicalVar, Rational> point;
    long j = 0;
    for (const CanonicalVar& v : vars) {
        point[v] = Rational(3 + 2 * j + 5 * sample, 2 + ((j + 3 * sample) % 7));
        ++j;
    }
    return point;
}

RatMat submatrix(const RatMat& m, const std::vector<int>& idx) {
    RatMat out(idx.size(), std::vector<Rational>(idx.size(), Rational(0)));
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) out[i][j] = m[idx[i] - 1][idx[j] - 1];
    return out;
}

// Greedy lowest-index growth of an invertible principal block.
std::vector<int> greedy_regular(const RatMat& m, int rank) {
    std::vector<int> regular;
    for (int i = 1; i <= static_cast<int>(m.size()); ++i) {
        if (static_cast<int>(regular.size()) == rank) break;
        std::vector<int> candidate = regular;
        candidate.push_back(i);
        if (rank_exact(submatrix(m, candidate)) == static_cast<int>(candidate.size()))
            regular = std::move(candidate);
    }
    if (static_cast<int>(regular.size()) != rank)
        throw Error(ErrorCode::RankUndecided,
                    "no invertible principal block of size " + std::to_string(rank) +
                        " reachable by greedy index growth");
    return regular;
}

}  // namespace

HessianSplit hessian_rank(const std::vector<std::vector<Expr>>& w) {
    int n = static_cast<int>(w.size());
    RatMat probe;
    int rank = 0;
    if (matrix_is_constant(w)) {
        probe = constant_matrix(w);
        rank = rank_exact(probe);
    } else {
        std::set<CanonicalVar> vars;
        for (const auto& row : w)
            for (const Expr& e : row)
                for (const CanonicalVar& v : e.variables()) vars.insert(v);
        for (int sample = 0; sample < 5; ++sample) {
            auto point = sample_point(vars, sample);
            RatMat m(n, std::vector<Rational>(n, Rational(0)));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m[i][j] = w[i][j].eval_exact(point);
            int r = rank_exact(m);
            if (r > rank) {
                rank = r;
                probe = std::move(m);
            }
        }
        if (rank == 0) probe = RatMat(n, std::vector<Rational>(n, Rational(0)));
    }

    HessianSplit split;
    split.rank = rank;
    split.regular = greedy_regular(probe, rank);
    for (int i = 1; i <= n; ++i)
        if (std::find(split.regular.begin(), split.regular.end(), i) == split.regular.end())
            split.singular.push_back(i);
    return split;
}

MomentaSet momenta(const LagrangianModel& model) {
    MomentaSet out;
    for (int i = 1; i <= model.n; ++i) {
        Expr dA = model.lagrangian.diff(var_a(i));
        out.pi.push_back(dA);
        out.p.push_back(model.lagrangian.diff(var_v(i)) - dA.total_time_derivative());
    }
    return out;
}

std::map<int, Expr> solve_accelerations(const LagrangianModel& model,
                                        const std::vector<std::vector<Expr>>& w,
                                        const HessianSplit& split, const MomentaSet& momenta) {
    std::map<int, Expr> solutions;
    if (split.regular.empty()) return solutions;

    RatMat wreg(split.regular.size(), std::vector<Rational>(split.regular.size()));
    for (std::size_t r = 0; r < split.regular.size(); ++r) {
        for (std::size_t c = 0; c < split.regular.size(); ++c) {
            const Expr& entry = w[split.regular[r] - 1][split.regular[c] - 1];
            auto value = entry.as_constant();
            if (!value)
                throw Error(ErrorCode::UnsupportedLagrangian,
                            "regular Hessian block entry (" + std::to_string(split.regular[r]) +
                                "," + std::to_string(split.regular[c]) +
                                ") is not constant: " + render(entry));
            wreg[r][c] = *value;
        }
    }
    RatMat inv = invert_exact(wreg);

    // pi_b = sum_j W_bj A_j + k_b, so the regular accelerations solve
    // A = Wreg^-1 (PI - k - Wcross A_singular).
    std::vector<Expr> rhs;
    for (int b : split.regular) {
        Expr k = momenta.pi[b - 1];
        for (int j = 1; j <= model.n; ++j) k -= w[b - 1][j - 1] * Expr::variable(var_a(j));
        if (k.contains_kind(VarKind::A) || k.contains_kind(VarKind::J))
            throw Error(ErrorCode::UnsupportedLagrangian,
                        "momentum pi" + std::to_string(b) +
                            " is not linear in the accelerations: " + render(momenta.pi[b - 1]));
        Expr r = Expr::variable(var_pi(b)) - k;
        for (int mu : split.singular) r -= w[b - 1][mu - 1] * Expr::variable(var_a(mu));
        rhs.push_back(std::move(r));
    }
    for (std::size_t r = 0; r < split.regular.size(); ++r) {
        Expr sol;
        for (std::size_t c = 0; c < split.regular.size(); ++c)
            sol += rhs[c].scaled(inv[r][c]);
        solutions[split.regular[r]] = std::move(sol);
    }
    return solutions;
}

namespace {

// Solves expr == 0 for a phase variable that appears linearly with constant
// coefficient and nowhere else in the expression. Preference P > PI > X > V,
// lowest index first.
std::pair<CanonicalVar, Expr> solve_constraint(const Expr& expr) {
    auto preference = [](VarKind k) {
        switch (k) {
            case VarKind::P: return 0;
            case VarKind::PI: return 1;
            case VarKind::X: return 2;
            case VarKind::V: return 3;
            default: return 4;
        }
    };
    std::vector<CanonicalVar> candidates;
    for (const CanonicalVar& v : expr.variables())
        if (preference(v.kind) < 4) candidates.push_back(v);
    std::sort(candidates.begin(), candidates.end(),
              [&](const CanonicalVar& a, const CanonicalVar& b) {
                  return std::pair(preference(a.kind), a.index) <
                         std::pair(preference(b.kind), b.index);
              });
    for (const CanonicalVar& v : candidates) {
        if (expr.degree_in(v) != 1) continue;
        Expr coeff = expr.diff(v);
        auto c = coeff.as_constant();
        if (!c || c->is_zero()) continue;
        Expr rest = expr - Expr::variable(v).scaled(*c);
        if (rest.contains(v)) continue;
        return {v, rest.scaled(-c->inverse())};
    }
    throw Error(ErrorCode::NonSolvableConstraint,
                "constraint " + render(expr) +
                    " has no phase variable appearing linearly with constant coefficient");
}

class RuleSet {
public:
    // Adds var -> rhs, keeping every right side free of every solved variable.
    void add(const CanonicalVar& var, Expr rhs) {
        rhs = apply(rhs);
        std::map<CanonicalVar, Expr> self{{var, rhs}};
        for (auto& [lhs, old] : rules_)
            if (old.contains(var)) old = old.substitute(self);
        rules_.emplace(var, std::move(rhs));
    }

    Expr apply(const Expr& e) const { return rules_.empty() ? e : e.substitute(rules_); }

    const std::map<CanonicalVar, Expr>& map() const { return rules_; }

private:
    std::map<CanonicalVar, Expr> rules_;
};

}  // namespace

std::vector<ConstraintRecord> primary_constraints(const LagrangianModel& /*model*/,
                                                  const HessianSplit& split,
                                                  const MomentaSet& momenta,
                                                  const std::map<int, Expr>& accel) {
    std::map<CanonicalVar, Expr> accelRules;
    for (const auto& [idx, sol] : accel) accelRules[var_a(idx)] = sol;

    std::vector<ConstraintRecord> primaries;
    for (int mu : split.singular) {
        Expr p_hat = momenta.p[mu - 1].substitute(accelRules);
        for (const CanonicalVar& v : p_hat.variables())
            if (v.kind == VarKind::A || v.kind == VarKind::J)
                throw Error(ErrorCode::JetLeak, "eliminated momentum p" + std::to_string(mu) +
                                                    " still depends on " + to_string(v) + ": " +
                                                    render(p_hat));
        Expr pi_hat = momenta.pi[mu - 1].substitute(accelRules);
        for (const CanonicalVar& v : pi_hat.variables())
            if (v.kind == VarKind::A || v.kind == VarKind::J)
                throw Error(ErrorCode::JetLeak, "eliminated momentum pi" + std::to_string(mu) +
                                                    " still depends on " + to_string(v) + ": " +
                                                    render(pi_hat));

        ConstraintRecord cp;
        cp.label = "phi_p" + std::to_string(mu);
        cp.origin = ConstraintOrigin::PrimaryP;
        cp.expr = Expr::variable(var_p(mu)) - p_hat;
        cp.solvedVar = var_p(mu);
        cp.solvedRhs = p_hat;
        primaries.push_back(std::move(cp));

        ConstraintRecord cpi;
        cpi.label = "phi_pi" + std::to_string(mu);
        cpi.origin = ConstraintOrigin::PrimaryPi;
        cpi.expr = Expr::variable(var_pi(mu)) - pi_hat;
        cpi.solvedVar = var_pi(mu);
        cpi.solvedRhs = pi_hat;
        primaries.push_back(std::move(cpi));
    }
    return primaries;
}

Expr canonical_hamiltonian(const LagrangianModel& model, const HessianSplit& split,
                           const MomentaSet& momenta, const std::map<int, Expr>& accel) {
    std::map<CanonicalVar, Expr> accelRules;
    for (const auto& [idx, sol] : accel) accelRules[var_a(idx)] = sol;

    Expr h = -model.lagrangian;
    for (int a : split.regular) {
        h += Expr::variable(var_p(a)) * Expr::variable(var_v(a));
        h += Expr::variable(var_pi(a)) * Expr::variable(var_a(a));
    }
    for (int mu : split.singular) {
        h += momenta.p[mu - 1].substitute(accelRules) * Expr::variable(var_v(mu));
        h += momenta.pi[mu - 1].substitute(accelRules) * Expr::variable(var_a(mu));
    }
    h = h.substitute(accelRules);
    for (const CanonicalVar& v : h.variables())
        if (v.kind == VarKind::A || v.kind == VarKind::J)
            throw Error(ErrorCode::HamiltonianNotReduced,
                        "canonical hamiltonian still depends on " + to_string(v));
    return h;
}

Expr poisson_bracket(const Expr& f, const Expr& g) {
    std::set<int> indices;
    for (const Expr* e : {&f, &g})
        for (const CanonicalVar& v : e->variables())
            if (v.kind == VarKind::X || v.kind == VarKind::P || v.kind == VarKind::V ||
                v.kind == VarKind::PI)
                indices.insert(v.index);
    Expr out;
    for (int i : indices) {
        out += f.diff(var_x(i)) * g.diff(var_p(i)) - f.diff(var_p(i)) * g.diff(var_x(i));
        out += f.diff(var_v(i)) * g.diff(var_pi(i)) - f.diff(var_pi(i)) * g.diff(var_v(i));
    }
    return out;
}

std::vector<ConstraintRecord> constraint_closure(const Expr& h0prime,
                                                 std::vector<ConstraintRecord> primaries, int n,
                                                 std::vector<ClosureStep>* steps) {
    std::vector<ConstraintRecord> records = std::move(primaries);
    std::size_t primaryCount = records.size();
    RuleSet rules;
    for (auto& rec : records) rules.add(rec.solvedVar, rec.solvedRhs);

    std::deque<std::size_t> pending;
    for (std::size_t i = 0; i < records.size(); ++i) pending.push_back(i);

    int secondaryCount = 0;
    while (!pending.empty()) {
        std::size_t idx = pending.front();
        pending.pop_front();

        ClosureStep step;
        step.label = records[idx].label;
        step.bracketWithH = poisson_bracket(records[idx].expr, h0prime);
        step.reducedRemainder = rules.apply(step.bracketWithH);
        for (std::size_t j = 0; j < primaryCount; ++j) {
            Expr pb = rules.apply(poisson_bracket(records[idx].expr, records[j].expr));
            if (!pb.is_zero()) step.primaryBrackets.emplace_back(records[j].label, pb);
        }

        if (!step.reducedRemainder.is_zero()) {
            step.absorbed = !step.primaryBrackets.empty();
            if (!step.absorbed) {
                if (step.reducedRemainder.is_constant())
                    throw Error(ErrorCode::NonSolvableConstraint,
                                "consistency of " + records[idx].label +
                                    " reduces to the nonzero constant " +
                                    render(step.reducedRemainder) + "; dynamics inconsistent");
                ConstraintRecord sec;
                sec.label = "sigma" + std::to_string(++secondaryCount);
                sec.origin = ConstraintOrigin::Secondary;
                sec.expr = step.reducedRemainder;
                auto solved = solve_constraint(sec.expr);
                sec.solvedVar = solved.first;
                sec.solvedRhs = solved.second;
                rules.add(sec.solvedVar, sec.solvedRhs);
                step.appendedLabel = sec.label;
                records.push_back(std::move(sec));
                pending.push_back(records.size() - 1);
                if (static_cast<int>(records.size()) > 2 * n)
                    throw Error(ErrorCode::ClosureOverflow,
                                "closure exceeded " + std::to_string(2 * n) + " constraints");
            }
        }
        if (steps) steps->push_back(std::move(step));
    }

    // Publish the inter-reduced solved forms.
    for (auto& rec : records) {
        auto it = rules.map().find(rec.solvedVar);
        if (it != rules.map().end()) rec.solvedRhs = it->second;
    }
    return records;
}

void classify(std::vector<ConstraintRecord>& constraints) {
    RuleSet rules;
    for (const auto& rec : constraints) rules.add(rec.solvedVar, rec.solvedRhs);
    for (auto& a : constraints) {
        bool first = true;
        for (const auto& b : constraints) {
            if (!rules.apply(poisson_bracket(a.expr, b.expr)).is_zero()) {
                first = false;
                break;
            }
        }
        a.cls = first ? ConstraintClass::FirstClass : ConstraintClass::SecondClass;
    }
}

Expr reduce_by_constraints(const Expr& e, const std::vector<ConstraintRecord>& constraints) {
    RuleSet rules;
    for (const auto& rec : constraints) rules.add(rec.solvedVar, rec.solvedRhs);
    return rules.apply(e);
}

namespace {

template <typename F>
auto stage(const char* name, F&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        if (!e.stage().empty()) throw;
        throw Error(e.code(), e.raw_message(), name);
    }
}

}  // namespace

AnalysisReport analyze(const LagrangianModel& model) {
    validate_model(model);
    AnalysisReport report;
    report.model = model;
    report.hessianMatrix = stage("hessian", [&] { return hessian(model); });
    report.split = stage("rank", [&] { return hessian_rank(report.hessianMatrix); });
    report.momenta = stage("momenta", [&] { return momenta(model); });
    report.accelSolutions = stage("acceleration solve", [&] {
        return solve_accelerations(model, report.hessianMatrix, report.split, report.momenta);
    });
    std::vector<ConstraintRecord> primaries = stage("primary constraints", [&] {
        return primary_constraints(model, report.split, report.momenta, report.accelSolutions);
    });
    report.h0 = stage("canonical hamiltonian", [&] {
        return canonical_hamiltonian(model, report.split, report.momenta, report.accelSolutions);
    });
    report.h0prime = Expr::variable(var_p0()) + report.h0;
    report.constraints = stage("closure", [&] {
        return constraint_closure(report.h0prime, primaries, model.n, &report.closureSteps);
    });
    stage("classification", [&] {
        classify(report.constraints);
        return 0;
    });
    return report;
}

}  // namespace fraclag
