#include "fraclag/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace fraclag {

namespace {

struct PrimaryHats {
    std::map<int, Expr> p;   // mu -> p_mu(X, V, P_a, PI_a) on the primary surface
    std::map<int, Expr> pi;  // mu -> pi_mu(...)
};

PrimaryHats primary_hats(const AnalysisReport& report) {
    std::map<CanonicalVar, Expr> accelRules;
    for (const auto& [idx, sol] : report.accelSolutions) accelRules[var_a(idx)] = sol;
    PrimaryHats hats;
    for (int mu : report.split.singular) {
        hats.p[mu] = report.momenta.p[mu - 1].substitute(accelRules);
        hats.pi[mu] = report.momenta.pi[mu - 1].substitute(accelRules);
    }
    return hats;
}

// phi^p_mu = P_mu - p_mu, phi^pi_mu = PI_mu - pi_mu.
struct PrimaryPhis {
    std::map<int, Expr> p, pi;
};

PrimaryPhis primary_phis(const AnalysisReport& report, const PrimaryHats& hats) {
    PrimaryPhis phis;
    for (int mu : report.split.singular) {
        phis.p[mu] = Expr::variable(var_p(mu)) - hats.p.at(mu);
        phis.pi[mu] = Expr::variable(var_pi(mu)) - hats.pi.at(mu);
    }
    return phis;
}

TotalDifferentialEquation make_equation(const AnalysisReport& report, const PrimaryPhis& phis,
                                        const CanonicalVar& target, const CanonicalVar& wrt,
                                        bool momentumForm) {
    TotalDifferentialEquation eq;
    eq.target = target;
    eq.momentumForm = momentumForm;
    Rational s(momentumForm ? -1 : 1);
    eq.dtCoeff = report.h0prime.diff(wrt).scaled(s);
    for (int mu : report.split.singular) {
        Expr cx = phis.p.at(mu).diff(wrt).scaled(s);
        if (!cx.is_zero()) eq.dXmuCoeff[mu] = std::move(cx);
        Expr cv = phis.pi.at(mu).diff(wrt).scaled(s);
        if (!cv.is_zero()) eq.dVmuCoeff[mu] = std::move(cv);
    }
    return eq;
}

}  // namespace

std::vector<TotalDifferentialEquation> derive_equations_of_motion(const AnalysisReport& report) {
    PrimaryHats hats = primary_hats(report);
    PrimaryPhis phis = primary_phis(report, hats);
    std::vector<TotalDifferentialEquation> eqs;
    for (int a : report.split.regular)
        eqs.push_back(make_equation(report, phis, var_x(a), var_p(a), false));
    for (int a : report.split.regular)
        eqs.push_back(make_equation(report, phis, var_v(a), var_pi(a), false));
    for (int i = 1; i <= report.model.n; ++i)
        eqs.push_back(make_equation(report, phis, var_p(i), var_x(i), true));
    for (int i = 1; i <= report.model.n; ++i)
        eqs.push_back(make_equation(report, phis, var_pi(i), var_v(i), true));
    return eqs;
}

ActionForms derive_action_form(const AnalysisReport& report) {
    PrimaryHats hats = primary_hats(report);
    PrimaryPhis phis = primary_phis(report, hats);

    // dS = sum_i P_i dX_i + PI_i dV_i - H0 dt with the regular differentials
    // substituted from their equations and P_mu, PI_mu from the primary
    // surface; the singular differentials stay free.
    ActionForm general;
    general.dtCoeff = -report.h0;
    for (int a : report.split.regular) {
        TotalDifferentialEquation dx = make_equation(report, phis, var_x(a), var_p(a), false);
        TotalDifferentialEquation dv = make_equation(report, phis, var_v(a), var_pi(a), false);
        Expr pa = Expr::variable(var_p(a));
        Expr pia = Expr::variable(var_pi(a));
        general.dtCoeff += pa * dx.dtCoeff + pia * dv.dtCoeff;
        for (int mu : report.split.singular) {
            Expr cx;
            if (dx.dXmuCoeff.count(mu)) cx += pa * dx.dXmuCoeff.at(mu);
            if (dv.dXmuCoeff.count(mu)) cx += pia * dv.dXmuCoeff.at(mu);
            if (!cx.is_zero()) general.dXmuCoeff[mu] += cx;
            Expr cv;
            if (dx.dVmuCoeff.count(mu)) cv += pa * dx.dVmuCoeff.at(mu);
            if (dv.dVmuCoeff.count(mu)) cv += pia * dv.dVmuCoeff.at(mu);
            if (!cv.is_zero()) general.dVmuCoeff[mu] += cv;
        }
    }
    for (int mu : report.split.singular) {
        Expr cx = general.dXmuCoeff.count(mu) ? general.dXmuCoeff.at(mu) : Expr();
        cx += hats.p.at(mu);
        if (cx.is_zero()) general.dXmuCoeff.erase(mu);
        else general.dXmuCoeff[mu] = std::move(cx);
        Expr cv = general.dVmuCoeff.count(mu) ? general.dVmuCoeff.at(mu) : Expr();
        cv += hats.pi.at(mu);
        if (cv.is_zero()) general.dVmuCoeff.erase(mu);
        else general.dVmuCoeff[mu] = std::move(cv);
    }

    // Reduced form: eliminate the second-class pairs.
    std::vector<ConstraintRecord> secondClass;
    for (const auto& rec : report.constraints)
        if (rec.cls == ConstraintClass::SecondClass) secondClass.push_back(rec);
    auto reduce = [&](const Expr& e) { return reduce_by_constraints(e, secondClass); };

    ActionForms forms;
    forms.reduced.dtCoeff = reduce(general.dtCoeff);
    for (const auto& [mu, coeff] : general.dXmuCoeff) {
        Expr r = reduce(coeff);
        if (!r.is_zero()) forms.reduced.dXmuCoeff[mu] = std::move(r);
    }
    for (const auto& [mu, coeff] : general.dVmuCoeff) {
        Expr r = reduce(coeff);
        if (!r.is_zero()) forms.reduced.dVmuCoeff[mu] = std::move(r);
    }
    forms.general = std::move(general);
    return forms;
}

GaugeChoice GaugeChoice::zero(const std::vector<int>& singular) {
    GaugeChoice g;
    for (int mu : singular) {
        g.x[mu] = [](double) { return 0.0; };
        g.v[mu] = [](double) { return 0.0; };
    }
    return g;
}

GaugeChoice GaugeChoice::constant_v(const std::vector<int>& singular, double value) {
    GaugeChoice g;
    for (int mu : singular) {
        g.x[mu] = [](double) { return 0.0; };
        g.v[mu] = [value](double) { return value; };
    }
    return g;
}

GaugeChoice GaugeChoice::named(const std::string& text, const std::vector<int>& singular) {
    if (text == "zero") return zero(singular);
    const std::string prefix = "constant:";
    if (text.rfind(prefix, 0) == 0) {
        try {
            return constant_v(singular, std::stod(text.substr(prefix.size())));
        } catch (const std::exception&) {
            throw Error(ErrorCode::DomainError, "bad gauge constant in '" + text + "'");
        }
    }
    throw Error(ErrorCode::DomainError,
                "unknown gauge '" + text + "' (expected 'zero' or 'constant:<value>')");
}

double Trajectory::max_residual() const {
    double worst = 0.0;
    for (const auto& s : samples) worst = std::max(worst, s.residualMax);
    return worst;
}

namespace {

struct CompiledEquation {
    CanonicalVar target;
    CompiledExpr dtCoeff;
    std::vector<std::pair<int, CompiledExpr>> dXmu, dVmu;
};

class Evaluator {
public:
    Evaluator(const AnalysisReport& report,
              const std::vector<TotalDifferentialEquation>& equations,
              const ActionForm& actionForm, const GaugeChoice& gauge)
        : report_(report), gauge_(gauge) {
        n_ = report.model.n;
        for (const auto& eq : equations) {
            CompiledEquation ce;
            ce.target = eq.target;
            ce.dtCoeff = CompiledExpr(eq.dtCoeff, slots_);
            for (const auto& [mu, coeff] : eq.dXmuCoeff)
                ce.dXmu.emplace_back(mu, CompiledExpr(coeff, slots_));
            for (const auto& [mu, coeff] : eq.dVmuCoeff)
                ce.dVmu.emplace_back(mu, CompiledExpr(coeff, slots_));
            equations_.push_back(std::move(ce));
        }
        actionDt_ = CompiledExpr(actionForm.dtCoeff, slots_);
        for (const auto& [mu, coeff] : actionForm.dXmuCoeff)
            actionDXmu_.emplace_back(mu, CompiledExpr(coeff, slots_));
        for (const auto& [mu, coeff] : actionForm.dVmuCoeff)
            actionDVmu_.emplace_back(mu, CompiledExpr(coeff, slots_));
        for (const auto& rec : report.constraints)
            constraints_.emplace_back(CompiledExpr(rec.expr, slots_));
        h0_ = CompiledExpr(report.h0, slots_);

        // Make sure every state variable has a slot so fill() can write them.
        slots_.slot_of(var_t());
        for (int i = 1; i <= n_; ++i) {
            slots_.slot_of(var_x(i));
            slots_.slot_of(var_v(i));
            slots_.slot_of(var_p(i));
            slots_.slot_of(var_pi(i));
        }
        values_.assign(slots_.size(), 0.0);

        // Evolved state layout: [X_a..., V_a..., P_1..n, PI_1..n].
        for (int a : report.split.regular) layout_.push_back(var_x(a));
        for (int a : report.split.regular) layout_.push_back(var_v(a));
        for (int i = 1; i <= n_; ++i) layout_.push_back(var_p(i));
        for (int i = 1; i <= n_; ++i) layout_.push_back(var_pi(i));
        for (const auto& eq : equations_) {
            auto it = std::find(layout_.begin(), layout_.end(), eq.target);
            if (it == layout_.end())
                throw Error(ErrorCode::DomainError,
                            "equation target " + to_string(eq.target) + " not in evolved state");
            targetIndex_.push_back(static_cast<int>(it - layout_.begin()));
        }
    }

    int state_size() const { return static_cast<int>(layout_.size()); }
    const std::vector<CanonicalVar>& layout() const { return layout_; }

    // Loads t, the evolved state y, and the gauge values into the slot table.
    void fill(double t, const std::vector<double>& y) {
        values_[*slots_.find(var_t())] = t;
        for (std::size_t k = 0; k < layout_.size(); ++k)
            values_[*slots_.find(layout_[k])] = y[k];
        for (int mu : report_.split.singular) {
            values_[*slots_.find(var_x(mu))] = gauge_.x.at(mu)(t);
            values_[*slots_.find(var_v(mu))] = gauge_.v.at(mu)(t);
        }
    }

    double gauge_x_dot(int mu, double t) const {
        const double h = 1e-6;
        return (gauge_.x.at(mu)(t + h) - gauge_.x.at(mu)(t - h)) / (2 * h);
    }
    double gauge_v_dot(int mu, double t) const {
        const double h = 1e-6;
        return (gauge_.v.at(mu)(t + h) - gauge_.v.at(mu)(t - h)) / (2 * h);
    }

    // dy/dt at (t, y); requires fill(t, y) done by the caller.
    void derivative(double t, std::vector<double>& dy) {
        std::fill(dy.begin(), dy.end(), 0.0);
        for (std::size_t e = 0; e < equations_.size(); ++e) {
            double rate = equations_[e].dtCoeff.eval(values_);
            for (const auto& [mu, coeff] : equations_[e].dXmu)
                rate += coeff.eval(values_) * gauge_x_dot(mu, t);
            for (const auto& [mu, coeff] : equations_[e].dVmu)
                rate += coeff.eval(values_) * gauge_v_dot(mu, t);
            dy[targetIndex_[e]] += rate;
        }
    }

    // dS/dt split into the dt part and the gauge part; requires fill().
    std::pair<double, double> action_rates(double t) {
        double dtPart = actionDt_.eval(values_);
        double gaugePart = 0.0;
        for (const auto& [mu, coeff] : actionDXmu_)
            gaugePart += coeff.eval(values_) * gauge_x_dot(mu, t);
        for (const auto& [mu, coeff] : actionDVmu_)
            gaugePart += coeff.eval(values_) * gauge_v_dot(mu, t);
        return {dtPart, gaugePart};
    }

    double residual_max() {
        double worst = 0.0;
        for (const auto& c : constraints_) worst = std::max(worst, std::abs(c.eval(values_)));
        return worst;
    }

    PhasePoint phase_point(double t, const std::vector<double>& y) {
        fill(t, y);
        PhasePoint pt;
        pt.x.resize(n_);
        pt.v.resize(n_);
        pt.p.resize(n_);
        pt.pi.resize(n_);
        for (int i = 1; i <= n_; ++i) {
            pt.x[i - 1] = values_[*slots_.find(var_x(i))];
            pt.v[i - 1] = values_[*slots_.find(var_v(i))];
            pt.p[i - 1] = values_[*slots_.find(var_p(i))];
            pt.pi[i - 1] = values_[*slots_.find(var_pi(i))];
        }
        return pt;
    }

private:
    const AnalysisReport& report_;
    const GaugeChoice& gauge_;
    int n_ = 0;
    VarSlots slots_;
    std::vector<double> values_;
    std::vector<CompiledEquation> equations_;
    std::vector<CanonicalVar> layout_;
    std::vector<int> targetIndex_;
    CompiledExpr actionDt_;
    std::vector<std::pair<int, CompiledExpr>> actionDXmu_, actionDVmu_;
    std::vector<CompiledExpr> constraints_;
    CompiledExpr h0_;
};

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

Trajectory integrate(const AnalysisReport& report,
                     const std::vector<TotalDifferentialEquation>& equations,
                     const ActionForm& actionForm, const GaugeChoice& gauge,
                     const PhasePoint& init, double dt, double tStart, double tEnd) {
    if (!(dt > 0)) throw Error(ErrorCode::DomainError, "step size must be positive");
    if (!(tEnd > tStart)) throw Error(ErrorCode::DomainError, "time interval is empty");
    const int n = report.model.n;
    if (static_cast<int>(init.x.size()) != n || static_cast<int>(init.v.size()) != n ||
        static_cast<int>(init.p.size()) != n || static_cast<int>(init.pi.size()) != n)
        throw Error(ErrorCode::DomainError, "initial point has wrong dimension");
    for (int mu : report.split.singular) {
        if (!gauge.x.count(mu) || !gauge.v.count(mu))
            throw Error(ErrorCode::DomainError,
                        "gauge missing for singular coordinate " + std::to_string(mu));
        if (std::abs(gauge.x.at(mu)(tStart) - init.x[mu - 1]) > 1e-12 ||
            std::abs(gauge.v.at(mu)(tStart) - init.v[mu - 1]) > 1e-12)
            throw Error(ErrorCode::ConstraintViolation,
                        "initial point disagrees with gauge for coordinate " +
                            std::to_string(mu));
    }

    Evaluator ev(report, equations, actionForm, gauge);
    std::vector<double> y(ev.state_size());
    {
        std::size_t k = 0;
        for (const CanonicalVar& var : ev.layout()) {
            double value = 0;
            switch (var.kind) {
                case VarKind::X: value = init.x[var.index - 1]; break;
                case VarKind::V: value = init.v[var.index - 1]; break;
                case VarKind::P: value = init.p[var.index - 1]; break;
                case VarKind::PI: value = init.pi[var.index - 1]; break;
                default: throw Error(ErrorCode::DomainError, "unexpected state variable");
            }
            y[k++] = value;
        }
    }

    ev.fill(tStart, y);
    double residual0 = ev.residual_max();
    if (residual0 > 1e-12)
        throw Error(ErrorCode::ConstraintViolation,
                    "initial point violates the constraint surface (residual " +
                        std::to_string(residual0) + ")");

    Trajectory traj;
    traj.n = n;
    traj.regular = report.split.regular;
    traj.singular = report.split.singular;

    auto record = [&](double t, const std::vector<double>& state, double s, double sGauge) {
        TrajectorySample sample;
        sample.t = t;
        sample.state = ev.phase_point(t, state);
        sample.action = s;
        sample.actionGauge = sGauge;
        sample.residualMax = ev.residual_max();
        traj.samples.push_back(std::move(sample));
    };

    double t = tStart;
    double s = 0, sGauge = 0;
    record(t, y, s, sGauge);

    std::vector<double> k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
    std::vector<double> y1(y.size()), mid(y.size()), f1(y.size());

    while (t < tEnd - 1e-12) {
        double h = std::min(dt, tEnd - t);

        ev.fill(t, y);
        ev.derivative(t, k1);
        auto [g0dt, g0mu] = ev.action_rates(t);

        for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        ev.fill(t + 0.5 * h, tmp);
        ev.derivative(t + 0.5 * h, k2);

        for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        ev.fill(t + 0.5 * h, tmp);
        ev.derivative(t + 0.5 * h, k3);

        for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
        ev.fill(t + h, tmp);
        ev.derivative(t + h, k4);

        for (std::size_t i = 0; i < y.size(); ++i)
            y1[i] = y[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        if (!all_finite(y1)) throw Error(ErrorCode::NumericalBlowup, "state became non-finite");

        ev.fill(t + h, y1);
        ev.derivative(t + h, f1);
        auto [g1dt, g1mu] = ev.action_rates(t + h);

        // Cubic Hermite midpoint state keeps the Simpson update O(h^4).
        for (std::size_t i = 0; i < y.size(); ++i)
            mid[i] = 0.5 * (y[i] + y1[i]) + h / 8.0 * (k1[i] - f1[i]);
        ev.fill(t + 0.5 * h, mid);
        auto [gmdt, gmmu] = ev.action_rates(t + 0.5 * h);

        s += h / 6.0 * (g0dt + 4 * gmdt + g1dt) + h / 6.0 * (g0mu + 4 * gmmu + g1mu);
        sGauge += h / 6.0 * (g0mu + 4 * gmmu + g1mu);
        if (!std::isfinite(s)) throw Error(ErrorCode::NumericalBlowup, "action became non-finite");

        y.swap(y1);
        t += h;
        record(t, y, s, sGauge);
    }
    return traj;
}

double action_along(const Trajectory& trajectory) { return trajectory.action(); }

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
    out << "t";
    for (int i = 1; i <= trajectory.n; ++i) out << ",x" << i;
    for (int i = 1; i <= trajectory.n; ++i) out << ",v" << i;
    for (int i = 1; i <= trajectory.n; ++i) out << ",p" << i;
    for (int i = 1; i <= trajectory.n; ++i) out << ",pi" << i;
    out << ",S,residual_max\n";
    char buf[32];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        out << buf;
    };
    for (const auto& s : trajectory.samples) {
        emit(s.t);
        for (double v : s.state.x) { out << ','; emit(v); }
        for (double v : s.state.v) { out << ','; emit(v); }
        for (double v : s.state.p) { out << ','; emit(v); }
        for (double v : s.state.pi) { out << ','; emit(v); }
        out << ',';
        emit(s.action);
        out << ',';
        emit(s.residualMax);
        out << '\n';
    }
}

}  // namespace fraclag
