#include "fraclag/report.hpp"

#include <json.hpp>

#include <sstream>

#include "fraclag/parser.hpp"

namespace fraclag {

DerivationDocument derive_document(const LagrangianModel& model) {
    DerivationDocument doc;
    doc.analysis = analyze(model);
    doc.equations = derive_equations_of_motion(doc.analysis);
    doc.actionForms = derive_action_form(doc.analysis);
    return doc;
}

namespace {

// Renders "<coeff> <differential>" with the parenthesization of the source
// presentation: bare for a single positive monomial, parenthesized otherwise.
std::string coeff_piece(const Expr& coeff, const std::string& differential) {
    if (coeff.is_constant()) {
        Rational c = coeff.constant_term();
        if (c.is_one()) return differential;
        if (c == Rational(-1)) return "-" + differential;
        return c.str() + " " + differential;
    }
    std::string text = render(coeff);
    bool simple = coeff.terms().size() == 1 && coeff.terms().begin()->second.sign() > 0;
    return simple ? text + " " + differential : "(" + text + ") " + differential;
}

std::string join_form(const Expr& dtCoeff, const std::map<int, Expr>& dXmu,
                      const std::map<int, Expr>& dVmu) {
    std::vector<std::string> pieces;
    if (!dtCoeff.is_zero()) pieces.push_back(coeff_piece(dtCoeff, "dt"));
    for (const auto& [mu, coeff] : dXmu)
        if (!coeff.is_zero()) pieces.push_back(coeff_piece(coeff, "dx" + std::to_string(mu)));
    for (const auto& [mu, coeff] : dVmu)
        if (!coeff.is_zero()) pieces.push_back(coeff_piece(coeff, "dv" + std::to_string(mu)));
    if (pieces.empty()) return "0";
    std::string out = pieces[0];
    for (std::size_t i = 1; i < pieces.size(); ++i) {
        if (pieces[i].rfind("-", 0) == 0)
            out += " - " + pieces[i].substr(1);
        else
            out += " + " + pieces[i];
    }
    return out;
}

std::size_t count_minus(const std::string& s) {
    std::size_t c = 0;
    for (char ch : s)
        if (ch == '-') ++c;
    return c;
}

std::string origin_name(ConstraintOrigin origin) {
    switch (origin) {
        case ConstraintOrigin::PrimaryP: return "primary-p";
        case ConstraintOrigin::PrimaryPi: return "primary-pi";
        case ConstraintOrigin::Secondary: return "secondary";
    }
    return "?";
}

std::string class_name(ConstraintClass cls) {
    switch (cls) {
        case ConstraintClass::FirstClass: return "first-class";
        case ConstraintClass::SecondClass: return "second-class";
        case ConstraintClass::Unclassified: return "unclassified";
    }
    return "?";
}

// Constraints read momentum-first (pi3 - v3, not -v3 + pi3): the momentum
// monomials lead, the rest follows with its signs intact.
std::string constraint_text(const Expr& expr) {
    Expr momentumPart, rest;
    for (const auto& [m, c] : expr.terms()) {
        bool hasMomentum = false;
        for (const auto& [var, exp] : m.factors())
            if (is_momentum(var.kind)) hasMomentum = true;
        (hasMomentum ? momentumPart : rest).add_term(m, c);
    }
    if (momentumPart.is_zero()) return render(rest);
    if (rest.is_zero()) return render(momentumPart);
    std::string head = render(momentumPart);
    std::string tail = render(rest);
    if (tail.rfind("-", 0) == 0) return head + " - " + tail.substr(1);
    return head + " + " + tail;
}

}  // namespace

std::string render_equation(const TotalDifferentialEquation& eq) {
    std::string positive = join_form(eq.dtCoeff, eq.dXmuCoeff, eq.dVmuCoeff);
    std::string lhs = "d" + to_string(eq.target);
    if (!eq.momentumForm || positive == "0") return lhs + " = " + positive;

    std::map<int, Expr> nx, nv;
    for (const auto& [mu, coeff] : eq.dXmuCoeff) nx[mu] = -coeff;
    for (const auto& [mu, coeff] : eq.dVmuCoeff) nv[mu] = -coeff;
    std::string negative = join_form(-eq.dtCoeff, nx, nv);
    if (count_minus(positive) < count_minus(negative)) return lhs + " = " + positive;
    return "-" + lhs + " = " + negative;
}

std::string render_action_form(const ActionForm& form) {
    return "ds = " + join_form(form.dtCoeff, form.dXmuCoeff, form.dVmuCoeff);
}

std::string render_text_report(const DerivationDocument& doc) {
    const AnalysisReport& a = doc.analysis;
    std::ostringstream out;
    out << "derivation report for model " << a.model.name << "\n";
    out << "n = " << a.model.n << "\n";
    out << "lagrangian = " << render(a.model.lagrangian) << "\n";

    out << "\n[acceleration hessian]\n";
    for (const auto& row : a.hessianMatrix) {
        out << " ";
        for (const Expr& e : row) out << " " << render(e);
        out << "\n";
    }
    out << "rank = " << a.split.rank << "\n";
    out << "regular coordinates:";
    for (int i : a.split.regular) out << " " << i;
    out << "\nsingular coordinates:";
    for (int mu : a.split.singular) out << " " << mu;
    out << "\n";

    out << "\n[momentum definition]\n";
    for (int i = 1; i <= a.model.n; ++i)
        out << "p" << i << " = " << render(a.momenta.p[i - 1]) << "\n";
    for (int i = 1; i <= a.model.n; ++i)
        out << "pi" << i << " = " << render(a.momenta.pi[i - 1]) << "\n";

    if (!a.accelSolutions.empty()) {
        out << "\n[acceleration solve]\n";
        for (const auto& [idx, sol] : a.accelSolutions)
            out << "a" << idx << " = " << render(sol) << "\n";
    }

    out << "\n[primary constraint]\n";
    if (a.constraints.empty()) out << "constraints: none\n";
    for (const auto& rec : a.constraints)
        if (rec.origin != ConstraintOrigin::Secondary)
            out << rec.label << ": " << constraint_text(rec.expr) << " = 0\n";

    out << "\n[canonical hamiltonian]\n";
    out << "h0 = " << render(a.h0) << "\n";
    out << "h0' = " << render(a.h0prime) << "\n";

    out << "\n[closure]\n";
    for (const auto& step : a.closureSteps) {
        out << "{" << step.label << ", h0'} = " << render(step.bracketWithH);
        if (!(step.reducedRemainder == step.bracketWithH))
            out << "  ->  " << render(step.reducedRemainder) << " on the surface";
        out << "\n";
        if (step.absorbed) {
            out << "  absorbed by";
            for (const auto& [label, bracket] : step.primaryBrackets) out << " " << label;
            out << " (multiplier fixed)\n";
        } else if (!step.appendedLabel.empty()) {
            out << "  secondary: " << constraint_text(step.reducedRemainder) << " ("
                << step.appendedLabel << ")\n";
        }
    }
    bool anySecondary = false;
    for (const auto& rec : a.constraints)
        if (rec.origin == ConstraintOrigin::Secondary) anySecondary = true;
    if (anySecondary) {
        out << "\n[secondary constraint]\n";
        for (const auto& rec : a.constraints)
            if (rec.origin == ConstraintOrigin::Secondary)
                out << rec.label << ": " << constraint_text(rec.expr) << " = 0\n";
    }

    out << "\n[classification]\n";
    if (a.constraints.empty()) out << "none\n";
    for (const auto& rec : a.constraints)
        out << class_name(rec.cls) << ": " << constraint_text(rec.expr) << "\n";

    out << "\n[equation of motion]\n";
    for (const auto& eq : doc.equations) out << render_equation(eq) << "\n";

    out << "\n[action differential]\n";
    out << render_action_form(doc.actionForms.general) << "\n";
    out << "reduced: " << render_action_form(doc.actionForms.reduced) << "\n";
    return out.str();
}

namespace {

nlohmann::json json_equation(const TotalDifferentialEquation& eq) {
    nlohmann::json j;
    j["target"] = to_string(eq.target);
    j["dt"] = render(eq.dtCoeff);
    nlohmann::json dx = nlohmann::json::object(), dv = nlohmann::json::object();
    for (const auto& [mu, coeff] : eq.dXmuCoeff) dx["dx" + std::to_string(mu)] = render(coeff);
    for (const auto& [mu, coeff] : eq.dVmuCoeff) dv["dv" + std::to_string(mu)] = render(coeff);
    j["dx_mu"] = dx;
    j["dv_mu"] = dv;
    j["text"] = render_equation(eq);
    return j;
}

nlohmann::json json_action_form(const ActionForm& form) {
    nlohmann::json j;
    j["dt"] = render(form.dtCoeff);
    nlohmann::json dx = nlohmann::json::object(), dv = nlohmann::json::object();
    for (const auto& [mu, coeff] : form.dXmuCoeff) dx["dx" + std::to_string(mu)] = render(coeff);
    for (const auto& [mu, coeff] : form.dVmuCoeff) dv["dv" + std::to_string(mu)] = render(coeff);
    j["dx_mu"] = dx;
    j["dv_mu"] = dv;
    j["text"] = render_action_form(form);
    return j;
}

}  // namespace

std::string render_json_report(const DerivationDocument& doc) {
    const AnalysisReport& a = doc.analysis;
    nlohmann::json j;
    j["model"] = {{"name", a.model.name},
                  {"n", a.model.n},
                  {"lagrangian", render(a.model.lagrangian)}};
    nlohmann::json w = nlohmann::json::array();
    for (const auto& row : a.hessianMatrix) {
        nlohmann::json r = nlohmann::json::array();
        for (const Expr& e : row) r.push_back(render(e));
        w.push_back(r);
    }
    j["hessian"] = w;
    j["rank"] = a.split.rank;
    j["regular"] = a.split.regular;
    j["singular"] = a.split.singular;
    nlohmann::json momenta = nlohmann::json::object();
    for (int i = 1; i <= a.model.n; ++i) {
        momenta["p" + std::to_string(i)] = render(a.momenta.p[i - 1]);
        momenta["pi" + std::to_string(i)] = render(a.momenta.pi[i - 1]);
    }
    j["momenta"] = momenta;
    nlohmann::json accel = nlohmann::json::object();
    for (const auto& [idx, sol] : a.accelSolutions)
        accel["a" + std::to_string(idx)] = render(sol);
    j["accel_solutions"] = accel;
    j["h0"] = render(a.h0);
    j["h0_prime"] = render(a.h0prime);
    nlohmann::json constraints = nlohmann::json::array();
    for (const auto& rec : a.constraints) {
        constraints.push_back({{"label", rec.label},
                               {"origin", origin_name(rec.origin)},
                               {"class", class_name(rec.cls)},
                               {"expr", render(rec.expr)},
                               {"display", constraint_text(rec.expr)},
                               {"solved_var", to_string(rec.solvedVar)},
                               {"solved_rhs", render(rec.solvedRhs)}});
    }
    j["constraints"] = constraints;
    nlohmann::json closure = nlohmann::json::array();
    for (const auto& step : a.closureSteps) {
        nlohmann::json s;
        s["constraint"] = step.label;
        s["bracket_with_h"] = render(step.bracketWithH);
        s["reduced"] = render(step.reducedRemainder);
        s["absorbed"] = step.absorbed;
        s["appended"] = step.appendedLabel;
        closure.push_back(s);
    }
    j["closure"] = closure;
    nlohmann::json eqs = nlohmann::json::array();
    for (const auto& eq : doc.equations) eqs.push_back(json_equation(eq));
    j["equations_of_motion"] = eqs;
    j["action_form"] = {{"general", json_action_form(doc.actionForms.general)},
                        {"reduced", json_action_form(doc.actionForms.reduced)}};
    return j.dump(2) + "\n";
}

}  // namespace fraclag
