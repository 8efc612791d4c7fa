#pragma once

#include <string>

#include "fraclag/dynamics.hpp"

namespace fraclag {

// Everything the derivation produces for one model.
struct DerivationDocument {
    AnalysisReport analysis;
    std::vector<TotalDifferentialEquation> equations;
    ActionForms actionForms;
};

DerivationDocument derive_document(const LagrangianModel& model);

// Deterministic plain-text derivation, one tagged line per result.
std::string render_text_report(const DerivationDocument& doc);

// Machine-readable mirror; every expression is rendered in canonical form
// and parses back.
std::string render_json_report(const DerivationDocument& doc);

// Presentation of one resolved equation, momentum equations in the
// -d(target) orientation unless the positive side reads cleaner.
std::string render_equation(const TotalDifferentialEquation& eq);

std::string render_action_form(const ActionForm& form);

}  // namespace fraclag
