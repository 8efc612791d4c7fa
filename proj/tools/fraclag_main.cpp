#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fraclag/dynamics.hpp"
#include "fraclag/error.hpp"
#include "fraclag/kernel.hpp"
#include "fraclag/model_file.hpp"
#include "fraclag/report.hpp"
#include "fraclag/selfcheck.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitAnalysis = 2;
constexpr int kExitDynamics = 3;
constexpr int kExitKernel = 4;
constexpr int kExitSelftest = 5;

// Loads and analyzes, translating failures to the parse/analysis exit codes.
// On success fills doc and returns kExitOk.
int load_and_derive(const std::string& path, fraclag::DerivationDocument& doc) {
    fraclag::ModelFile file;
    try {
        file = fraclag::load_model_file(path);
    } catch (const fraclag::ParseError& e) {
        std::cerr << "parse error: " << e.raw_message() << "\n";
        std::cerr << "span: [" << e.span().begin << ", " << e.span().end << ")\n";
        return kExitParse;
    } catch (const fraclag::Error& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return kExitParse;
    }
    try {
        doc = fraclag::derive_document(fraclag::make_model(file));
    } catch (const fraclag::Error& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitAnalysis;
    }
    return kExitOk;
}

std::vector<double> parse_csv_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        if (piece.empty()) continue;
        values.push_back(std::stod(piece));
    }
    return values;
}

// Initial data layout: x1..xn, v1..vn, p1..pn, pi1..pin. Missing entries
// default to zero; more than 4n entries is an error.
fraclag::PhasePoint make_init(const std::vector<double>& values, int n) {
    if (static_cast<int>(values.size()) > 4 * n)
        throw fraclag::Error(fraclag::ErrorCode::DomainError,
                             "initial data has more than 4n entries");
    fraclag::PhasePoint init;
    init.x.assign(n, 0.0);
    init.v.assign(n, 0.0);
    init.p.assign(n, 0.0);
    init.pi.assign(n, 0.0);
    for (int k = 0; k < static_cast<int>(values.size()); ++k) {
        int block = k / n, i = k % n;
        switch (block) {
            case 0: init.x[i] = values[k]; break;
            case 1: init.v[i] = values[k]; break;
            case 2: init.p[i] = values[k]; break;
            default: init.pi[i] = values[k]; break;
        }
    }
    return init;
}

int cmd_analyze(const std::string& modelPath, const std::string& outBase) {
    fraclag::DerivationDocument doc;
    if (int rc = load_and_derive(modelPath, doc)) return rc;
    std::string text = fraclag::render_text_report(doc);
    std::cout << text;
    if (!outBase.empty()) {
        std::ofstream txt(outBase + ".txt");
        txt << text;
        std::ofstream js(outBase + ".json");
        js << fraclag::render_json_report(doc) << "\n";
        if (!txt || !js) {
            std::cerr << "analysis error: cannot write " << outBase << ".{txt,json}\n";
            return kExitAnalysis;
        }
    }
    return kExitOk;
}

int cmd_simulate(const std::string& modelPath, const std::string& initText, double dt,
                 double tEnd, const std::string& gaugeName, const std::string& outPath) {
    fraclag::DerivationDocument doc;
    if (int rc = load_and_derive(modelPath, doc)) return rc;
    try {
        fraclag::PhasePoint init = make_init(parse_csv_list(initText), doc.analysis.model.n);
        fraclag::GaugeChoice gauge =
            fraclag::GaugeChoice::named(gaugeName, doc.analysis.split.singular);
        fraclag::Trajectory traj = fraclag::integrate(doc.analysis, doc.equations,
                                                      doc.actionForms.general, gauge, init, dt,
                                                      0.0, tEnd);
        std::printf("S = %.6f\n", traj.action());
        std::printf("max residual = %.3e\n", traj.max_residual());
        if (!outPath.empty()) {
            std::ofstream out(outPath);
            fraclag::write_trajectory_csv(traj, out);
            if (!out) {
                std::cerr << "dynamics error: cannot write " << outPath << "\n";
                return kExitDynamics;
            }
        }
    } catch (const fraclag::Error& e) {
        std::cerr << "dynamics error: " << e.what() << "\n";
        return kExitDynamics;
    }
    return kExitOk;
}

int cmd_kernel(const std::string& modelPath, int slices, double tEnd,
               const std::string& initText) {
    fraclag::DerivationDocument doc;
    if (int rc = load_and_derive(modelPath, doc)) return rc;
    try {
        fraclag::ReducedLagrangian red = fraclag::reduce_for_kernel(doc.analysis);

        // Classical path from the canonical equations, with the integrator
        // step dividing the grid step so grid nodes land on samples exactly.
        fraclag::PhasePoint init = make_init(parse_csv_list(initText), doc.analysis.model.n);
        double gridDt = tEnd / slices;
        int stride = std::max(1, static_cast<int>(std::ceil(gridDt / 1e-3)));
        double dt = gridDt / stride;
        fraclag::GaugeChoice gauge =
            fraclag::GaugeChoice::zero(doc.analysis.split.singular);
        fraclag::Trajectory traj = fraclag::integrate(doc.analysis, doc.equations,
                                                      doc.actionForms.general, gauge, init, dt,
                                                      0.0, tEnd);

        fraclag::PathGrid grid;
        grid.tStart = 0.0;
        grid.tEnd = tEnd;
        grid.slices = slices;
        grid.coords = red.coords;
        grid.nodes.assign(red.coords.size(), std::vector<double>(slices + 1, 0.0));
        grid.xStart.assign(red.coords.size(), 0.0);
        for (std::size_t c = 0; c < red.coords.size(); ++c) {
            int i = red.coords[c];
            grid.xStart[c] = init.x[i - 1];
            for (int k = 0; k <= slices; ++k) {
                std::size_t sample = static_cast<std::size_t>(k) * stride;
                grid.nodes[c][k] = traj.samples.at(sample).state.v[i - 1];
            }
        }

        double grad = fraclag::stationary_phase_check(red, grid);
        if (grad < 1e-6)
            std::printf("stationary-phase max |grad S| < 1e-6 (value %.3e)\n", grad);
        else
            std::printf("stationary-phase max |grad S| = %.3e\n", grad);

        if (grid.interior_count() <= 4) {
            fraclag::QuadraticActionMatrix qam = fraclag::discretize_action(red, grid);
            std::complex<double> gauss = fraclag::gaussian_kernel_eval(qam);
            std::complex<double> quad = fraclag::oscillatory_kernel_quadrature(qam);
            double rel = std::abs(gauss - quad) / std::max(1e-300, std::abs(gauss));
            if (rel <= 1e-6)
                std::printf("gaussian vs quadrature rel err <= 1e-6 (value %.3e)\n", rel);
            else
                std::printf("gaussian vs quadrature rel err = %.3e\n", rel);
            std::printf("kernel = %.9f + %.9fi\n", gauss.real(), gauss.imag());
        } else {
            std::printf("kernel dimension %d: quadrature oracle skipped\n",
                        grid.interior_count());
        }
    } catch (const fraclag::Error& e) {
        std::cerr << "kernel error: " << e.what() << "\n";
        return kExitKernel;
    }
    return kExitOk;
}

int cmd_selftest() {
    fraclag::SelfTestReport rep = fraclag::run_selftest();
    for (const auto& line : rep.lines) std::cout << line << "\n";
    std::cout << (rep.ok ? "selftest: all checks passed\n" : "selftest: FAILURES\n");
    return rep.ok ? kExitOk : kExitSelftest;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constraint analysis and path-kernel toolkit for second-order Lagrangians"};
    app.require_subcommand(1);

    std::string modelPath, outBase, outPath, initText, gaugeName = "zero";
    double dt = 1e-3, tEnd = 1.0;
    int slices = 1;

    CLI::App* analyze = app.add_subcommand("analyze", "Run the constraint analysis");
    analyze->add_option("model", modelPath, "Model file")->required();
    analyze->add_option("--out", outBase, "Write <base>.txt and <base>.json");

    CLI::App* simulate = app.add_subcommand("simulate", "Integrate the canonical equations");
    simulate->add_option("model", modelPath, "Model file")->required();
    simulate->add_option("--init", initText, "Initial x1..xn,v1..vn,p1..pn,pi1..pin");
    simulate->add_option("--dt", dt, "Integrator step");
    simulate->add_option("--tend", tEnd, "Final time");
    simulate->add_option("--gauge", gaugeName, "Gauge: zero or constant:<value>");
    simulate->add_option("--out", outPath, "Trajectory CSV path");

    CLI::App* kernel = app.add_subcommand("kernel", "Discretized kernel checks");
    kernel->add_option("model", modelPath, "Model file")->required();
    kernel->add_option("--slices", slices, "Time slices")->required();
    kernel->add_option("--tend", tEnd, "Final time");
    kernel->add_option("--init", initText, "Initial data for the classical path");

    CLI::App* selftest = app.add_subcommand("selftest", "Run the built-in checks");

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) return cmd_analyze(modelPath, outBase);
    if (simulate->parsed()) return cmd_simulate(modelPath, initText, dt, tEnd, gaugeName, outPath);
    if (kernel->parsed()) return cmd_kernel(modelPath, slices, tEnd, initText);
    if (selftest->parsed()) return cmd_selftest();
    return kExitOk;
}
