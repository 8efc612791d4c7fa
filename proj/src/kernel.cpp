#include "fraclag/kernel.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "fraclag/parser.hpp"

namespace fraclag {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Expr substitute_one(const Expr& e, const CanonicalVar& v, const Expr& value) {
    std::map<CanonicalVar, Expr> rule{{v, value}};
    return e.substitute(rule);
}

}  // namespace

ReducedLagrangian reduce_for_kernel(const AnalysisReport& report) {
    std::vector<ConstraintRecord> secondClass;
    for (const auto& rec : report.constraints) {
        if (rec.cls == ConstraintClass::Unclassified)
            throw Error(ErrorCode::UnsupportedKernel, "constraints are not classified");
        if (rec.cls == ConstraintClass::SecondClass) secondClass.push_back(rec);
    }
    Expr hred = reduce_by_constraints(report.h0, secondClass);

    ReducedLagrangian red;
    red.coords = report.split.regular;
    if (red.coords.empty())
        throw Error(ErrorCode::UnsupportedKernel, "no regular coordinates to integrate over");

    for (const CanonicalVar& v : hred.variables()) {
        if (v.kind == VarKind::T)
            throw Error(ErrorCode::UnsupportedKernel, "reduced hamiltonian is time dependent");
        bool regular =
            std::find(red.coords.begin(), red.coords.end(), v.index) != red.coords.end();
        if (!regular)
            throw Error(ErrorCode::UnsupportedKernel,
                        "gauge-sector variable " + to_string(v) +
                            " survives the second-class reduction; fix a gauge first");
    }

    // P structure: dH/dP_a must be exactly V_a, and nothing else may carry P.
    Expr rest = hred;
    for (int a : red.coords) {
        if (!(hred.diff(var_p(a)) == Expr::variable(var_v(a))))
            throw Error(ErrorCode::UnsupportedKernel,
                        "reduced hamiltonian is not P-linear with dH/dp" + std::to_string(a) +
                            " = v" + std::to_string(a));
        rest -= Expr::variable(var_p(a)) * Expr::variable(var_v(a));
    }
    if (rest.contains_kind(VarKind::P))
        throw Error(ErrorCode::UnsupportedKernel, "momentum P survives beyond the linear part");

    // PI structure: constant symmetric mass matrix, then c and U by setting
    // PI to zero.
    std::size_t m = red.coords.size();
    red.mass.assign(m, std::vector<Rational>(m, Rational(0)));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            Expr entry = rest.diff(var_pi(red.coords[i])).diff(var_pi(red.coords[j]));
            auto value = entry.as_constant();
            if (!value)
                throw Error(ErrorCode::UnsupportedKernel,
                            "pi-mass entry (" + std::to_string(red.coords[i]) + "," +
                                std::to_string(red.coords[j]) +
                                ") is not constant: " + render(entry));
            red.mass[i][j] = *value;
        }
    }
    try {
        red.massInv = invert_exact(red.mass);
    } catch (const Error&) {
        throw Error(ErrorCode::UnsupportedKernel, "pi-mass matrix is singular");
    }

    Expr atZeroPi = rest;
    for (int a : red.coords) atZeroPi = substitute_one(atZeroPi, var_pi(a), Expr());
    red.potential = atZeroPi;
    for (std::size_t i = 0; i < m; ++i) {
        Expr c_i = rest.diff(var_pi(red.coords[i]));
        for (int a : red.coords) c_i = substitute_one(c_i, var_pi(a), Expr());
        red.linear.push_back(std::move(c_i));
    }

    // Check the quadratic decomposition is exact (cubic PI terms would have
    // slipped past a constant second derivative only by cancellation).
    Expr rebuilt = red.potential;
    for (std::size_t i = 0; i < m; ++i) {
        rebuilt += red.linear[i] * Expr::variable(var_pi(red.coords[i]));
        for (std::size_t j = 0; j < m; ++j)
            rebuilt += (Expr::variable(var_pi(red.coords[i])) *
                        Expr::variable(var_pi(red.coords[j])))
                           .scaled(red.mass[i][j] * Rational(1, 2));
    }
    if (!(rebuilt == rest))
        throw Error(ErrorCode::UnsupportedKernel, "reduced hamiltonian is not quadratic in pi");

    // L_red = 1/2 (A - c)^T M^-1 (A - c) - U.
    std::vector<Expr> w;
    for (std::size_t i = 0; i < m; ++i)
        w.push_back(Expr::variable(var_a(red.coords[i])) - red.linear[i]);
    Expr lred = -red.potential;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            lred += (w[i] * w[j]).scaled(red.massInv[i][j] * Rational(1, 2));
    red.lred = std::move(lred);
    red.degree = red.lred.total_degree();
    for (int a : red.coords)
        if (red.lred.contains(var_x(a))) red.dependsOnX = true;
    return red;
}

namespace {

void check_grid(const ReducedLagrangian& red, const PathGrid& grid) {
    if (grid.slices < 1) throw Error(ErrorCode::GridError, "grid needs at least one slice");
    if (!(grid.tEnd > grid.tStart)) throw Error(ErrorCode::GridError, "grid interval is empty");
    if (grid.coords != red.coords)
        throw Error(ErrorCode::GridError, "grid coordinates disagree with the reduced system");
    if (grid.nodes.size() != grid.coords.size())
        throw Error(ErrorCode::GridError, "grid node rows disagree with the coordinate count");
    for (const auto& row : grid.nodes)
        if (static_cast<int>(row.size()) != grid.slices + 1)
            throw Error(ErrorCode::GridError, "grid node row must have slices+1 entries");
    if (red.dependsOnX && grid.xStart.size() != grid.coords.size())
        throw Error(ErrorCode::GridError, "grid is missing the X start values");
}

// Per-slice evaluation state shared by the action and gradient walks.
class SliceEvaluator {
public:
    SliceEvaluator(const ReducedLagrangian& red, const PathGrid& grid)
        : red_(red), grid_(grid), m_(red.coords.size()) {
        lred_ = CompiledExpr(red.lred, slots_);
        for (std::size_t i = 0; i < m_; ++i) {
            int a = red_.coords[i];
            dLdx_.emplace_back(red.lred.diff(var_x(a)), slots_);
            dLdv_.emplace_back(red.lred.diff(var_v(a)), slots_);
            dLda_.emplace_back(red.lred.diff(var_a(a)), slots_);
            slots_.slot_of(var_x(a));
            slots_.slot_of(var_v(a));
            slots_.slot_of(var_a(a));
        }
        values_.assign(slots_.size(), 0.0);
        x_.assign(m_, 0.0);
    }

    // Loads slice k (left endpoint values and forward difference) into the
    // slot table. Slices must be visited in order 0..M-1 so the X
    // reconstruction can accumulate.
    void load_slice(int k) {
        double dt = grid_.dt();
        if (k == 0 && red_.dependsOnX)
            for (std::size_t i = 0; i < m_; ++i) x_[i] = grid_.xStart[i];
        for (std::size_t i = 0; i < m_; ++i) {
            int a = red_.coords[i];
            double v = grid_.nodes[i][k];
            if (red_.dependsOnX) {
                values_[*slots_.find(var_x(a))] = x_[i];
                x_[i] += dt * v;
            }
            values_[*slots_.find(var_v(a))] = v;
            values_[*slots_.find(var_a(a))] = (grid_.nodes[i][k + 1] - v) / dt;
        }
    }

    double lred() const { return lred_.eval(values_); }
    double dLdx(std::size_t i) const { return dLdx_[i].eval(values_); }
    double dLdv(std::size_t i) const { return dLdv_[i].eval(values_); }
    double dLda(std::size_t i) const { return dLda_[i].eval(values_); }

private:
    const ReducedLagrangian& red_;
    const PathGrid& grid_;
    std::size_t m_;
    VarSlots slots_;
    std::vector<double> values_;
    std::vector<double> x_;
    CompiledExpr lred_;
    std::vector<CompiledExpr> dLdx_, dLdv_, dLda_;
};

}  // namespace

double discretized_action(const ReducedLagrangian& red, const PathGrid& grid) {
    check_grid(red, grid);
    SliceEvaluator ev(red, grid);
    double dt = grid.dt();
    double s = 0;
    for (int k = 0; k < grid.slices; ++k) {
        ev.load_slice(k);
        s += dt * ev.lred();
    }
    return s;
}

double stationary_phase_check(const ReducedLagrangian& red, const PathGrid& grid) {
    check_grid(red, grid);
    if (grid.slices < 2) return 0.0;
    SliceEvaluator ev(red, grid);
    double dt = grid.dt();
    std::size_t m = red.coords.size();
    int M = grid.slices;

    std::vector<std::vector<double>> lv(m, std::vector<double>(M)), la = lv, lx = lv;
    for (int k = 0; k < M; ++k) {
        ev.load_slice(k);
        for (std::size_t i = 0; i < m; ++i) {
            lv[i][k] = ev.dLdv(i);
            la[i][k] = ev.dLda(i);
            if (red.dependsOnX) lx[i][k] = ev.dLdx(i);
        }
    }
    // dS/dv_{i,k} = dt dL/dv|_k + dL/dvdot|_{k-1} - dL/dvdot|_k
    //              + dt^2 sum_{m>k} dL/dx|_m   (x_m shifts by dt per v_k).
    double worst = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double xTail = 0;
        for (int k = M - 1; k >= 1; --k) {
            if (red.dependsOnX && k + 1 <= M - 1) xTail += lx[i][k + 1];
            double g = dt * lv[i][k] + la[i][k - 1] - la[i][k] + dt * dt * xTail;
            worst = std::max(worst, std::abs(g));
        }
    }
    return worst;
}

QuadraticActionMatrix discretize_action(const ReducedLagrangian& red, const PathGrid& grid) {
    check_grid(red, grid);
    if (red.degree > 2)
        throw Error(ErrorCode::UnsupportedKernel,
                    "discretized action is not quadratic (degree " + std::to_string(red.degree) +
                        ")");
    int M = grid.slices;
    std::size_t m = red.coords.size();
    int dim = static_cast<int>(m) * (M - 1);

    // Interior nodes flattened coordinate-major: z[i*(M-1) + (k-1)].
    PathGrid work = grid;
    auto set_interior = [&](const std::vector<double>& z) {
        for (std::size_t i = 0; i < m; ++i)
            for (int k = 1; k < M; ++k) work.nodes[i][k] = z[i * (M - 1) + (k - 1)];
    };
    auto s_of = [&](const std::vector<double>& z) {
        set_interior(z);
        return discretized_action(red, work);
    };

    QuadraticActionMatrix qam;
    qam.b.assign(dim, 0.0);
    qam.q.assign(dim, std::vector<double>(dim, 0.0));
    std::vector<double> z(dim, 0.0);
    qam.c = s_of(z);

    std::vector<double> sPlus(dim), sMinus(dim);
    for (int i = 0; i < dim; ++i) {
        z[i] = 1.0;
        sPlus[i] = s_of(z);
        z[i] = -1.0;
        sMinus[i] = s_of(z);
        z[i] = 0.0;
        qam.b[i] = 0.5 * (sPlus[i] - sMinus[i]);
        qam.q[i][i] = sPlus[i] + sMinus[i] - 2.0 * qam.c;
    }
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            z[i] = 1.0;
            z[j] = 1.0;
            double sij = s_of(z);
            z[i] = 0.0;
            z[j] = 0.0;
            double qij = sij - sPlus[i] - sPlus[j] + qam.c;
            qam.q[i][j] = qij;
            qam.q[j][i] = qij;
        }
    }
    return qam;
}

namespace {

struct EigenSystem {
    Eigen::VectorXd lambda;
    Eigen::MatrixXd vectors;
};

EigenSystem eigensystem(const QuadraticActionMatrix& qam) {
    int d = qam.dim();
    Eigen::MatrixXd q(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) q(i, j) = 0.5 * (qam.q[i][j] + qam.q[j][i]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::DegenerateQuadraticForm, "eigendecomposition failed");
    double top = 0;
    for (int i = 0; i < d; ++i) top = std::max(top, std::abs(solver.eigenvalues()[i]));
    for (int i = 0; i < d; ++i)
        if (std::abs(solver.eigenvalues()[i]) <= 1e-12 * std::max(1.0, top))
            throw Error(ErrorCode::DegenerateQuadraticForm,
                        "quadratic form has a (near-)zero eigenvalue");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

std::complex<double> gaussian_kernel_eval(const QuadraticActionMatrix& qam) {
    const std::complex<double> i1(0.0, 1.0);
    if (qam.dim() == 0) return std::exp(i1 * qam.c);
    EigenSystem es = eigensystem(qam);
    int d = qam.dim();

    Eigen::VectorXd b(d);
    for (int k = 0; k < d; ++k) b[k] = qam.b[k];
    Eigen::VectorXd beta = es.vectors.transpose() * b;

    std::complex<double> amplitude(1.0, 0.0);
    double quad = 0.0;  // b^T Q^-1 b
    for (int k = 0; k < d; ++k) {
        double lam = es.lambda[k];
        amplitude *= std::sqrt(2.0 * kPi / std::abs(lam)) *
                     std::exp(i1 * (lam > 0 ? kPi / 4.0 : -kPi / 4.0));
        quad += beta[k] * beta[k] / lam;
    }
    return amplitude * std::exp(i1 * (qam.c - 0.5 * quad));
}

namespace {

// integral dw exp(i(lambda w^2/2 + beta w) - eta w^2) over the real line,
// by composite Gauss-Legendre with panels sized to the local phase.
std::complex<double> damped_oscillatory_1d(double lambda, double beta, double eta) {
    static const int kGL = 16;
    static const double nodes[kGL] = {
        -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
        -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
        0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
        0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
    static const double weights[kGL] = {
        0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
        0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
        0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

    double cut = std::sqrt(34.0 / eta);  // exp(-34) tail
    double phaseSpan = 0.5 * std::abs(lambda) * cut * cut + std::abs(beta) * cut;
    long panels = static_cast<long>(std::ceil(phaseSpan / 3.0)) + 8;
    double h = 2.0 * cut / static_cast<double>(panels);

    std::complex<double> sum(0.0, 0.0);
    for (long p = 0; p < panels; ++p) {
        double lo = -cut + p * h;
        double midPoint = lo + 0.5 * h;
        double half = 0.5 * h;
        std::complex<double> panel(0.0, 0.0);
        for (int g = 0; g < kGL; ++g) {
            double w = midPoint + half * nodes[g];
            double phase = 0.5 * lambda * w * w + beta * w;
            double damp = std::exp(-eta * w * w);
            panel += weights[g] * damp * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        sum += panel * half;
    }
    return sum;
}

}  // namespace

std::complex<double> oscillatory_kernel_quadrature(const QuadraticActionMatrix& qam) {
    const std::complex<double> i1(0.0, 1.0);
    if (qam.dim() == 0) return std::exp(i1 * qam.c);
    EigenSystem es = eigensystem(qam);
    int d = qam.dim();

    Eigen::VectorXd b(d);
    for (int k = 0; k < d; ++k) b[k] = qam.b[k];
    Eigen::VectorXd beta = es.vectors.transpose() * b;

    const double etas[3] = {1e-2, 1e-3, 1e-4};
    std::complex<double> values[3];
    for (int e = 0; e < 3; ++e) {
        std::complex<double> prod = std::exp(i1 * qam.c);
        for (int k = 0; k < d; ++k) prod *= damped_oscillatory_1d(es.lambda[k], beta[k], etas[e]);
        values[e] = prod;
    }
    // Quadratic (Lagrange) extrapolation to eta = 0.
    std::complex<double> out(0.0, 0.0);
    for (int i = 0; i < 3; ++i) {
        double w = 1.0;
        for (int j = 0; j < 3; ++j) {
            if (j == i) continue;
            w *= (0.0 - etas[j]) / (etas[i] - etas[j]);
        }
        out += values[i] * w;
    }
    return out;
}

}  // namespace fraclag
