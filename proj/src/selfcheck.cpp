#include "fraclag/selfcheck.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "fraclag/constraints.hpp"
#include "fraclag/fraccalc.hpp"
#include "fraclag/rational.hpp"
#include "fraclag/variable.hpp"

namespace fraclag {

namespace {

bool close(double got, double want, double tol) {
    double scale = std::max({1.0, std::abs(got), std::abs(want)});
    return std::abs(got - want) <= tol * scale;
}

std::string fmt(const char* pattern, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b);
    return buf;
}

void record(SelfTestReport& rep, bool pass, std::string text) {
    rep.lines.push_back(std::string(pass ? "[ok]   " : "[FAIL] ") + std::move(text));
    rep.ok = rep.ok && pass;
}

}  // namespace

Expr random_polynomial(std::uint64_t seed, int n, int maxDegree) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> termCount(1, 5);
    std::uniform_int_distribution<int> degree(0, maxDegree);
    std::uniform_int_distribution<int> kindPick(0, 3);
    std::uniform_int_distribution<int> indexPick(1, n);
    std::uniform_int_distribution<long> numPick(-4, 4);
    std::uniform_int_distribution<long> denPick(1, 4);

    Expr result;
    // Cancellation between terms can leave zero; top up until it does not.
    do {
        int terms = termCount(rng);
        for (int t = 0; t < terms; ++t) {
            long num = numPick(rng);
            if (num == 0) num = 1;
            Expr term = Expr::constant(Rational(num, denPick(rng)));
            int d = degree(rng);
            for (int f = 0; f < d; ++f) {
                CanonicalVar v;
                int idx = indexPick(rng);
                switch (kindPick(rng)) {
                    case 0: v = var_x(idx); break;
                    case 1: v = var_v(idx); break;
                    case 2: v = var_p(idx); break;
                    default: v = var_pi(idx); break;
                }
                term = term * Expr::variable(v);
            }
            result += term;
        }
    } while (result.is_zero());
    return result;
}

SelfTestReport run_selftest() {
    SelfTestReport rep;
    const double rootPi = std::sqrt(std::acos(-1.0));

    // Gamma closed forms.
    {
        double g = gamma_fn(0.5);
        record(rep, close(g, rootPi, 1e-12),
               fmt("gamma: Gamma(0.5) = %.10f vs %.10f", g, rootPi));
        double g5 = gamma_fn(5.0);
        record(rep, close(g5, 24.0, 1e-12), fmt("gamma: Gamma(5) = %.10f vs %.10f", g5, 24.0));
    }

    // Conformal derivative of t^2 at t = 1, order 1/2: t^(1/2) * 2t = 2.
    {
        auto sq = [](double t) { return t * t; };
        double d = conformal_derivative(sq, 0.5, 1.0);
        record(rep, close(d, 2.0, 1e-4), fmt("conformal: D^0.5 t^2 |_{t=1} = %.4f vs %.4f", d, 2.0));
    }

    // Conformal order 1 is the plain derivative.
    {
        auto f = [](double t) { return std::sin(t); };
        double d = conformal_derivative(f, 1.0, 0.7);
        double want = std::cos(0.7);
        record(rep, close(d, want, 1e-6),
               fmt("conformal: D^1 sin |_{t=0.7} = %.8f vs %.8f", d, want));
    }

    // Riemann-Liouville of the constant 1 on [0, 1] at t = 1, order 1/2:
    // t^(-1/2)/Gamma(1/2) = 1/sqrt(pi).
    {
        auto one = [](double) { return 1.0; };
        double d = rl_left_derivative(one, 0.5, 0.0, 1.0);
        double want = 1.0 / rootPi;
        record(rep, close(d, want, 1e-6),
               fmt("riemann-liouville: D^0.5 1 |_{[0,1], t=1} = %.6f vs %.6f", d, want));
    }

    // Riemann-Liouville of t on [0, 1] at t = 1, order 1/2: 2 sqrt(t)/sqrt(pi).
    {
        auto lin = [](double t) { return t; };
        double d = rl_left_derivative(lin, 0.5, 0.0, 1.0);
        double want = 2.0 / rootPi;
        record(rep, close(d, want, 1e-6),
               fmt("riemann-liouville: D^0.5 t |_{[0,1], t=1} = %.6f vs %.6f", d, want));
    }

    // Right-sided mirror of the constant 1 on [0, 1] at t = 0:
    // (b - t)^(-1/2)/Gamma(1/2) = 1/sqrt(pi).
    {
        auto one = [](double) { return 1.0; };
        double d = rl_right_derivative(one, 0.5, 0.0, 1.0);
        double want = 1.0 / rootPi;
        record(rep, close(d, want, 1e-6),
               fmt("riemann-liouville right: D^0.5 1 |_{[0,1], t=0} = %.6f vs %.6f", d, want));
    }

    // Order 1 reduces to the plain derivative.
    {
        auto f = [](double t) { return std::sin(t); };
        double d = rl_left_derivative(f, 1.0, 0.0, 0.7);
        double want = std::cos(0.7);
        record(rep, close(d, want, 1e-6),
               fmt("riemann-liouville: D^1 sin |_{t=0.7} = %.8f vs %.8f", d, want));
    }

    // The fixed-depth evaluations are linear in f to roundoff.
    {
        auto f = [](double t) { return std::sin(t); };
        auto g = [](double t) { return t * t * std::exp(-t); };
        auto combo = [&](double t) { return 2.0 * f(t) + 3.0 * g(t); };
        double lhs = conformal_derivative(combo, 0.5, 0.9);
        double rhs = 2.0 * conformal_derivative(f, 0.5, 0.9) +
                     3.0 * conformal_derivative(g, 0.5, 0.9);
        double dev = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
        record(rep, dev <= 1e-8,
               fmt("linearity: conformal relative deviation = %.2e (budget %.0e)", dev, 1e-8));

        double lhs2 = rl_left_derivative(combo, 0.5, 0.0, 0.9);
        double rhs2 = 2.0 * rl_left_derivative(f, 0.5, 0.0, 0.9) +
                      3.0 * rl_left_derivative(g, 0.5, 0.0, 0.9);
        double dev2 = std::abs(lhs2 - rhs2) / std::max(1.0, std::abs(rhs2));
        record(rep, dev2 <= 1e-8,
               fmt("linearity: riemann-liouville relative deviation = %.2e (budget %.0e)", dev2,
                   1e-8));
    }

    // Poisson bracket identities, exact arithmetic on random triples.
    {
        const int trials = 100;
        int bad = 0;
        for (int i = 0; i < trials; ++i) {
            Expr f = random_polynomial(3 * i + 1, 3, 3);
            Expr g = random_polynomial(3 * i + 2, 3, 3);
            Expr h = random_polynomial(3 * i + 3, 3, 3);
            Expr anti = poisson_bracket(f, g) + poisson_bracket(g, f);
            Expr leibniz = poisson_bracket(f, g * h) - poisson_bracket(f, g) * h -
                           g * poisson_bracket(f, h);
            Expr jacobi = poisson_bracket(f, poisson_bracket(g, h)) +
                          poisson_bracket(g, poisson_bracket(h, f)) +
                          poisson_bracket(h, poisson_bracket(f, g));
            if (!anti.is_zero() || !leibniz.is_zero() || !jacobi.is_zero()) ++bad;
        }
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "poisson: antisymmetry, Leibniz, Jacobi on %d random triples: %d failures",
                      trials, bad);
        record(rep, bad == 0, buf);
    }

    return rep;
}

}  // namespace fraclag
