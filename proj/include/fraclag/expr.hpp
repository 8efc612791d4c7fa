#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "fraclag/rational.hpp"
#include "fraclag/variable.hpp"

namespace fraclag {

// Power product of canonical variables. Invariant: factors sorted by
// variable, every exponent >= 1; the empty product is the constant monomial.
class Monomial {
public:
    Monomial() = default;

    static Monomial variable(const CanonicalVar& v, int power = 1);

    bool is_constant() const { return factors_.empty(); }
    int total_degree() const;
    int power_of(const CanonicalVar& v) const;
    const std::vector<std::pair<CanonicalVar, int>>& factors() const { return factors_; }

    Monomial times(const Monomial& other) const;
    // Removes one power of v; precondition power_of(v) >= 1.
    Monomial divide_once(const CanonicalVar& v) const;

    friend bool operator==(const Monomial&, const Monomial&) = default;

    // True when a belongs before b in rendering order: lexicographic walk in
    // canonical variable order, the higher exponent on the first differing
    // variable first; the constant monomial last.
    static bool print_before(const Monomial& a, const Monomial& b);

private:
    std::vector<std::pair<CanonicalVar, int>> factors_;
};

struct MonomialPrintOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return Monomial::print_before(a, b);
    }
};

// Multivariate polynomial over Rational in canonical form: a map from
// monomial to nonzero coefficient. Equality of values is equality of maps.
class Expr {
public:
    using TermMap = std::map<Monomial, Rational, MonomialPrintOrder>;

    Expr() = default;
    static Expr constant(const Rational& c);
    static Expr variable(const CanonicalVar& v);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Constant term (zero if absent).
    Rational constant_term() const;
    // The value when the Expr is a bare constant; nullopt otherwise.
    std::optional<Rational> as_constant() const;

    const TermMap& terms() const { return terms_; }
    int total_degree() const;
    int degree_in(const CanonicalVar& v) const;
    bool contains(const CanonicalVar& v) const;
    bool contains_kind(VarKind kind) const;
    std::set<CanonicalVar> variables() const;

    Expr operator-() const;
    Expr& operator+=(const Expr& o);
    Expr& operator-=(const Expr& o);
    friend Expr operator+(Expr a, const Expr& b) { return a += b; }
    friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
    friend Expr operator*(const Expr& a, const Expr& b);
    Expr& operator*=(const Expr& o) { return *this = *this * o; }
    Expr scaled(const Rational& c) const;
    Expr pow(int exponent) const;  // exponent >= 0

    friend bool operator==(const Expr& a, const Expr& b) { return a.terms_ == b.terms_; }

    // Partial derivative with respect to one canonical variable.
    Expr diff(const CanonicalVar& v) const;

    // Prolonged time derivative: X->V, V->A, A->J_1, J_k->J_{k+1}, T->1.
    // Momentum variables have no prescribed evolution; their presence throws
    // UnsupportedExpression.
    Expr total_time_derivative() const;

    // Simultaneous substitution. Throws InvalidSubstitution when any
    // replacement mentions any substituted variable (including itself).
    Expr substitute(const std::map<CanonicalVar, Expr>& rules) const;

    double eval(const std::function<double(const CanonicalVar&)>& value_of) const;
    // Exact evaluation at a rational point.
    Rational eval_exact(const std::map<CanonicalVar, Rational>& point) const;

    void add_term(const Monomial& m, const Rational& coeff);

private:
    TermMap terms_;
};

inline bool equal(const Expr& a, const Expr& b) { return a == b; }

// Raw expression tree produced by the parser, consumed by normalize().
struct ExprTree {
    enum class Op { Const, Var, Add, Sub, Mul, Pow, Neg };

    Op op = Op::Const;
    Rational value;                  // Const
    CanonicalVar var;                // Var
    long exponent = 0;               // Pow
    std::vector<ExprTree> children;  // Add/Sub/Mul: 2, Neg/Pow: 1

    static ExprTree constant(Rational c);
    static ExprTree variable(CanonicalVar v);
    static ExprTree binary(Op op, ExprTree lhs, ExprTree rhs);
    static ExprTree negate(ExprTree child);
    static ExprTree power(ExprTree base, long exponent);
};

// Folds a tree into canonical form. Integer exponents >= 0 only; a negative
// exponent throws UnsupportedExpression.
Expr normalize(const ExprTree& tree);

// Flattened evaluator for hot numeric loops: variables are resolved to dense
// slots once, then eval() is pure floating-point arithmetic.
class VarSlots {
public:
    int slot_of(const CanonicalVar& v);                 // allocates on first use
    std::optional<int> find(const CanonicalVar& v) const;
    int size() const { return static_cast<int>(order_.size()); }
    const std::vector<CanonicalVar>& order() const { return order_; }

private:
    std::map<CanonicalVar, int> slots_;
    std::vector<CanonicalVar> order_;
};

class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, VarSlots& slots);

    double eval(const std::vector<double>& values) const;

private:
    struct Term {
        double coeff;
        std::vector<std::pair<int, int>> powers;  // (slot, exponent)
    };
    std::vector<Term> terms_;
};

}  // namespace fraclag
