#include "fraclag/expr.hpp"

#include <algorithm>
#include <cmath>

namespace fraclag {

Monomial Monomial::variable(const CanonicalVar& v, int power) {
    if (power < 1) throw Error(ErrorCode::DomainError, "monomial power must be >= 1");
    Monomial m;
    m.factors_.emplace_back(v, power);
    return m;
}

int Monomial::total_degree() const {
    int d = 0;
    for (const auto& [var, exp] : factors_) d += exp;
    return d;
}

int Monomial::power_of(const CanonicalVar& v) const {
    for (const auto& [var, exp] : factors_)
        if (var == v) return exp;
    return 0;
}

Monomial Monomial::times(const Monomial& other) const {
    Monomial out;
    out.factors_.reserve(factors_.size() + other.factors_.size());
    auto a = factors_.begin();
    auto b = other.factors_.begin();
    while (a != factors_.end() && b != other.factors_.end()) {
        if (a->first == b->first) {
            out.factors_.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        } else if (a->first < b->first) {
            out.factors_.push_back(*a++);
        } else {
            out.factors_.push_back(*b++);
        }
    }
    out.factors_.insert(out.factors_.end(), a, factors_.end());
    out.factors_.insert(out.factors_.end(), b, other.factors_.end());
    return out;
}

Monomial Monomial::divide_once(const CanonicalVar& v) const {
    Monomial out;
    out.factors_.reserve(factors_.size());
    bool found = false;
    for (const auto& fac : factors_) {
        if (fac.first == v) {
            found = true;
            if (fac.second > 1) out.factors_.emplace_back(fac.first, fac.second - 1);
        } else {
            out.factors_.push_back(fac);
        }
    }
    if (!found) throw Error(ErrorCode::DomainError, "divide_once: variable absent from monomial");
    return out;
}

bool Monomial::print_before(const Monomial& a, const Monomial& b) {
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() && j != b.factors_.end()) {
        if (i->first != j->first) {
            // The earlier variable carries a positive power on exactly one
            // side; that side leads.
            return i->first < j->first;
        }
        if (i->second != j->second) return i->second > j->second;
        ++i;
        ++j;
    }
    // A strict prefix has exponent zero where the other side is positive.
    return i != a.factors_.end();
}

Expr Expr::constant(const Rational& c) {
    Expr e;
    if (!c.is_zero()) e.terms_.emplace(Monomial{}, c);
    return e;
}

Expr Expr::variable(const CanonicalVar& v) {
    Expr e;
    e.terms_.emplace(Monomial::variable(v), Rational(1));
    return e;
}

bool Expr::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
}

Rational Expr::constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<Rational> Expr::as_constant() const {
    if (!is_constant()) return std::nullopt;
    return constant_term();
}

int Expr::total_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
}

int Expr::degree_in(const CanonicalVar& v) const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.power_of(v));
    return d;
}

bool Expr::contains(const CanonicalVar& v) const {
    for (const auto& [m, c] : terms_)
        if (m.power_of(v) > 0) return true;
    return false;
}

bool Expr::contains_kind(VarKind kind) const {
    for (const auto& [m, c] : terms_)
        for (const auto& [var, exp] : m.factors())
            if (var.kind == kind) return true;
    return false;
}

std::set<CanonicalVar> Expr::variables() const {
    std::set<CanonicalVar> out;
    for (const auto& [m, c] : terms_)
        for (const auto& [var, exp] : m.factors()) out.insert(var);
    return out;
}

void Expr::add_term(const Monomial& m, const Rational& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Expr Expr::operator-() const {
    Expr out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

Expr& Expr::operator+=(const Expr& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Expr& Expr::operator-=(const Expr& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Expr operator*(const Expr& a, const Expr& b) {
    Expr out;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) out.add_term(ma.times(mb), ca * cb);
    return out;
}

Expr Expr::scaled(const Rational& c) const {
    Expr out;
    if (c.is_zero()) return out;
    for (const auto& [m, coeff] : terms_) out.terms_.emplace(m, coeff * c);
    return out;
}

Expr Expr::pow(int exponent) const {
    if (exponent < 0)
        throw Error(ErrorCode::UnsupportedExpression, "negative exponent on expression");
    Expr out = Expr::constant(Rational(1));
    for (int k = 0; k < exponent; ++k) out = out * (*this);
    return out;
}

Expr Expr::diff(const CanonicalVar& v) const {
    Expr out;
    for (const auto& [m, c] : terms_) {
        int e = m.power_of(v);
        if (e == 0) continue;
        out.add_term(m.divide_once(v), c * Rational(e));
    }
    return out;
}

namespace {

CanonicalVar prolong(const CanonicalVar& v) {
    switch (v.kind) {
        case VarKind::X: return var_v(v.index);
        case VarKind::V: return var_a(v.index);
        case VarKind::A: return var_j(v.index, 1);
        case VarKind::J: return var_j(v.index, v.jet + 1);
        default:
            throw Error(ErrorCode::UnsupportedExpression,
                        "total time derivative of momentum variable " + to_string(v));
    }
}

}  // namespace

Expr Expr::total_time_derivative() const {
    Expr out;
    for (const auto& [m, c] : terms_) {
        for (const auto& [var, exp] : m.factors()) {
            Monomial reduced = m.divide_once(var);
            Rational coeff = c * Rational(exp);
            if (var.kind == VarKind::T) {
                out.add_term(reduced, coeff);  // dT/dt = 1
            } else {
                out.add_term(reduced.times(Monomial::variable(prolong(var))), coeff);
            }
        }
    }
    return out;
}

Expr Expr::substitute(const std::map<CanonicalVar, Expr>& rules) const {
    for (const auto& [lhs, rhs] : rules)
        for (const auto& [other, unused] : rules)
            if (rhs.contains(other))
                throw Error(ErrorCode::InvalidSubstitution,
                            "replacement for " + to_string(lhs) + " mentions substituted variable " +
                                to_string(other));
    Expr out;
    for (const auto& [m, c] : terms_) {
        Expr term = Expr::constant(c);
        for (const auto& [var, exp] : m.factors()) {
            auto it = rules.find(var);
            Expr base = it == rules.end() ? Expr::variable(var) : it->second;
            term = term * base.pow(exp);
        }
        out += term;
    }
    return out;
}

double Expr::eval(const std::function<double(const CanonicalVar&)>& value_of) const {
    double sum = 0.0;
    for (const auto& [m, c] : terms_) {
        double prod = c.to_double();
        for (const auto& [var, exp] : m.factors()) {
            double v = value_of(var);
            for (int k = 0; k < exp; ++k) prod *= v;
        }
        sum += prod;
    }
    return sum;
}

Rational Expr::eval_exact(const std::map<CanonicalVar, Rational>& point) const {
    Rational sum(0);
    for (const auto& [m, c] : terms_) {
        Rational prod = c;
        for (const auto& [var, exp] : m.factors()) {
            auto it = point.find(var);
            if (it == point.end())
                throw Error(ErrorCode::DomainError, "eval_exact: no value for " + to_string(var));
            for (int k = 0; k < exp; ++k) prod *= it->second;
        }
        sum += prod;
    }
    return sum;
}

ExprTree ExprTree::constant(Rational c) {
    ExprTree t;
    t.op = Op::Const;
    t.value = std::move(c);
    return t;
}

ExprTree ExprTree::variable(CanonicalVar v) {
    ExprTree t;
    t.op = Op::Var;
    t.var = v;
    return t;
}

ExprTree ExprTree::binary(Op op, ExprTree lhs, ExprTree rhs) {
    ExprTree t;
    t.op = op;
    t.children.push_back(std::move(lhs));
    t.children.push_back(std::move(rhs));
    return t;
}

ExprTree ExprTree::negate(ExprTree child) {
    ExprTree t;
    t.op = Op::Neg;
    t.children.push_back(std::move(child));
    return t;
}

ExprTree ExprTree::power(ExprTree base, long exponent) {
    ExprTree t;
    t.op = Op::Pow;
    t.exponent = exponent;
    t.children.push_back(std::move(base));
    return t;
}

Expr normalize(const ExprTree& tree) {
    switch (tree.op) {
        case ExprTree::Op::Const: return Expr::constant(tree.value);
        case ExprTree::Op::Var: return Expr::variable(tree.var);
        case ExprTree::Op::Add: return normalize(tree.children[0]) + normalize(tree.children[1]);
        case ExprTree::Op::Sub: return normalize(tree.children[0]) - normalize(tree.children[1]);
        case ExprTree::Op::Mul: return normalize(tree.children[0]) * normalize(tree.children[1]);
        case ExprTree::Op::Neg: return -normalize(tree.children[0]);
        case ExprTree::Op::Pow: {
            if (tree.exponent < 0)
                throw Error(ErrorCode::UnsupportedExpression, "negative exponent");
            if (tree.exponent > 64)
                throw Error(ErrorCode::UnsupportedExpression, "exponent too large");
            return normalize(tree.children[0]).pow(static_cast<int>(tree.exponent));
        }
    }
    throw Error(ErrorCode::UnsupportedExpression, "malformed expression tree");
}

int VarSlots::slot_of(const CanonicalVar& v) {
    auto it = slots_.find(v);
    if (it != slots_.end()) return it->second;
    int slot = static_cast<int>(order_.size());
    slots_.emplace(v, slot);
    order_.push_back(v);
    return slot;
}

std::optional<int> VarSlots::find(const CanonicalVar& v) const {
    auto it = slots_.find(v);
    if (it == slots_.end()) return std::nullopt;
    return it->second;
}

CompiledExpr::CompiledExpr(const Expr& e, VarSlots& slots) {
    terms_.reserve(e.terms().size());
    for (const auto& [m, c] : e.terms()) {
        Term t;
        t.coeff = c.to_double();
        for (const auto& [var, exp] : m.factors()) t.powers.emplace_back(slots.slot_of(var), exp);
        terms_.push_back(std::move(t));
    }
}

double CompiledExpr::eval(const std::vector<double>& values) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
        double prod = t.coeff;
        for (const auto& [slot, exp] : t.powers) {
            double v = values[slot];
            for (int k = 0; k < exp; ++k) prod *= v;
        }
        sum += prod;
    }
    return sum;
}

}  // namespace fraclag
