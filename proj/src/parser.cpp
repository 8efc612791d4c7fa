#include "fraclag/parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace fraclag {

namespace {

enum class TokKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    TokKind kind;
    std::string text;
    SourceSpan span;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
                continue;
            }
            std::size_t start = pos_;
            if (std::isdigit(static_cast<unsigned char>(c))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
                out.push_back({TokKind::Number, text_.substr(start, pos_ - start), {start, pos_}});
                continue;
            }
            if (std::islower(static_cast<unsigned char>(c))) {
                while (pos_ < text_.size() &&
                       std::islower(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
                if (pos_ < text_.size() && text_[pos_] == '_') {
                    ++pos_;
                    while (pos_ < text_.size() &&
                           std::isdigit(static_cast<unsigned char>(text_[pos_])))
                        ++pos_;
                }
                out.push_back({TokKind::Ident, text_.substr(start, pos_ - start), {start, pos_}});
                continue;
            }
            TokKind kind;
            switch (c) {
                case '+': kind = TokKind::Plus; break;
                case '-': kind = TokKind::Minus; break;
                case '*': kind = TokKind::Star; break;
                case '/': kind = TokKind::Slash; break;
                case '^': kind = TokKind::Caret; break;
                case '(': kind = TokKind::LParen; break;
                case ')': kind = TokKind::RParen; break;
                default:
                    throw ParseError(ErrorCode::SyntaxError,
                                     std::string("unexpected character '") + c + "'",
                                     {start, start + 1});
            }
            ++pos_;
            out.push_back({kind, text_.substr(start, 1), {start, pos_}});
        }
        out.push_back({TokKind::End, "", {text_.size(), text_.size()}});
        return out;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, int n) : tokens_(std::move(tokens)), n_(n) {}

    ExprTree run() {
        ExprTree e = parse_expr();
        expect(TokKind::End, "operator or end of input");
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    Token advance() { return tokens_[pos_++]; }

    void expect(TokKind kind, const std::string& what) {
        if (peek().kind != kind)
            throw ParseError(ErrorCode::SyntaxError,
                             "expected " + what + ", found '" + describe(peek()) + "'",
                             peek().span);
        advance();
    }

    static std::string describe(const Token& t) {
        return t.kind == TokKind::End ? "end of input" : t.text;
    }

    ExprTree parse_expr() {
        bool negate = false;
        if (peek().kind == TokKind::Minus) {
            advance();
            negate = true;
        }
        ExprTree acc = parse_term();
        if (negate) acc = ExprTree::negate(std::move(acc));
        while (peek().kind == TokKind::Plus || peek().kind == TokKind::Minus) {
            bool plus = advance().kind == TokKind::Plus;
            ExprTree rhs = parse_term();
            acc = ExprTree::binary(plus ? ExprTree::Op::Add : ExprTree::Op::Sub, std::move(acc),
                                   std::move(rhs));
        }
        return acc;
    }

    ExprTree parse_term() {
        ExprTree acc = parse_factor();
        while (peek().kind == TokKind::Star) {
            advance();
            acc = ExprTree::binary(ExprTree::Op::Mul, std::move(acc), parse_factor());
        }
        return acc;
    }

    ExprTree parse_factor() {
        ExprTree base = parse_primary();
        if (peek().kind != TokKind::Caret) return base;
        advance();
        if (peek().kind == TokKind::Minus)
            throw ParseError(ErrorCode::UnsupportedExpression, "negative exponent", peek().span);
        if (peek().kind != TokKind::Number)
            throw ParseError(ErrorCode::SyntaxError,
                             "expected integer exponent, found '" + describe(peek()) + "'",
                             peek().span);
        Token num = advance();
        long exponent = 0;
        try {
            exponent = std::stol(num.text);
        } catch (const std::exception&) {
            throw ParseError(ErrorCode::UnsupportedExpression, "exponent too large", num.span);
        }
        if (exponent < 1)
            throw ParseError(ErrorCode::UnsupportedExpression, "exponent must be positive",
                             num.span);
        return ExprTree::power(std::move(base), exponent);
    }

    ExprTree parse_primary() {
        const Token& tok = peek();
        switch (tok.kind) {
            case TokKind::LParen: {
                advance();
                ExprTree inner = parse_expr();
                expect(TokKind::RParen, "')'");
                return inner;
            }
            case TokKind::Number: {
                Token num = advance();
                if (peek().kind == TokKind::Slash) {
                    advance();
                    if (peek().kind != TokKind::Number)
                        throw ParseError(ErrorCode::SyntaxError,
                                         "expected integer denominator, found '" +
                                             describe(peek()) + "'",
                                         peek().span);
                    Token den = advance();
                    Rational d = Rational::from_string(den.text);
                    if (d.is_zero())
                        throw ParseError(ErrorCode::SyntaxError,
                                         "zero denominator in rational literal", den.span);
                    return ExprTree::constant(Rational::from_string(num.text) / d);
                }
                return ExprTree::constant(Rational::from_string(num.text));
            }
            case TokKind::Ident: return parse_variable(advance());
            default:
                throw ParseError(ErrorCode::SyntaxError,
                                 "expected number, variable, or '(', found '" + describe(tok) + "'",
                                 tok.span);
        }
    }

    ExprTree parse_variable(const Token& tok) {
        const std::string& s = tok.text;
        std::size_t letters = 0;
        while (letters < s.size() && std::islower(static_cast<unsigned char>(s[letters])))
            ++letters;
        std::string head = s.substr(0, letters);
        std::string tail = s.substr(letters);

        if (head == "t" && tail.empty()) return ExprTree::variable(var_t());
        if (head == "p" && tail == "0") return ExprTree::variable(var_p0());

        auto parse_index = [&](const std::string& digits, const char* what) -> int {
            if (digits.empty() || digits.find('_') != std::string::npos)
                throw ParseError(ErrorCode::SyntaxError,
                                 std::string("malformed ") + what + " '" + s + "'", tok.span);
            long v = 0;
            try {
                v = std::stol(digits);
            } catch (const std::exception&) {
                throw ParseError(ErrorCode::IndexOutOfRange, "index too large in '" + s + "'",
                                 tok.span);
            }
            return static_cast<int>(v);
        };
        auto check_range = [&](int i) {
            if (i < 1 || i > n_)
                throw ParseError(ErrorCode::IndexOutOfRange,
                                 "coordinate index " + std::to_string(i) + " outside 1.." +
                                     std::to_string(n_) + " in '" + s + "'",
                                 tok.span);
        };

        if (head == "j") {
            std::size_t underscore = tail.find('_');
            if (underscore == std::string::npos)
                throw ParseError(ErrorCode::SyntaxError,
                                 "jet variable needs the form j<i>_<k>, got '" + s + "'",
                                 tok.span);
            int i = parse_index(tail.substr(0, underscore), "jet variable");
            int k = parse_index(tail.substr(underscore + 1), "jet variable");
            check_range(i);
            if (k < 1)
                throw ParseError(ErrorCode::SyntaxError, "jet order must be >= 1 in '" + s + "'",
                                 tok.span);
            return ExprTree::variable(var_j(i, k));
        }

        VarKind kind;
        if (head == "x") kind = VarKind::X;
        else if (head == "v") kind = VarKind::V;
        else if (head == "a") kind = VarKind::A;
        else if (head == "p") kind = VarKind::P;
        else if (head == "pi") kind = VarKind::PI;
        else
            throw ParseError(ErrorCode::SyntaxError, "unknown variable '" + s + "'", tok.span);
        int i = parse_index(tail, "variable");
        check_range(i);
        return ExprTree::variable({kind, i, 0});
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int n_;
};

}  // namespace

Expr parse(const std::string& text, int n) {
    if (n < 1) throw Error(ErrorCode::DomainError, "coordinate count must be >= 1");
    return normalize(Parser(Lexer(text).run(), n).run());
}

std::string render(const Expr& e) {
    if (e.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, coeff] : e.terms()) {
        bool negative = coeff.sign() < 0;
        if (first) {
            if (negative) out += "-";
            first = false;
        } else {
            out += negative ? " - " : " + ";
        }
        Rational mag = coeff.abs();
        std::string factors;
        for (const auto& [var, exp] : m.factors()) {
            if (!factors.empty()) factors += "*";
            factors += to_string(var);
            if (exp > 1) factors += "^" + std::to_string(exp);
        }
        if (factors.empty()) {
            out += mag.str();
        } else if (mag.is_one()) {
            out += factors;
        } else {
            out += mag.str() + "*" + factors;
        }
    }
    return out;
}

}  // namespace fraclag
