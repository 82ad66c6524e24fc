#pragma once

// Parser and evaluator for the t-dependent coefficient functions a1(t)..a5(t).
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-')? power
//   power  := atom ('^' number)?
//   atom   := number | 't' | func '(' expr ')' | '(' expr ')'
// with func in {sin, cos, exp, log, sqrt, tanh}. Exponents are numeric
// literals only.

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kslie::expr {

enum class NodeKind { Constant, Time, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Func { Sin, Cos, Exp, Log, Sqrt, Tanh };

struct Node {
    NodeKind kind;
    double value = 0.0;  // Constant payload; for Pow, the literal exponent
    Func func = Func::Sin;
    std::size_t offset = 0;  // byte offset in the source, for diagnostics
    std::shared_ptr<const Node> lhs, rhs;
};

struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " at byte " + std::to_string(off)), offset(off) {}
};

struct EvalError : std::runtime_error {
    std::size_t offset;
    EvalError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " (node at byte " + std::to_string(off) + ")"), offset(off) {}
};

/// Immutable expression tree; cheap to copy and share across threads.
class Expr {
public:
    Expr() = default;
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    double eval(double t) const;
    std::string render() const;  // fully parenthesized
    const Node* root() const { return root_.get(); }

    friend bool operator==(const Expr& a, const Expr& b);

private:
    std::shared_ptr<const Node> root_;
};

Expr parse(std::string_view source);

/// The five coefficient expressions a1(t)..a5(t), index alpha-1.
struct CoeffSet {
    std::array<Expr, 5> a;

    std::array<double, 5> eval(double t) const {
        return {a[0].eval(t), a[1].eval(t), a[2].eval(t), a[3].eval(t), a[4].eval(t)};
    }
};

CoeffSet parse_coeffs(const std::array<std::string, 5>& sources);

}  // namespace kslie::expr
