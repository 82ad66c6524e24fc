#include "kslie/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace kslie::expr {

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    std::shared_ptr<const Node> run() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("empty expression", 0);
        auto e = expr();
        skip_ws();
        if (pos_ < src_.size()) throw ParseError("trailing input", pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static std::shared_ptr<const Node> make(NodeKind k, std::size_t off,
                                            std::shared_ptr<const Node> l = nullptr,
                                            std::shared_ptr<const Node> r = nullptr) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->offset = off;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    std::shared_ptr<const Node> expr() {
        auto lhs = term();
        for (;;) {
            std::size_t off = pos_;
            if (consume('+')) {
                lhs = make(NodeKind::Add, off, lhs, term());
            } else if (consume('-')) {
                lhs = make(NodeKind::Sub, off, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    std::shared_ptr<const Node> term() {
        auto lhs = factor();
        for (;;) {
            std::size_t off = pos_;
            if (consume('*')) {
                lhs = make(NodeKind::Mul, off, lhs, factor());
            } else if (consume('/')) {
                lhs = make(NodeKind::Div, off, lhs, factor());
            } else {
                return lhs;
            }
        }
    }

    std::shared_ptr<const Node> factor() {
        std::size_t off = pos_;
        if (consume('-')) return make(NodeKind::Negate, off, power());
        return power();
    }

    std::shared_ptr<const Node> power() {
        auto base = atom();
        std::size_t off = pos_;
        if (consume('^')) {
            // exponents are numeric literals only, optionally signed
            skip_ws();
            bool neg = consume('-');
            skip_ws();
            double e = number_literal();
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::Pow;
            n->offset = off;
            n->value = neg ? -e : e;
            n->lhs = std::move(base);
            return n;
        }
        return base;
    }

    double number_literal() {
        skip_ws();
        std::size_t start = pos_;
        double out;
        auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), out);
        if (ec != std::errc() || ptr == src_.data() + pos_)
            throw ParseError("expected number", start);
        pos_ = static_cast<std::size_t>(ptr - src_.data());
        return out;
    }

    std::shared_ptr<const Node> atom() {
        char c = peek();
        std::size_t off = pos_;
        if (c == '(') {
            ++pos_;
            auto e = expr();
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::Constant;
            n->offset = off;
            n->value = number_literal();
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   std::isalpha(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            std::string_view ident = src_.substr(start, pos_ - start);
            if (ident == "t") return make(NodeKind::Time, start);
            Func f;
            if (ident == "sin") f = Func::Sin;
            else if (ident == "cos") f = Func::Cos;
            else if (ident == "exp") f = Func::Exp;
            else if (ident == "log") f = Func::Log;
            else if (ident == "sqrt") f = Func::Sqrt;
            else if (ident == "tanh") f = Func::Tanh;
            else throw ParseError("unknown identifier '" + std::string(ident) + "'", start);
            if (!consume('(')) throw ParseError("expected '(' after function name", pos_);
            auto arg = expr();
            if (consume(',')) throw ParseError("functions take exactly one argument", pos_ - 1);
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            auto n = make(NodeKind::Call, start, arg);
            auto mut = std::const_pointer_cast<Node>(n);
            mut->func = f;
            return n;
        }
        throw ParseError("unexpected character", off);
    }
};

double eval_node(const Node& n, double t) {
    switch (n.kind) {
        case NodeKind::Constant: return n.value;
        case NodeKind::Time: return t;
        case NodeKind::Negate: return -eval_node(*n.lhs, t);
        case NodeKind::Add: return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
        case NodeKind::Sub: return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
        case NodeKind::Mul: return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
        case NodeKind::Div: {
            double d = eval_node(*n.rhs, t);
            if (d == 0.0) throw EvalError("division by zero", n.offset);
            return eval_node(*n.lhs, t) / d;
        }
        case NodeKind::Pow: {
            double r = std::pow(eval_node(*n.lhs, t), n.value);
            if (!std::isfinite(r)) throw EvalError("non-finite power", n.offset);
            return r;
        }
        case NodeKind::Call: {
            double a = eval_node(*n.lhs, t);
            switch (n.func) {
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
                case Func::Exp: {
                    double r = std::exp(a);
                    if (!std::isfinite(r)) throw EvalError("exp overflow", n.offset);
                    return r;
                }
                case Func::Log:
                    if (a <= 0.0) throw EvalError("log of non-positive value", n.offset);
                    return std::log(a);
                case Func::Sqrt:
                    if (a < 0.0) throw EvalError("sqrt of negative value", n.offset);
                    return std::sqrt(a);
                case Func::Tanh: return std::tanh(a);
            }
        }
    }
    throw EvalError("corrupt node", n.offset);
}

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sqrt: return "sqrt";
        case Func::Tanh: return "tanh";
    }
    return "?";
}

void render_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case NodeKind::Constant: {
            char buf[32];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, n.value);
            out.append(buf, ptr);
            return;
        }
        case NodeKind::Time: out += 't'; return;
        case NodeKind::Negate:
            out += "(-";
            render_node(*n.lhs, out);
            out += ')';
            return;
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
        case NodeKind::Div: {
            char op = n.kind == NodeKind::Add ? '+'
                    : n.kind == NodeKind::Sub ? '-'
                    : n.kind == NodeKind::Mul ? '*' : '/';
            out += '(';
            render_node(*n.lhs, out);
            out += op;
            render_node(*n.rhs, out);
            out += ')';
            return;
        }
        case NodeKind::Pow: {
            out += '(';
            render_node(*n.lhs, out);
            out += '^';
            char buf[32];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, n.value);
            out.append(buf, ptr);
            out += ')';
            return;
        }
        case NodeKind::Call:
            out += func_name(n.func);
            out += '(';
            render_node(*n.lhs, out);
            out += ')';
            return;
    }
}

bool equal_nodes(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    if ((a->kind == NodeKind::Constant || a->kind == NodeKind::Pow) && a->value != b->value)
        return false;
    if (a->kind == NodeKind::Call && a->func != b->func) return false;
    return equal_nodes(a->lhs.get(), b->lhs.get()) && equal_nodes(a->rhs.get(), b->rhs.get());
}

}  // namespace

double Expr::eval(double t) const {
    if (!root_) throw EvalError("empty expression", 0);
    double r = eval_node(*root_, t);
    if (!std::isfinite(r)) throw EvalError("non-finite result", root_->offset);
    return r;
}

std::string Expr::render() const {
    std::string out;
    if (root_) render_node(*root_, out);
    return out;
}

bool operator==(const Expr& a, const Expr& b) { return equal_nodes(a.root_.get(), b.root_.get()); }

Expr parse(std::string_view source) { return Expr(Parser(source).run()); }

CoeffSet parse_coeffs(const std::array<std::string, 5>& sources) {
    CoeffSet cs;
    for (int i = 0; i < 5; ++i) cs.a[i] = parse(sources[i]);
    return cs;
}

}  // namespace kslie::expr
