#include "hhq/expr.hpp"

#include "hhq/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hhq {

bool is_binary(OpCode op) noexcept {
    switch (op) {
    case OpCode::Add:
    case OpCode::Sub:
    case OpCode::Mul:
    case OpCode::Div:
    case OpCode::Pow:
    case OpCode::Max:
        return true;
    default:
        return false;
    }
}

bool is_unary(OpCode op) noexcept {
    switch (op) {
    case OpCode::Neg:
    case OpCode::Exp:
    case OpCode::Log:
    case OpCode::Sqrt:
    case OpCode::Abs:
        return true;
    default:
        return false;
    }
}

const char* op_name(OpCode op) noexcept {
    switch (op) {
    case OpCode::Const: return "const";
    case OpCode::Var:   return "x";
    case OpCode::Neg:   return "neg";
    case OpCode::Add:   return "add";
    case OpCode::Sub:   return "sub";
    case OpCode::Mul:   return "mul";
    case OpCode::Div:   return "div";
    case OpCode::Pow:   return "pow";
    case OpCode::Exp:   return "exp";
    case OpCode::Log:   return "log";
    case OpCode::Sqrt:  return "sqrt";
    case OpCode::Abs:   return "abs";
    case OpCode::Max:   return "max";
    }
    return "?";
}

ExprPtr constant(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("constant must be finite");
    auto n = std::make_shared<ExprNode>();
    n->op = OpCode::Const;
    n->value = v;
    return n;
}

ExprPtr variable() {
    auto n = std::make_shared<ExprNode>();
    n->op = OpCode::Var;
    return n;
}

ExprPtr unary(OpCode op, ExprPtr operand) {
    if (!is_unary(op)) throw std::invalid_argument("unary(): not a unary op");
    if (!operand) throw std::invalid_argument("unary(): null operand");
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->lhs = std::move(operand);
    return n;
}

ExprPtr binary(OpCode op, ExprPtr lhs, ExprPtr rhs) {
    if (!is_binary(op)) throw std::invalid_argument("binary(): not a binary op");
    if (!lhs || !rhs) throw std::invalid_argument("binary(): null operand");
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ExprPtr parse() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("empty expression", 0);
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ < text_.size())
            fail("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what, std::size_t at) const {
        throw ParseError(what + " at offset " + std::to_string(at), at);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool consume(char c) {
        if (peek_is(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* ctx) {
        if (!consume(c))
            fail(std::string("expected '") + c + "' " + ctx, pos_);
    }

    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        for (;;) {
            if (consume('+'))
                e = binary(OpCode::Add, std::move(e), parse_term());
            else if (consume('-'))
                e = binary(OpCode::Sub, std::move(e), parse_term());
            else
                return e;
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        for (;;) {
            if (consume('*'))
                e = binary(OpCode::Mul, std::move(e), parse_factor());
            else if (consume('/'))
                e = binary(OpCode::Div, std::move(e), parse_factor());
            else
                return e;
        }
    }

    ExprPtr parse_factor() {
        ExprPtr base = parse_unary();
        if (consume('^'))
            return binary(OpCode::Pow, std::move(base), parse_factor());
        return base;
    }

    ExprPtr parse_unary() {
        if (consume('-'))
            return unary(OpCode::Neg, parse_unary());
        return parse_atom();
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_expr();
            expect(')', "to close parenthesis");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)))
            return parse_ident();
        fail("unexpected character", pos_);
    }

    ExprPtr parse_number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
                ++pos_;
            if (pos_ < text_.size() &&
                std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark; // bare 'e' is not an exponent
            }
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (ec != std::errc() || ptr != text_.data() + pos_ || !std::isfinite(v))
            fail("malformed number", start);
        return constant(v);
    }

    ExprPtr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_'))
            ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);
        if (name == "x") return variable();

        OpCode op;
        std::size_t arity;
        if (name == "exp") { op = OpCode::Exp; arity = 1; }
        else if (name == "log") { op = OpCode::Log; arity = 1; }
        else if (name == "sqrt") { op = OpCode::Sqrt; arity = 1; }
        else if (name == "abs") { op = OpCode::Abs; arity = 1; }
        else if (name == "max") { op = OpCode::Max; arity = 2; }
        else fail("unknown identifier '" + std::string(name) + "'", start);

        expect('(', "after function name");
        std::vector<ExprPtr> args;
        args.push_back(parse_expr());
        while (consume(','))
            args.push_back(parse_expr());
        expect(')', "to close argument list");
        if (args.size() != arity)
            fail("'" + std::string(name) + "' takes " + std::to_string(arity) +
                     " argument(s), got " + std::to_string(args.size()),
                 start);
        if (arity == 1) return unary(op, std::move(args[0]));
        return binary(op, std::move(args[0]), std::move(args[1]));
    }
};

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

void unparse_into(const ExprNode& n, std::string& out) {
    switch (n.op) {
    case OpCode::Const:
        if (n.value < 0 || (n.value == 0 && std::signbit(n.value))) {
            // negative literal reparses as neg(|literal|); same value exactly
            out += '(';
            out += format_double(n.value);
            out += ')';
        } else {
            out += format_double(n.value);
        }
        return;
    case OpCode::Var:
        out += 'x';
        return;
    case OpCode::Neg:
        out += "(-";
        unparse_into(*n.lhs, out);
        out += ')';
        return;
    case OpCode::Add:
    case OpCode::Sub:
    case OpCode::Mul:
    case OpCode::Div:
    case OpCode::Pow: {
        const char* sym = n.op == OpCode::Add   ? " + "
                          : n.op == OpCode::Sub ? " - "
                          : n.op == OpCode::Mul ? " * "
                          : n.op == OpCode::Div ? " / "
                                                : " ^ ";
        out += '(';
        unparse_into(*n.lhs, out);
        out += sym;
        unparse_into(*n.rhs, out);
        out += ')';
        return;
    }
    case OpCode::Exp:
    case OpCode::Log:
    case OpCode::Sqrt:
    case OpCode::Abs:
        out += op_name(n.op);
        out += '(';
        unparse_into(*n.lhs, out);
        out += ')';
        return;
    case OpCode::Max:
        out += "max(";
        unparse_into(*n.lhs, out);
        out += ", ";
        unparse_into(*n.rhs, out);
        out += ')';
        return;
    }
}

[[noreturn]] void eval_fail(OpCode op, double x) {
    throw EvalError(std::string(op_name(op)) +
                        " produced a non-finite value at x = " + format_double(x),
                    x);
}

} // namespace

ExprPtr parse_expression(std::string_view text) {
    return Parser(text).parse();
}

std::string unparse(const ExprNode& node) {
    std::string out;
    unparse_into(node, out);
    return out;
}

double evaluate(const ExprNode& n, double x) {
    double r;
    switch (n.op) {
    case OpCode::Const: return n.value;
    case OpCode::Var:   return x;
    case OpCode::Neg:   return -evaluate(*n.lhs, x);
    case OpCode::Abs:   return std::fabs(evaluate(*n.lhs, x));
    case OpCode::Add:   r = evaluate(*n.lhs, x) + evaluate(*n.rhs, x); break;
    case OpCode::Sub:   r = evaluate(*n.lhs, x) - evaluate(*n.rhs, x); break;
    case OpCode::Mul:   r = evaluate(*n.lhs, x) * evaluate(*n.rhs, x); break;
    case OpCode::Div:   r = evaluate(*n.lhs, x) / evaluate(*n.rhs, x); break;
    case OpCode::Pow:   r = std::pow(evaluate(*n.lhs, x), evaluate(*n.rhs, x)); break;
    case OpCode::Exp:   r = std::exp(evaluate(*n.lhs, x)); break;
    case OpCode::Log:   r = std::log(evaluate(*n.lhs, x)); break;
    case OpCode::Sqrt:  r = std::sqrt(evaluate(*n.lhs, x)); break;
    case OpCode::Max: {
        // (a > b) ? a : b, bit-compatible with the SIMD max kernels
        double a = evaluate(*n.lhs, x);
        double b = evaluate(*n.rhs, x);
        return a > b ? a : b;
    }
    default: r = std::numeric_limits<double>::quiet_NaN(); break;
    }
    if (!std::isfinite(r)) eval_fail(n.op, x);
    return r;
}

} // namespace hhq
