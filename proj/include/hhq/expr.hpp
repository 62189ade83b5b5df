#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace hhq {

enum class OpCode : std::uint8_t {
    Const,
    Var,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Exp,
    Log,
    Sqrt,
    Abs,
    Max,
};

bool is_binary(OpCode op) noexcept;
bool is_unary(OpCode op) noexcept;
const char* op_name(OpCode op) noexcept;

// Immutable expression tree over a single variable x. Subtrees are shared
// freely; nodes are never mutated after construction.
struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    OpCode op;
    double value = 0.0; // Const only
    ExprPtr lhs;        // operand / left operand
    ExprPtr rhs;        // right operand of binary ops
};

// Builders. `constant` rejects non-finite values.
ExprPtr constant(double v);
ExprPtr variable();
ExprPtr unary(OpCode op, ExprPtr operand);
ExprPtr binary(OpCode op, ExprPtr lhs, ExprPtr rhs);

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?
//   unary  := '-' unary | atom
//   atom   := number | 'x' | '(' expr ')' | ident '(' args ')'
// Identifiers: exp, log, sqrt, abs (1 arg), max (2 args). Whitespace is
// insignificant. '^' is right-associative. Throws ParseError.
ExprPtr parse_expression(std::string_view text);

// Emits a fully parenthesised form that reparses to an equivalent tree;
// constants are printed exactly (shortest round-trip form).
std::string unparse(const ExprNode& node);

// Single-point reference evaluation by recursive tree walk. Throws EvalError
// on domain violations (log of a nonpositive value, division by zero, ...)
// and whenever an operation produces a non-finite value.
double evaluate(const ExprNode& node, double x);

} // namespace hhq
