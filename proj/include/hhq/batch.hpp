#pragma once

#include "hhq/expr.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hhq {

// Stack-machine instruction set. The first block mirrors the expression
// opcodes; the rest are compiler fusions. VarAffine substitutes
// x -> a*x + b for programs built over a transformed argument. The *C forms
// carry one constant operand (exact for finite values: IEEE add/mul
// commute, the others keep operand order). Sqr squares the top of stack
// when both children of a Mul are the same node.
enum class InstrOp : std::uint8_t {
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
    VarAffine, // push a*x + b
    AddC,      // a = a + c
    MulC,      // a = a * c
    SubC,      // a = a - c
    CSub,      // a = c - a
    DivC,      // a = a / c
    CDiv,      // a = c / a
    PowC,      // a = a ^ c
    CPow,      // a = c ^ a
    MaxC,      // a = (a > c) ? a : c
    CMax,      // a = (c > a) ? c : a
    Sqr,       // a = a * a
};

const char* instr_name(InstrOp op) noexcept;

// `a` holds the Const literal, the fused constant, or the VarAffine scale;
// `b` holds the VarAffine offset.
struct Instr {
    InstrOp op;
    double a = 0.0;
    double b = 0.0;
};

// A flattened expression, executed over batches of points by one of the
// runtime-selected kernels. Execution order is a fixed postorder walk, so
// every kernel performs the identical sequence of IEEE operations per point
// and all kernels produce bit-identical results.
class EvalProgram {
public:
    static EvalProgram compile(const ExprNode& root);

    // Compiles g(x) = f(scale*x + offset); the substitution costs one
    // multiply and one add per point.
    static EvalProgram compile_affine(const ExprNode& root, double scale,
                                      double offset);

    std::span<const Instr> code() const noexcept { return code_; }
    std::size_t stack_need() const noexcept { return stack_need_; }

private:
    std::vector<Instr> code_;
    std::size_t stack_need_ = 0;
};

enum class Kernel {
    Scalar,
    Avx2,
};

const char* kernel_name(Kernel k) noexcept;
bool kernel_available(Kernel k) noexcept;

// Kernel in use; defaults to the widest one this CPU supports.
Kernel active_kernel() noexcept;

// Overrides the kernel (tests and benchmarks). Throws std::invalid_argument
// if the CPU lacks it.
void force_kernel(Kernel k);

// Evaluates the program at every xs[i] into out[i]. Throws EvalError the
// same way single-point evaluation does; the reported point is the first
// offending element of the first offending instruction.
void eval_batch(const EvalProgram& prog, std::span<const double> xs,
                std::span<double> out);

} // namespace hhq
