#include "hhq/batch.hpp"

#include "hhq/errors.hpp"
#include "kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hhq {

namespace {

// Chunks keep the whole slot stack L1-resident for typical programs.
constexpr std::size_t kChunk = 512;

// OpCode values are the leading block of InstrOp, so plain ops map by value.
static_assert(static_cast<int>(InstrOp::Const) == static_cast<int>(OpCode::Const));
static_assert(static_cast<int>(InstrOp::Max) == static_cast<int>(OpCode::Max));

InstrOp to_instr(OpCode op) { return static_cast<InstrOp>(op); }

void compile_node(const ExprNode& n, std::vector<Instr>& code,
                  std::size_t depth, std::size_t& max_depth, double scale,
                  double offset, bool affine_var) {
    max_depth = std::max(max_depth, depth + 1);
    if (is_binary(n.op)) {
        bool const_lhs = n.lhs->op == OpCode::Const;
        bool const_rhs = n.rhs->op == OpCode::Const;
        if (n.op == OpCode::Mul && n.lhs.get() == n.rhs.get()) {
            compile_node(*n.lhs, code, depth, max_depth, scale, offset, affine_var);
            code.push_back({InstrOp::Sqr, 0.0, 0.0});
            return;
        }
        if (const_rhs && !const_lhs) {
            InstrOp fused;
            switch (n.op) {
            case OpCode::Add: fused = InstrOp::AddC; break;
            case OpCode::Sub: fused = InstrOp::SubC; break;
            case OpCode::Mul: fused = InstrOp::MulC; break;
            case OpCode::Div: fused = InstrOp::DivC; break;
            case OpCode::Pow: fused = InstrOp::PowC; break;
            default:          fused = InstrOp::MaxC; break;
            }
            compile_node(*n.lhs, code, depth, max_depth, scale, offset, affine_var);
            code.push_back({fused, n.rhs->value, 0.0});
            return;
        }
        if (const_lhs && !const_rhs) {
            InstrOp fused;
            switch (n.op) {
            case OpCode::Add: fused = InstrOp::AddC; break; // finite add commutes
            case OpCode::Mul: fused = InstrOp::MulC; break; // finite mul commutes
            case OpCode::Sub: fused = InstrOp::CSub; break;
            case OpCode::Div: fused = InstrOp::CDiv; break;
            case OpCode::Pow: fused = InstrOp::CPow; break;
            default:          fused = InstrOp::CMax; break;
            }
            compile_node(*n.rhs, code, depth, max_depth, scale, offset, affine_var);
            code.push_back({fused, n.lhs->value, 0.0});
            return;
        }
        compile_node(*n.lhs, code, depth, max_depth, scale, offset, affine_var);
        compile_node(*n.rhs, code, depth + 1, max_depth, scale, offset, affine_var);
        code.push_back({to_instr(n.op), 0.0, 0.0});
        return;
    }
    if (is_unary(n.op)) {
        compile_node(*n.lhs, code, depth, max_depth, scale, offset, affine_var);
        code.push_back({to_instr(n.op), 0.0, 0.0});
        return;
    }
    if (n.op == OpCode::Const) {
        code.push_back({InstrOp::Const, n.value, 0.0});
        return;
    }
    // Var
    if (affine_var)
        code.push_back({InstrOp::VarAffine, scale, offset});
    else
        code.push_back({InstrOp::Var, 0.0, 0.0});
}

std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

Kernel detect_kernel() {
#if defined(HHQ_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2")) return Kernel::Avx2;
#endif
    return Kernel::Scalar;
}

Kernel& kernel_slot() {
    static Kernel k = detect_kernel();
    return k;
}

} // namespace

EvalProgram EvalProgram::compile(const ExprNode& root) {
    EvalProgram p;
    std::size_t max_depth = 0;
    compile_node(root, p.code_, 0, max_depth, 0.0, 0.0, false);
    p.stack_need_ = max_depth;
    return p;
}

EvalProgram EvalProgram::compile_affine(const ExprNode& root, double scale,
                                        double offset) {
    EvalProgram p;
    std::size_t max_depth = 0;
    compile_node(root, p.code_, 0, max_depth, scale, offset, true);
    p.stack_need_ = max_depth;
    return p;
}

const char* instr_name(InstrOp op) noexcept {
    switch (op) {
    case InstrOp::Const:     return "const";
    case InstrOp::Var:       return "x";
    case InstrOp::Neg:       return "neg";
    case InstrOp::Add:       return "add";
    case InstrOp::Sub:       return "sub";
    case InstrOp::Mul:       return "mul";
    case InstrOp::Div:       return "div";
    case InstrOp::Pow:       return "pow";
    case InstrOp::Exp:       return "exp";
    case InstrOp::Log:       return "log";
    case InstrOp::Sqrt:      return "sqrt";
    case InstrOp::Abs:       return "abs";
    case InstrOp::Max:       return "max";
    case InstrOp::VarAffine: return "affine argument";
    case InstrOp::AddC:      return "add";
    case InstrOp::MulC:      return "mul";
    case InstrOp::SubC:      return "sub";
    case InstrOp::CSub:      return "sub";
    case InstrOp::DivC:      return "div";
    case InstrOp::CDiv:      return "div";
    case InstrOp::PowC:      return "pow";
    case InstrOp::CPow:      return "pow";
    case InstrOp::MaxC:      return "max";
    case InstrOp::CMax:      return "max";
    case InstrOp::Sqr:       return "mul";
    }
    return "?";
}

const char* kernel_name(Kernel k) noexcept {
    switch (k) {
    case Kernel::Scalar: return "scalar";
    case Kernel::Avx2:   return "avx2";
    }
    return "?";
}

bool kernel_available(Kernel k) noexcept {
    switch (k) {
    case Kernel::Scalar:
        return true;
    case Kernel::Avx2:
#if defined(HHQ_HAVE_AVX2)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

Kernel active_kernel() noexcept { return kernel_slot(); }

void force_kernel(Kernel k) {
    if (!kernel_available(k))
        throw std::invalid_argument(std::string("kernel not available: ") +
                                    kernel_name(k));
    kernel_slot() = k;
}

void eval_batch(const EvalProgram& prog, std::span<const double> xs,
                std::span<double> out) {
    if (out.size() < xs.size())
        throw std::invalid_argument("eval_batch: output span too small");
    if (xs.empty()) return;

    // per-thread workspace, grown on demand
    thread_local std::vector<double> stack;
    if (stack.size() < prog.stack_need() * kChunk)
        stack.resize(prog.stack_need() * kChunk);
    Kernel k = kernel_slot();

    std::size_t done = 0;
    while (done < xs.size()) {
        std::size_t n = std::min(kChunk, xs.size() - done);
        detail::BadSite bad{};
        bool ok;
        switch (k) {
#if defined(HHQ_HAVE_AVX2)
        case Kernel::Avx2:
            ok = detail::run_avx2(prog.code(), xs.data() + done,
                                  out.data() + done, n, stack.data(), kChunk, bad);
            break;
#endif
        default:
            ok = detail::run_scalar(prog.code(), xs.data() + done,
                                    out.data() + done, n, stack.data(), kChunk,
                                    bad);
            break;
        }
        if (!ok) {
            const Instr& ins = prog.code()[bad.instr];
            double x = xs[done + bad.index];
            throw EvalError(std::string(instr_name(ins.op)) +
                                " produced a non-finite value at x = " + fmt(x),
                            x);
        }
        done += n;
    }
}

} // namespace hhq
