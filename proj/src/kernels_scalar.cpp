#include "kernels.hpp"

#include <cmath>
#include <cstring>

namespace hhq::detail {

namespace {

// Max semantics are pinned to (a > b) ? a : b so that scalar and SIMD
// kernels agree bit for bit, including NaN and signed-zero handling.
inline double max_op(double a, double b) { return a > b ? a : b; }

// The finite check rides inside each op loop; the buffer is rescanned for
// the first offender only on failure.
inline std::size_t first_bad(const double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(v[i])) return i;
    return 0;
}

template <typename Op>
inline bool unary_loop(double* a, std::size_t n, Op op) {
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        double v = op(a[i]);
        a[i] = v;
        ok &= std::isfinite(v);
    }
    return ok;
}

template <typename Op>
inline bool binary_loop(double* a, const double* b, std::size_t n, Op op) {
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        double v = op(a[i], b[i]);
        a[i] = v;
        ok &= std::isfinite(v);
    }
    return ok;
}

} // namespace

bool run_scalar(std::span<const Instr> code, const double* xs, double* out,
                std::size_t n, double* stack, std::size_t stride, BadSite& bad) {
    std::size_t top = 0; // slots in use
    double* slot = nullptr;

    for (std::size_t ic = 0; ic < code.size(); ++ic) {
        const Instr& ins = code[ic];
        bool ok = true;
        switch (ins.op) {
        case InstrOp::Const:
            slot = stack + stride * top++;
            for (std::size_t i = 0; i < n; ++i) slot[i] = ins.a;
            break;
        case InstrOp::Var:
            slot = stack + stride * top++;
            std::memcpy(slot, xs, n * sizeof(double));
            break;
        case InstrOp::VarAffine: {
            slot = stack + stride * top++;
            const double s = ins.a;
            const double o = ins.b;
            ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                double v = s * xs[i] + o;
                slot[i] = v;
                ok &= std::isfinite(v);
            }
            break;
        }
        case InstrOp::Neg:
            slot = stack + stride * (top - 1);
            unary_loop(slot, n, [](double v) { return -v; });
            break;
        case InstrOp::Abs:
            slot = stack + stride * (top - 1);
            unary_loop(slot, n, [](double v) { return std::fabs(v); });
            break;
        case InstrOp::Exp:
            slot = stack + stride * (top - 1);
            ok = unary_loop(slot, n, [](double v) { return std::exp(v); });
            break;
        case InstrOp::Log:
            slot = stack + stride * (top - 1);
            ok = unary_loop(slot, n, [](double v) { return std::log(v); });
            break;
        case InstrOp::Sqrt:
            slot = stack + stride * (top - 1);
            ok = unary_loop(slot, n, [](double v) { return std::sqrt(v); });
            break;
        case InstrOp::Add:
            slot = stack + stride * (top - 2);
            ok = binary_loop(slot, stack + stride * (top - 1), n,
                             [](double a, double b) { return a + b; });
            --top;
            break;
        case InstrOp::Sub:
            slot = stack + stride * (top - 2);
            ok = binary_loop(slot, stack + stride * (top - 1), n,
                             [](double a, double b) { return a - b; });
            --top;
            break;
        case InstrOp::Mul:
            slot = stack + stride * (top - 2);
            ok = binary_loop(slot, stack + stride * (top - 1), n,
                             [](double a, double b) { return a * b; });
            --top;
            break;
        case InstrOp::Div:
            slot = stack + stride * (top - 2);
            ok = binary_loop(slot, stack + stride * (top - 1), n,
                             [](double a, double b) { return a / b; });
            --top;
            break;
        case InstrOp::Pow:
            slot = stack + stride * (top - 2);
            ok = binary_loop(slot, stack + stride * (top - 1), n,
                             [](double a, double b) { return std::pow(a, b); });
            --top;
            break;
        case InstrOp::Max:
            slot = stack + stride * (top - 2);
            binary_loop(slot, stack + stride * (top - 1), n, max_op);
            --top;
            break;
        case InstrOp::AddC:
            slot = stack + stride * (top - 1);
            ok = unary_loop(slot, n, [c = ins.a](double v) { return v + c; });
            break;
        case InstrOp::MulC:
            slot = stack + stride * (top - 1);
            ok = unary_loop(slot, n, [c = ins.a](double v) { return v * c; });
            break;
        case InstrOp::SubC:
            slot = stack + stride * (top - 1);
            ok = unary_loop(slot, n, [c = ins.a](double v) { return v - c; });
            break;
        case InstrOp::CSub:
            slot = stack + stride * (top - 1);
            ok = unary_loop(slot, n, [c = ins.a](double v) { return c - v; });
            break;
        case InstrOp::DivC:
            slot = stack + stride * (top - 1);
            ok = unary_loop(slot, n, [c = ins.a](double v) { return v / c; });
            break;
        case InstrOp::CDiv:
            slot = stack + stride * (top - 1);
            ok = unary_loop(slot, n, [c = ins.a](double v) { return c / v; });
            break;
        case InstrOp::PowC:
            slot = stack + stride * (top - 1);
            ok = unary_loop(slot, n,
                            [c = ins.a](double v) { return std::pow(v, c); });
            break;
        case InstrOp::CPow:
            slot = stack + stride * (top - 1);
            ok = unary_loop(slot, n,
                            [c = ins.a](double v) { return std::pow(c, v); });
            break;
        case InstrOp::MaxC:
            slot = stack + stride * (top - 1);
            unary_loop(slot, n, [c = ins.a](double v) { return max_op(v, c); });
            break;
        case InstrOp::CMax:
            slot = stack + stride * (top - 1);
            unary_loop(slot, n, [c = ins.a](double v) { return max_op(c, v); });
            break;
        case InstrOp::Sqr:
            slot = stack + stride * (top - 1);
            ok = unary_loop(slot, n, [](double v) { return v * v; });
            break;
        }
        if (!ok) {
            bad = {ic, first_bad(slot, n)};
            return false;
        }
    }
    std::memcpy(out, stack, n * sizeof(double));
    return true;
}

} // namespace hhq::detail
