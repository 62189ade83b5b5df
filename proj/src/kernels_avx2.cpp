#include "kernels.hpp"

#if defined(HHQ_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstring>
#include <limits>

namespace hhq::detail {

namespace {

inline double max_op(double a, double b) { return a > b ? a : b; }

const __m256d kSignMask = _mm256_set1_pd(-0.0);
const __m256d kInf = _mm256_set1_pd(std::numeric_limits<double>::infinity());

// True lanes where |v| >= inf or v is NaN (unordered compare).
inline __m256d not_finite(__m256d v) {
    __m256d absv = _mm256_andnot_pd(kSignMask, v);
    return _mm256_cmp_pd(absv, kInf, _CMP_NLT_UQ);
}

inline std::size_t first_bad(const double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(v[i])) return i;
    return 0;
}

// Vector body for the four arithmetic ops; the sticky mask accumulates
// non-finite lanes so the loop stays single-pass.
template <typename VOp, typename SOp>
inline bool binary_loop(double* a, const double* b, std::size_t n, VOp vop,
                        SOp sop) {
    __m256d sticky = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = vop(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(a + i, v);
        sticky = _mm256_or_pd(sticky, not_finite(v));
    }
    bool ok = _mm256_movemask_pd(sticky) == 0;
    for (; i < n; ++i) {
        double v = sop(a[i], b[i]);
        a[i] = v;
        ok &= std::isfinite(v);
    }
    return ok;
}

// Lane-by-lane libm loop shared by exp/log/pow so results are reproducible
// across kernels.
template <typename SOp>
inline bool libm_unary_loop(double* a, std::size_t n, SOp sop) {
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        double v = sop(a[i]);
        a[i] = v;
        ok &= std::isfinite(v);
    }
    return ok;
}

// In-place vector op with one broadcast constant operand.
template <typename VOp, typename SOp>
inline bool const_loop(double* a, std::size_t n, double c, VOp vop, SOp sop) {
    __m256d cv = _mm256_set1_pd(c);
    __m256d sticky = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = vop(_mm256_loadu_pd(a + i), cv);
        _mm256_storeu_pd(a + i, v);
        sticky = _mm256_or_pd(sticky, not_finite(v));
    }
    bool ok = _mm256_movemask_pd(sticky) == 0;
    for (; i < n; ++i) {
        double v = sop(a[i], c);
        a[i] = v;
        ok &= std::isfinite(v);
    }
    return ok;
}

} // namespace

bool run_avx2(std::span<const Instr> code, const double* xs, double* out,
              std::size_t n, double* stack, std::size_t stride, BadSite& bad) {
    std::size_t top = 0;
    double* slot = nullptr;

    for (std::size_t ic = 0; ic < code.size(); ++ic) {
        const Instr& ins = code[ic];
        bool ok = true;
        std::size_t i = 0;
        switch (ins.op) {
        case InstrOp::Const: {
            slot = stack + stride * top++;
            __m256d c = _mm256_set1_pd(ins.a);
            for (; i + 4 <= n; i += 4) _mm256_storeu_pd(slot + i, c);
            for (; i < n; ++i) slot[i] = ins.a;
            break;
        }
        case InstrOp::Var:
            slot = stack + stride * top++;
            std::memcpy(slot, xs, n * sizeof(double));
            break;
        case InstrOp::VarAffine: {
            slot = stack + stride * top++;
            __m256d s = _mm256_set1_pd(ins.a);
            __m256d o = _mm256_set1_pd(ins.b);
            __m256d sticky = _mm256_setzero_pd();
            for (; i + 4 <= n; i += 4) {
                __m256d v =
                    _mm256_add_pd(_mm256_mul_pd(s, _mm256_loadu_pd(xs + i)), o);
                _mm256_storeu_pd(slot + i, v);
                sticky = _mm256_or_pd(sticky, not_finite(v));
            }
            ok = _mm256_movemask_pd(sticky) == 0;
            for (; i < n; ++i) {
                double v = ins.a * xs[i] + ins.b;
                slot[i] = v;
                ok &= std::isfinite(v);
            }
            break;
        }
        case InstrOp::Neg:
            slot = stack + stride * (top - 1);
            for (; i + 4 <= n; i += 4)
                _mm256_storeu_pd(slot + i,
                                 _mm256_xor_pd(_mm256_loadu_pd(slot + i), kSignMask));
            for (; i < n; ++i) slot[i] = -slot[i];
            break;
        case InstrOp::Abs:
            slot = stack + stride * (top - 1);
            for (; i + 4 <= n; i += 4)
                _mm256_storeu_pd(slot + i,
                                 _mm256_andnot_pd(kSignMask, _mm256_loadu_pd(slot + i)));
            for (; i < n; ++i) slot[i] = std::fabs(slot[i]);
            break;
        case InstrOp::Sqrt: {
            slot = stack + stride * (top - 1);
            __m256d sticky = _mm256_setzero_pd();
            for (; i + 4 <= n; i += 4) {
                __m256d v = _mm256_sqrt_pd(_mm256_loadu_pd(slot + i));
                _mm256_storeu_pd(slot + i, v);
                sticky = _mm256_or_pd(sticky, not_finite(v));
            }
            ok = _mm256_movemask_pd(sticky) == 0;
            for (; i < n; ++i) {
                double v = std::sqrt(slot[i]);
                slot[i] = v;
                ok &= std::isfinite(v);
            }
            break;
        }
        case InstrOp::Exp:
            slot = stack + stride * (top - 1);
            ok = libm_unary_loop(slot, n, [](double v) { return std::exp(v); });
            break;
        case InstrOp::Log:
            slot = stack + stride * (top - 1);
            ok = libm_unary_loop(slot, n, [](double v) { return std::log(v); });
            break;
        case InstrOp::Add:
            slot = stack + stride * (top - 2);
            ok = binary_loop(
                slot, stack + stride * (top - 1), n,
                [](__m256d a, __m256d b) { return _mm256_add_pd(a, b); },
                [](double a, double b) { return a + b; });
            --top;
            break;
        case InstrOp::Sub:
            slot = stack + stride * (top - 2);
            ok = binary_loop(
                slot, stack + stride * (top - 1), n,
                [](__m256d a, __m256d b) { return _mm256_sub_pd(a, b); },
                [](double a, double b) { return a - b; });
            --top;
            break;
        case InstrOp::Mul:
            slot = stack + stride * (top - 2);
            ok = binary_loop(
                slot, stack + stride * (top - 1), n,
                [](__m256d a, __m256d b) { return _mm256_mul_pd(a, b); },
                [](double a, double b) { return a * b; });
            --top;
            break;
        case InstrOp::Div:
            slot = stack + stride * (top - 2);
            ok = binary_loop(
                slot, stack + stride * (top - 1), n,
                [](__m256d a, __m256d b) { return _mm256_div_pd(a, b); },
                [](double a, double b) { return a / b; });
            --top;
            break;
        case InstrOp::Pow: {
            double* a = stack + stride * (top - 2);
            const double* b = stack + stride * (top - 1);
            ok = true;
            for (; i < n; ++i) {
                double v = std::pow(a[i], b[i]);
                a[i] = v;
                ok &= std::isfinite(v);
            }
            slot = a;
            --top;
            break;
        }
        case InstrOp::Max: {
            double* a = stack + stride * (top - 2);
            const double* b = stack + stride * (top - 1);
            // maxpd(a, b) == (a > b) ? a : b, matching max_op exactly
            for (; i + 4 <= n; i += 4)
                _mm256_storeu_pd(a + i, _mm256_max_pd(_mm256_loadu_pd(a + i),
                                                      _mm256_loadu_pd(b + i)));
            for (; i < n; ++i) a[i] = max_op(a[i], b[i]);
            slot = a;
            --top;
            break;
        }
        case InstrOp::AddC:
            slot = stack + stride * (top - 1);
            ok = const_loop(
                slot, n, ins.a,
                [](__m256d a, __m256d c) { return _mm256_add_pd(a, c); },
                [](double a, double c) { return a + c; });
            break;
        case InstrOp::MulC:
            slot = stack + stride * (top - 1);
            ok = const_loop(
                slot, n, ins.a,
                [](__m256d a, __m256d c) { return _mm256_mul_pd(a, c); },
                [](double a, double c) { return a * c; });
            break;
        case InstrOp::SubC:
            slot = stack + stride * (top - 1);
            ok = const_loop(
                slot, n, ins.a,
                [](__m256d a, __m256d c) { return _mm256_sub_pd(a, c); },
                [](double a, double c) { return a - c; });
            break;
        case InstrOp::CSub:
            slot = stack + stride * (top - 1);
            ok = const_loop(
                slot, n, ins.a,
                [](__m256d a, __m256d c) { return _mm256_sub_pd(c, a); },
                [](double a, double c) { return c - a; });
            break;
        case InstrOp::DivC:
            slot = stack + stride * (top - 1);
            ok = const_loop(
                slot, n, ins.a,
                [](__m256d a, __m256d c) { return _mm256_div_pd(a, c); },
                [](double a, double c) { return a / c; });
            break;
        case InstrOp::CDiv:
            slot = stack + stride * (top - 1);
            ok = const_loop(
                slot, n, ins.a,
                [](__m256d a, __m256d c) { return _mm256_div_pd(c, a); },
                [](double a, double c) { return c / a; });
            break;
        case InstrOp::PowC:
            slot = stack + stride * (top - 1);
            ok = libm_unary_loop(
                slot, n, [c = ins.a](double v) { return std::pow(v, c); });
            break;
        case InstrOp::CPow:
            slot = stack + stride * (top - 1);
            ok = libm_unary_loop(
                slot, n, [c = ins.a](double v) { return std::pow(c, v); });
            break;
        case InstrOp::MaxC:
            slot = stack + stride * (top - 1);
            const_loop(
                slot, n, ins.a,
                [](__m256d a, __m256d c) { return _mm256_max_pd(a, c); },
                [](double a, double c) { return max_op(a, c); });
            break;
        case InstrOp::CMax:
            slot = stack + stride * (top - 1);
            const_loop(
                slot, n, ins.a,
                [](__m256d a, __m256d c) { return _mm256_max_pd(c, a); },
                [](double a, double c) { return max_op(c, a); });
            break;
        case InstrOp::Sqr: {
            slot = stack + stride * (top - 1);
            __m256d sticky = _mm256_setzero_pd();
            for (; i + 4 <= n; i += 4) {
                __m256d v = _mm256_loadu_pd(slot + i);
                v = _mm256_mul_pd(v, v);
                _mm256_storeu_pd(slot + i, v);
                sticky = _mm256_or_pd(sticky, not_finite(v));
            }
            ok = _mm256_movemask_pd(sticky) == 0;
            for (; i < n; ++i) {
                double v = slot[i] * slot[i];
                slot[i] = v;
                ok &= std::isfinite(v);
            }
            break;
        }
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

#endif // HHQ_HAVE_AVX2
