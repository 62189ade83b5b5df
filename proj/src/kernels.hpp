#pragma once

// Internal kernel entry points. Each runs a compiled program over one chunk
// of points using `stack` as workspace (stack_need slots of `stride`
// doubles). On a non-finite result the kernel stops and reports the
// instruction and element index; all kernels report the same site because
// they execute the same operation sequence.

#include "hhq/batch.hpp"

#include <cstddef>

namespace hhq::detail {

struct BadSite {
    std::size_t instr;
    std::size_t index;
};

// Returns false and fills `bad` if some instruction produced a non-finite
// value.
bool run_scalar(std::span<const Instr> code, const double* xs, double* out,
                std::size_t n, double* stack, std::size_t stride, BadSite& bad);

#if defined(HHQ_HAVE_AVX2)
bool run_avx2(std::span<const Instr> code, const double* xs, double* out,
              std::size_t n, double* stack, std::size_t stride, BadSite& bad);
#endif

} // namespace hhq::detail
