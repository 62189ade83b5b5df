#pragma once

#include "hhq/funcspec.hpp"
#include "hhq/partition.hpp"

#include <cstddef>

namespace hhq {

// Reference integrator configuration. `panels` must be a power of two
// >= 1024.
struct OracleConfig {
    std::size_t panels = std::size_t{1} << 16;
};

struct OracleResult {
    double value;
    double uncertainty;
};

// Brute-force composite midpoint integral at high resolution, cross-checked
// at double resolution. The two passes use their own node layout and a
// chunked fixed-order reduction, deliberately separate from the quadrature
// module's sums. Throws OracleError when the cross-check disagrees by more
// than 1e-9 * (1 + |value|).
OracleResult reference_integral(const FunctionSpec& f, Interval interval,
                                OracleConfig config = {});

} // namespace hhq
