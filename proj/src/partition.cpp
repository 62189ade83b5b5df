#include "hhq/partition.hpp"

#include <cmath>
#include <stdexcept>

namespace hhq {

Interval::Interval(double a_, double b_) : a(a_), b(b_) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("Interval: endpoints must be finite");
    if (!(a < b))
        throw std::invalid_argument("Interval: requires a < b");
}

UniformPartition::UniformPartition(Interval iv, std::size_t count)
    : interval(iv), n(count), h((iv.b - iv.a) / static_cast<double>(count)) {
    if (count == 0)
        throw std::invalid_argument("UniformPartition: n must be positive");
    if (!std::isfinite(h) || h <= 0.0)
        throw std::invalid_argument("UniformPartition: degenerate mesh");
}

} // namespace hhq
