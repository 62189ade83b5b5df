#pragma once

#include <cstddef>

namespace hhq {

// Closed interval [a, b] with a < b, both finite.
struct Interval {
    double a;
    double b;

    Interval(double a_, double b_);
    double length() const noexcept { return b - a; }
};

// Uniform partition of [a, b] into n subintervals of mesh h = (b-a)/n.
// node(n) is clamped to b so the last node never overshoots.
struct UniformPartition {
    Interval interval;
    std::size_t n;
    double h;

    UniformPartition(Interval iv, std::size_t count);

    // k in 0..n
    double node(std::size_t k) const noexcept {
        return k == n ? interval.b : interval.a + static_cast<double>(k) * h;
    }
    // k in 1..n
    double midpoint(std::size_t k) const noexcept {
        return (node(k - 1) + node(k)) / 2;
    }
};

} // namespace hhq
