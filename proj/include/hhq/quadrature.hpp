#pragma once

#include "hhq/funcspec.hpp"
#include "hhq/partition.hpp"

#include <cstddef>
#include <optional>

namespace hhq {

enum class Orientation { convex, concave };

// Certified bracket around an integral. For a correctly declared function
// lower <= upper up to evaluation rounding; construction enforces
// lower <= upper + 1e-12 * (1 + |upper|).
struct Enclosure {
    double lower;
    double upper;
    std::size_t n_used;
    Orientation orientation;

    double width() const noexcept { return upper - lower; }
    double midvalue() const noexcept { return (lower + upper) / 2; }
};

// User-supplied bound on sup |f''| over the interval; never estimated.
struct SecondDerivativeBound {
    double sup_abs_f2;
    explicit SecondDerivativeBound(double v);
};

// h * sum_{k=1..n} f(midpoint(k)), accumulated in ascending k order.
double midpoint_sum(const FunctionSpec& f, const UniformPartition& p);

// (h/2) * [f(a) + 2*sum_{k=1..n-1} f(node(k)) + f(b)], ascending k order.
double trapezoid_sum(const FunctionSpec& f, const UniformPartition& p);

// Two-sided bracket: (midpoint_sum, trapezoid_sum) for convex f, swapped for
// concave f. Throws ShapeError if the function declares neither flag.
Enclosure hh_enclosure(const FunctionSpec& f, const UniformPartition& p);

// The n = 1 special case of hh_enclosure.
Enclosure classical_hh(const FunctionSpec& f, Interval interval);

// Explicit closed-form node layouts for n = 1..4; agrees with hh_enclosure
// at the same n up to rounding.
Enclosure corollary_closed_form(const FunctionSpec& f, Interval interval, int n);

// A-priori one-panel error magnitudes.
double midpoint_error_bound(Interval interval, SecondDerivativeBound d2);
double trapezoid_error_bound(Interval interval, SecondDerivativeBound d2);

struct CompositeResult {
    double value;
    // present when a derivative bound was supplied
    std::optional<double> error_bound;
};

// Composite midpoint rule in the indexing h = (b-a)/(n+2), x_j = a+(j+1)h,
// value = 2h * sum_{j=0..n/2} f(x_{2j}); n must be even. Error magnitude
// bound (b-a)/6 * h^2 * sup|f''|.
CompositeResult composite_midpoint_bf(const FunctionSpec& f, Interval interval,
                                      std::size_t n,
                                      std::optional<SecondDerivativeBound> d2 = {});

// Composite trapezoid rule, h = (b-a)/n; matches trapezoid_sum on the same
// partition. Error magnitude bound (b-a)/12 * h^2 * sup|f''|.
CompositeResult composite_trapezoid_bf(const FunctionSpec& f, Interval interval,
                                       std::size_t n,
                                       std::optional<SecondDerivativeBound> d2 = {});

// Members of the rearranged chain
//   sum f(midpoints) - sum_{k=1..n-1} f(x_k)
//     <= (1/h) * integral - sum_{k=1..n-1} f(x_k)
//     <= (f(a)+f(b))/2
// for convex f. The integral is supplied by the caller (oracle value).
struct OstrowskiChain {
    double lhs_gap;
    double mid_gap;
    double rhs;
};

OstrowskiChain ostrowski_rearrangement(const FunctionSpec& f,
                                       const UniformPartition& p,
                                       double integral);

// Slack convention used by inequality verdicts everywhere in this library.
inline double verdict_tol(double reference) {
    return 1e-9 * (1.0 + (reference < 0 ? -reference : reference));
}

} // namespace hhq
