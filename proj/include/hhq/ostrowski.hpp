#pragma once

#include "hhq/funcspec.hpp"
#include "hhq/partition.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace hhq {

// One inequality instance. `slack` is oriented so that the verdict is
// holds <=> slack >= -tol with tol = 1e-9 * (1 + |rhs|); for the deviation
// theorems slack = rhs - lhs, for the reverse-direction chain (thm5) it is
// lhs - rhs.
struct BoundReport {
    std::string theorem_id;
    double lhs;
    double rhs;
    double slack;
    bool holds;
    std::optional<double> y;
    std::size_t n;
};

// Deviation of the integral from (b-a)*f(y), bounded by the trapezoid
// bracket (h/2)[f(a) + 2 sum f(x_k) + f(b)]. Requires positive convex f and
// y in [a,b]; the integral is the caller-supplied oracle value.
BoundReport thm2_bound(const FunctionSpec& f, const UniformPartition& p,
                       double y, double integral);

// Same left side, bound [h/2 + max_j |y - (x_{j-1}+x_j)/2|] *
// [f(a) + 2 sum f(x_k) + f(b)].
BoundReport thm3_bound(const FunctionSpec& f, const UniformPartition& p,
                       double y, double integral);

// (1/(b-a)) int f - (1/n) sum f(midpoints) - (1/n) sum f(x_k)
//   <= (f(a)+f(b)) / (2n).
BoundReport thm4_bound(const FunctionSpec& f, const UniformPartition& p,
                       double integral);

// Chain int f - ((b-a)/2) f(y) >= (h/2) sum f(midpoints) >= 0 for increasing
// positive convex f. rhs carries the middle member; slack = lhs - rhs.
BoundReport thm5_bound(const FunctionSpec& f, const UniformPartition& p,
                       double y, double integral);

// Raw sides without shape gating; used by the negation-symmetry tests.
struct BoundSides {
    double lhs;
    double rhs;
};
BoundSides thm2_sides(const FunctionSpec& f, const UniformPartition& p,
                      double y, double integral);

// Weighted evaluation point of the two corollaries. alphas must have n+1
// nonnegative entries summing to 1 (within 1e-12). The displayed form is
// (1/(n+1)) * sum alpha_i x_i; `unscaled` drops the 1/(n+1) factor, which
// keeps the point inside [a,b].
double weighted_point(const UniformPartition& p, std::span<const double> alphas,
                      bool unscaled = false);

struct SharpnessResult {
    std::string theorem_id;
    std::string fixture;
    double measured_constant;
    double paper_constant;
};

// Tightness of each inequality on the identity map f(x) = x. theorem_id is
// one of thm1_left, thm1_right, thm2, thm5. On [0,1] every measured constant
// equals its known sharp value.
SharpnessResult sharpness_probe(const std::string& theorem_id, Interval interval,
                                std::size_t n);

} // namespace hhq
