#pragma once

#include "hhq/batch.hpp"
#include "hhq/expr.hpp"
#include "hhq/partition.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hhq {

// Declared shape metadata. Flags are claims made by the caller (or the
// generator); check_shape validates them on a grid.
struct ShapeFlags {
    bool convex = false;
    bool concave = false;
    bool positive = false;
    bool increasing = false;

    bool any() const noexcept { return convex || concave || positive || increasing; }
};

// An evaluatable function of one real variable plus its declared shape.
// Immutable after construction; evaluation is pure and safe to call from
// many threads at once.
class FunctionSpec {
public:
    FunctionSpec(ExprPtr body, ShapeFlags shape, std::string label = {});

    double operator()(double x) const { return evaluate(*body_, x); }
    void eval_batch(std::span<const double> xs, std::span<double> out) const {
        hhq::eval_batch(program_, xs, out);
    }

    const ExprNode& body() const noexcept { return *body_; }
    ExprPtr body_ptr() const noexcept { return body_; }
    const EvalProgram& program() const noexcept { return program_; }
    const ShapeFlags& shape() const noexcept { return shape_; }
    const std::string& label() const noexcept { return label_; }

    FunctionSpec negated() const;

private:
    ExprPtr body_;
    ShapeFlags shape_;
    std::string label_;
    EvalProgram program_;
};

enum class ShapeTarget {
    convex,
    concave,
    positive_convex,
    increasing_positive_convex,
};

// Random convex family f(x) = c0 + c1*x + q*x^2 + sum_i w_i*max(0, x - k_i)
// with q, w_i >= 0. Ranges are validated at construction; lo == hi pins a
// value. Same seed + config + interval always reproduces the same function.
struct ConvexGeneratorConfig {
    std::uint64_t seed = 0;
    int hinge_count_min = 0;
    int hinge_count_max = 4;
    double hinge_weight_min = 0.0;
    double hinge_weight_max = 1.0;
    double quadratic_coeff_min = 0.0;
    double quadratic_coeff_max = 2.0;
    double affine_slope_min = -2.0;
    double affine_slope_max = 2.0;
    double affine_intercept_min = -1.0;
    double affine_intercept_max = 1.0;
    ShapeTarget shape_target = ShapeTarget::convex;

    void validate() const;
};

// Coefficients actually drawn; exposed so determinism is testable.
struct GeneratedCoeffs {
    double c0 = 0.0;
    double c1 = 0.0;
    double quad = 0.0;
    double quad_center = 0.0; // f uses q*(x - quad_center)^2
    std::vector<double> knots;
    std::vector<double> weights;
    double shift = 0.0; // added to c0 to enforce positivity

    bool operator==(const GeneratedCoeffs&) const = default;
};

GeneratedCoeffs generate_convex_coeffs(const ConvexGeneratorConfig& cfg,
                                       Interval interval);
FunctionSpec generate_convex(const ConvexGeneratorConfig& cfg, Interval interval);

// Exact minimum of the (convex, piecewise quadratic) coefficient family over
// the interval: checked at the endpoints, the knots, and each piece's
// unconstrained vertex.
double piecewise_min(const GeneratedCoeffs& c, Interval interval);

struct PredicateResult {
    bool pass = true;
    // first failing probe; u == v for single-point predicates
    std::optional<std::pair<double, double>> counterexample;
};

struct ShapeReport {
    PredicateResult convex;
    PredicateResult concave;
    PredicateResult positive;
    PredicateResult increasing;
};

// Grid checks: midpoint convexity/concavity over all grid pairs, positivity
// and monotonicity pointwise. grid_points >= 3.
ShapeReport check_shape(const FunctionSpec& f, Interval interval,
                        std::size_t grid_points, double tol);

} // namespace hhq
