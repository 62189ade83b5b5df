#include "hhq/funcspec.hpp"

#include "hhq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace hhq {

namespace {

// Reproducible uniform draws: mt19937_64 output folded to [0,1) with the
// top 53 bits, so results do not depend on the standard library's
// distribution implementations.
double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * u01(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    int span = hi - lo + 1;
    int v = lo + static_cast<int>(u01(rng) * span);
    return std::min(v, hi);
}

double eval_coeffs(const GeneratedCoeffs& c, double x) {
    double r = c.c0 + c.shift;
    r += c.c1 * x;
    if (c.quad != 0.0) {
        double d = x - c.quad_center;
        r += c.quad * (d * d);
    }
    for (std::size_t i = 0; i < c.knots.size(); ++i) {
        double d = x - c.knots[i];
        r += c.weights[i] * (d > 0.0 ? d : 0.0);
    }
    return r;
}

ExprPtr build_tree(const GeneratedCoeffs& c) {
    ExprPtr acc;
    auto add_term = [&](ExprPtr t) {
        acc = acc ? binary(OpCode::Add, std::move(acc), std::move(t)) : std::move(t);
    };
    double c0 = c.c0 + c.shift;
    if (c0 != 0.0) add_term(constant(c0));
    if (c.c1 != 0.0)
        add_term(c.c1 == 1.0 ? variable()
                             : binary(OpCode::Mul, constant(c.c1), variable()));
    if (c.quad != 0.0) {
        ExprPtr d = c.quad_center == 0.0
                        ? variable()
                        : binary(OpCode::Sub, variable(), constant(c.quad_center));
        add_term(binary(OpCode::Mul, constant(c.quad),
                        binary(OpCode::Mul, d, d)));
    }
    for (std::size_t i = 0; i < c.knots.size(); ++i) {
        if (c.weights[i] == 0.0) continue;
        ExprPtr hinge = binary(OpCode::Max, constant(0.0),
                               binary(OpCode::Sub, variable(), constant(c.knots[i])));
        add_term(binary(OpCode::Mul, constant(c.weights[i]), std::move(hinge)));
    }
    if (!acc) acc = constant(0.0);
    return acc;
}

} // namespace

FunctionSpec::FunctionSpec(ExprPtr body, ShapeFlags shape, std::string label)
    : body_(std::move(body)), shape_(shape), label_(std::move(label)),
      program_(EvalProgram::compile(*body_)) {
    if (!body_) throw std::invalid_argument("FunctionSpec: null body");
}

FunctionSpec FunctionSpec::negated() const {
    ShapeFlags s;
    s.convex = shape_.concave;
    s.concave = shape_.convex;
    return FunctionSpec(unary(OpCode::Neg, body_), s, "-(" + label_ + ")");
}

void ConvexGeneratorConfig::validate() const {
    auto ordered = [](double lo, double hi) { return lo <= hi; };
    if (hinge_count_min < 0 || hinge_count_min > hinge_count_max)
        throw std::invalid_argument("generator: bad hinge count range");
    if (!ordered(hinge_weight_min, hinge_weight_max) || hinge_weight_min < 0)
        throw std::invalid_argument("generator: hinge weights must be >= 0");
    if (!ordered(quadratic_coeff_min, quadratic_coeff_max) || quadratic_coeff_min < 0)
        throw std::invalid_argument("generator: quadratic coefficient must be >= 0");
    if (!ordered(affine_slope_min, affine_slope_max))
        throw std::invalid_argument("generator: bad slope range");
    if (!ordered(affine_intercept_min, affine_intercept_max))
        throw std::invalid_argument("generator: bad intercept range");
}

GeneratedCoeffs generate_convex_coeffs(const ConvexGeneratorConfig& cfg,
                                       Interval interval) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    GeneratedCoeffs c;

    bool increasing = cfg.shape_target == ShapeTarget::increasing_positive_convex;

    c.c0 = uniform(rng, cfg.affine_intercept_min, cfg.affine_intercept_max);
    if (increasing) {
        double lo = std::max(0.0, cfg.affine_slope_min);
        double hi = std::max(0.0, cfg.affine_slope_max);
        c.c1 = uniform(rng, lo, hi);
    } else {
        c.c1 = uniform(rng, cfg.affine_slope_min, cfg.affine_slope_max);
    }
    c.quad = uniform(rng, cfg.quadratic_coeff_min, cfg.quadratic_coeff_max);
    // Anchoring the parabola at the left endpoint keeps the slope
    // contribution of the quadratic term nonnegative on [a,b].
    c.quad_center = increasing ? interval.a : 0.0;

    int m = uniform_int(rng, cfg.hinge_count_min, cfg.hinge_count_max);
    std::vector<std::pair<double, double>> hinges;
    hinges.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double k = uniform(rng, interval.a, interval.b);
        double w = uniform(rng, cfg.hinge_weight_min, cfg.hinge_weight_max);
        hinges.emplace_back(k, w);
    }
    std::sort(hinges.begin(), hinges.end());
    for (auto& [k, w] : hinges) {
        c.knots.push_back(k);
        c.weights.push_back(w);
    }

    if (cfg.shape_target == ShapeTarget::positive_convex) {
        double lo = piecewise_min(c, interval);
        if (lo < 0.1) c.shift = 0.1 - lo;
    } else if (increasing) {
        double at_a = c.c0 + c.c1 * interval.a; // minimum of a nondecreasing f
        if (at_a < 0.1) c.shift = 0.1 - at_a;
    }
    return c;
}

FunctionSpec generate_convex(const ConvexGeneratorConfig& cfg, Interval interval) {
    GeneratedCoeffs c = generate_convex_coeffs(cfg, interval);
    ExprPtr tree = build_tree(c);
    std::string label = "gen#" + std::to_string(cfg.seed);

    ShapeFlags flags;
    switch (cfg.shape_target) {
    case ShapeTarget::convex:
        flags.convex = true;
        return FunctionSpec(std::move(tree), flags, label);
    case ShapeTarget::concave:
        flags.concave = true;
        return FunctionSpec(unary(OpCode::Neg, std::move(tree)), flags, label);
    case ShapeTarget::positive_convex:
        flags.convex = true;
        flags.positive = true;
        return FunctionSpec(std::move(tree), flags, label);
    case ShapeTarget::increasing_positive_convex:
        flags.convex = true;
        flags.positive = true;
        flags.increasing = true;
        return FunctionSpec(std::move(tree), flags, label);
    }
    throw std::invalid_argument("generate_convex: bad shape target");
}

double piecewise_min(const GeneratedCoeffs& c, Interval interval) {
    std::vector<double> breaks{interval.a};
    for (double k : c.knots)
        if (k > interval.a && k < interval.b) breaks.push_back(k);
    breaks.push_back(interval.b);
    std::sort(breaks.begin(), breaks.end());

    double best = eval_coeffs(c, interval.a);
    for (std::size_t i = 1; i < breaks.size(); ++i)
        best = std::min(best, eval_coeffs(c, breaks[i]));

    if (c.quad > 0.0) {
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            double slope = c.c1 - 2.0 * c.quad * c.quad_center;
            for (std::size_t j = 0; j < c.knots.size(); ++j)
                if (c.knots[j] <= breaks[i]) slope += c.weights[j];
            double vertex = -slope / (2.0 * c.quad);
            if (vertex > breaks[i] && vertex < breaks[i + 1])
                best = std::min(best, eval_coeffs(c, vertex));
        }
    }
    return best;
}

ShapeReport check_shape(const FunctionSpec& f, Interval interval,
                        std::size_t grid_points, double tol) {
    if (grid_points < 3)
        throw std::invalid_argument("check_shape: grid_points must be >= 3");

    const std::size_t g = grid_points;
    std::vector<double> xs(g);
    double step = interval.length() / static_cast<double>(g - 1);
    for (std::size_t i = 0; i < g; ++i)
        xs[i] = i + 1 == g ? interval.b : interval.a + static_cast<double>(i) * step;
    std::vector<double> fx(g);
    f.eval_batch(xs, fx);

    ShapeReport rep;
    for (std::size_t i = 0; i < g; ++i) {
        if (fx[i] < -tol) {
            rep.positive = {false, {{xs[i], xs[i]}}};
            break;
        }
    }
    for (std::size_t i = 0; i + 1 < g; ++i) {
        if (fx[i + 1] < fx[i] - tol) {
            rep.increasing = {false, {{xs[i], xs[i + 1]}}};
            break;
        }
    }

    // midpoint convexity/concavity over all pairs, evaluated in chunks
    constexpr std::size_t kChunk = 8192;
    std::vector<double> mids;
    std::vector<double> fmids;
    std::vector<std::pair<std::size_t, std::size_t>> idx;
    mids.reserve(kChunk);
    fmids.resize(kChunk);
    idx.reserve(kChunk);

    auto flush = [&]() {
        if (mids.empty()) return;
        fmids.resize(mids.size());
        f.eval_batch(mids, fmids);
        for (std::size_t t = 0; t < mids.size(); ++t) {
            auto [i, j] = idx[t];
            double avg = (fx[i] + fx[j]) / 2;
            if (rep.convex.pass && fmids[t] > avg + tol)
                rep.convex = {false, {{xs[i], xs[j]}}};
            if (rep.concave.pass && fmids[t] < avg - tol)
                rep.concave = {false, {{xs[i], xs[j]}}};
        }
        mids.clear();
        idx.clear();
    };

    for (std::size_t i = 0; i < g && (rep.convex.pass || rep.concave.pass); ++i) {
        for (std::size_t j = i + 1; j < g; ++j) {
            mids.push_back((xs[i] + xs[j]) / 2);
            idx.emplace_back(i, j);
            if (mids.size() == kChunk) flush();
        }
    }
    flush();
    return rep;
}

} // namespace hhq
