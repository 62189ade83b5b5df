#include "hhq/ostrowski.hpp"

#include "hhq/errors.hpp"
#include "hhq/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hhq {

namespace {

void require_positive_convex(const FunctionSpec& f, const char* who) {
    if (!f.shape().convex || !f.shape().positive)
        throw ShapeError(std::string(who) +
                         ": function must declare positive and convex");
}

void require_y(const UniformPartition& p, double y, const char* who) {
    if (!(y >= p.interval.a && y <= p.interval.b))
        throw std::invalid_argument(std::string(who) + ": y outside [a, b]");
}

// f(a) + 2 sum_{k=1..n-1} f(x_k) + f(b), ascending k
double endpoint_bracket(const FunctionSpec& f, const UniformPartition& p) {
    std::vector<double> xs(p.n + 1);
    for (std::size_t k = 0; k <= p.n; ++k) xs[k] = p.node(k);
    std::vector<double> fx(xs.size());
    f.eval_batch(xs, fx);
    double inner = 0.0;
    for (std::size_t k = 1; k < p.n; ++k) inner += fx[k];
    return fx[0] + 2.0 * inner + fx[p.n];
}

double midpoint_value_sum(const FunctionSpec& f, const UniformPartition& p) {
    std::vector<double> xs(p.n);
    for (std::size_t k = 1; k <= p.n; ++k) xs[k - 1] = p.midpoint(k);
    std::vector<double> fx(xs.size());
    f.eval_batch(xs, fx);
    double s = 0.0;
    for (double v : fx) s += v;
    return s;
}

BoundReport forward_report(std::string id, double lhs, double rhs, double y,
                           std::size_t n, bool has_y) {
    double slack = rhs - lhs;
    BoundReport r{std::move(id), lhs, rhs, slack, slack >= -verdict_tol(rhs), {}, n};
    if (has_y) r.y = y;
    return r;
}

} // namespace

BoundSides thm2_sides(const FunctionSpec& f, const UniformPartition& p,
                      double y, double integral) {
    double lhs = integral - p.interval.length() * f(y);
    double rhs = (p.h / 2.0) * endpoint_bracket(f, p);
    return {lhs, rhs};
}

BoundReport thm2_bound(const FunctionSpec& f, const UniformPartition& p,
                       double y, double integral) {
    require_positive_convex(f, "thm2_bound");
    require_y(p, y, "thm2_bound");
    auto [lhs, rhs] = thm2_sides(f, p, y, integral);
    return forward_report("thm2", lhs, rhs, y, p.n, true);
}

BoundReport thm3_bound(const FunctionSpec& f, const UniformPartition& p,
                       double y, double integral) {
    require_positive_convex(f, "thm3_bound");
    require_y(p, y, "thm3_bound");
    double lhs = integral - p.interval.length() * f(y);
    double worst = 0.0;
    for (std::size_t j = 1; j <= p.n; ++j)
        worst = std::max(worst, std::fabs(y - p.midpoint(j)));
    double rhs = (p.h / 2.0 + worst) * endpoint_bracket(f, p);
    return forward_report("thm3", lhs, rhs, y, p.n, true);
}

BoundReport thm4_bound(const FunctionSpec& f, const UniformPartition& p,
                       double integral) {
    require_positive_convex(f, "thm4_bound");
    double inv_n = 1.0 / static_cast<double>(p.n);
    double inner = 0.0;
    if (p.n > 1) {
        std::vector<double> xs(p.n - 1);
        for (std::size_t k = 1; k < p.n; ++k) xs[k - 1] = p.node(k);
        std::vector<double> fx(xs.size());
        f.eval_batch(xs, fx);
        for (double v : fx) inner += v;
    }
    double lhs = integral / p.interval.length() -
                 inv_n * midpoint_value_sum(f, p) - inv_n * inner;
    double rhs = (f(p.interval.a) + f(p.interval.b)) /
                 (2.0 * static_cast<double>(p.n));
    return forward_report("thm4", lhs, rhs, 0.0, p.n, false);
}

BoundReport thm5_bound(const FunctionSpec& f, const UniformPartition& p,
                       double y, double integral) {
    const ShapeFlags& s = f.shape();
    if (!s.convex || !s.positive || !s.increasing)
        throw ShapeError(
            "thm5_bound: function must declare increasing, positive and convex");
    require_y(p, y, "thm5_bound");
    double lhs = integral - p.interval.length() / 2.0 * f(y);
    double mid = (p.h / 2.0) * midpoint_value_sum(f, p);
    double slack = lhs - mid;
    double tol = verdict_tol(mid);
    BoundReport r{"thm5", lhs, mid, slack, slack >= -tol && mid >= -tol, y, p.n};
    return r;
}

double weighted_point(const UniformPartition& p, std::span<const double> alphas,
                      bool unscaled) {
    if (alphas.size() != p.n + 1)
        throw std::invalid_argument("weighted_point: need n+1 weights");
    double total = 0.0;
    for (double a : alphas) {
        if (a < 0.0)
            throw std::invalid_argument("weighted_point: weights must be >= 0");
        total += a;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw std::invalid_argument("weighted_point: weights must sum to 1");
    double y = 0.0;
    for (std::size_t i = 0; i <= p.n; ++i) y += alphas[i] * p.node(i);
    if (!unscaled) y /= static_cast<double>(p.n + 1);
    return y;
}

SharpnessResult sharpness_probe(const std::string& theorem_id, Interval interval,
                                std::size_t n) {
    FunctionSpec identity(variable(),
                          {.convex = true, .concave = true, .positive = interval.a >= 0,
                           .increasing = true},
                          "x");
    UniformPartition p(interval, n);
    double exact = (interval.b - interval.a) * (interval.a + interval.b) / 2.0;

    if (theorem_id == "thm1_left") {
        double measured = exact / midpoint_sum(identity, p);
        return {theorem_id, "f(x)=x", measured, 1.0};
    }
    if (theorem_id == "thm1_right") {
        double measured = exact / (p.h * endpoint_bracket(identity, p));
        return {theorem_id, "f(x)=x", measured, 0.5};
    }
    if (theorem_id == "thm2") {
        double lhs = exact - interval.length() * identity(interval.a);
        double measured = lhs / (p.h * endpoint_bracket(identity, p));
        return {theorem_id, "f(x)=x at y=a", measured, 0.5};
    }
    if (theorem_id == "thm5") {
        double mid = (interval.a + interval.b) / 2.0;
        double lhs = exact - interval.length() / 2.0 * identity(mid);
        double measured = lhs / midpoint_sum(identity, p);
        return {theorem_id, "f(x)=x at y=(a+b)/2", measured, 0.5};
    }
    throw std::invalid_argument("sharpness_probe: unknown theorem id '" +
                                theorem_id + "'");
}

} // namespace hhq
