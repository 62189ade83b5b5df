#include "hhq/quadrature.hpp"

#include "hhq/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hhq {

namespace {

Enclosure make_enclosure(double lower, double upper, std::size_t n,
                         Orientation orient) {
    if (!(lower <= upper + 1e-12 * (1.0 + std::fabs(upper))))
        throw ShapeError("enclosure inverted; declared shape flags look wrong");
    return {lower, upper, n, orient};
}

double eval_points_sum(const FunctionSpec& f, const std::vector<double>& xs) {
    std::vector<double> fx(xs.size());
    f.eval_batch(xs, fx);
    double s = 0.0;
    for (double v : fx) s += v;
    return s;
}

} // namespace

SecondDerivativeBound::SecondDerivativeBound(double v) : sup_abs_f2(v) {
    if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument("SecondDerivativeBound: need finite value >= 0");
}

double midpoint_sum(const FunctionSpec& f, const UniformPartition& p) {
    std::vector<double> xs(p.n);
    for (std::size_t k = 1; k <= p.n; ++k) xs[k - 1] = p.midpoint(k);
    return eval_points_sum(f, xs) * p.h;
}

double trapezoid_sum(const FunctionSpec& f, const UniformPartition& p) {
    std::vector<double> xs(p.n + 1);
    for (std::size_t k = 0; k <= p.n; ++k) xs[k] = p.node(k);
    std::vector<double> fx(xs.size());
    f.eval_batch(xs, fx);
    double inner = 0.0;
    for (std::size_t k = 1; k < p.n; ++k) inner += fx[k];
    double bracket = fx[0] + 2.0 * inner + fx[p.n];
    return (p.h / 2.0) * bracket;
}

Enclosure hh_enclosure(const FunctionSpec& f, const UniformPartition& p) {
    const ShapeFlags& s = f.shape();
    if (!s.convex && !s.concave)
        throw ShapeError("hh_enclosure: function declares neither convex nor concave");
    double mid = midpoint_sum(f, p);
    double trap = trapezoid_sum(f, p);
    if (s.convex)
        return make_enclosure(mid, trap, p.n, Orientation::convex);
    return make_enclosure(trap, mid, p.n, Orientation::concave);
}

Enclosure classical_hh(const FunctionSpec& f, Interval interval) {
    return hh_enclosure(f, UniformPartition(interval, 1));
}

Enclosure corollary_closed_form(const FunctionSpec& f, Interval interval, int n) {
    const ShapeFlags& s = f.shape();
    if (!s.convex && !s.concave)
        throw ShapeError("corollary_closed_form: function declares neither convex nor concave");
    const double a = interval.a;
    const double b = interval.b;
    const double len = b - a;
    double lo = 0.0;
    double hi = 0.0;
    switch (n) {
    case 1:
        lo = len * f((a + b) / 2);
        hi = len * (f(a) + f(b)) / 2;
        break;
    case 2:
        lo = (len / 2) * (f((3 * a + b) / 4) + f((a + 3 * b) / 4));
        hi = (len / 4) * (f(a) + 2 * f((a + b) / 2) + f(b));
        break;
    case 3:
        lo = (len / 3) *
             (f((5 * a + b) / 6) + f((a + b) / 2) + f((a + 5 * b) / 6));
        hi = (len / 6) *
             (f(a) + 2 * f((2 * a + b) / 3) + 2 * f((a + 2 * b) / 3) + f(b));
        break;
    case 4:
        lo = (len / 4) * (f((7 * a + b) / 8) + f((5 * a + 3 * b) / 8) +
                          f((3 * a + 5 * b) / 8) + f((a + 7 * b) / 8));
        hi = (len / 8) * (f(a) + 2 * f((3 * a + b) / 4) + 2 * f((a + b) / 2) +
                          2 * f((a + 3 * b) / 4) + f(b));
        break;
    default:
        throw std::invalid_argument("corollary_closed_form: n must be 1..4");
    }
    if (s.convex)
        return make_enclosure(lo, hi, static_cast<std::size_t>(n), Orientation::convex);
    return make_enclosure(hi, lo, static_cast<std::size_t>(n), Orientation::concave);
}

double midpoint_error_bound(Interval interval, SecondDerivativeBound d2) {
    double len = interval.length();
    return len * len * len / 24.0 * d2.sup_abs_f2;
}

double trapezoid_error_bound(Interval interval, SecondDerivativeBound d2) {
    double len = interval.length();
    return len * len * len / 12.0 * d2.sup_abs_f2;
}

CompositeResult composite_midpoint_bf(const FunctionSpec& f, Interval interval,
                                      std::size_t n,
                                      std::optional<SecondDerivativeBound> d2) {
    if (n == 0 || n % 2 != 0)
        throw std::invalid_argument("composite_midpoint_bf: n must be even and positive");
    double h = interval.length() / static_cast<double>(n + 2);
    std::vector<double> xs(n / 2 + 1);
    for (std::size_t j = 0; j <= n / 2; ++j)
        xs[j] = interval.a + static_cast<double>(2 * j + 1) * h;
    double value = 2.0 * h * eval_points_sum(f, xs);
    CompositeResult r{value, {}};
    if (d2)
        r.error_bound = interval.length() / 6.0 * h * h * d2->sup_abs_f2;
    return r;
}

CompositeResult composite_trapezoid_bf(const FunctionSpec& f, Interval interval,
                                       std::size_t n,
                                       std::optional<SecondDerivativeBound> d2) {
    if (n == 0)
        throw std::invalid_argument("composite_trapezoid_bf: n must be positive");
    // Spelled out with unclamped nodes x_j = a + j*h on purpose: agreement
    // with trapezoid_sum is checked by tests, not shared code.
    double h = interval.length() / static_cast<double>(n);
    std::vector<double> xs(n + 1);
    for (std::size_t j = 0; j <= n; ++j)
        xs[j] = interval.a + static_cast<double>(j) * h;
    std::vector<double> fx(xs.size());
    f.eval_batch(xs, fx);
    double inner = 0.0;
    for (std::size_t j = 1; j < n; ++j) inner += fx[j];
    double value = (h / 2.0) * (fx[0] + 2.0 * inner + fx[n]);
    CompositeResult r{value, {}};
    if (d2)
        r.error_bound = interval.length() / 12.0 * h * h * d2->sup_abs_f2;
    return r;
}

OstrowskiChain ostrowski_rearrangement(const FunctionSpec& f,
                                       const UniformPartition& p,
                                       double integral) {
    if (!f.shape().convex)
        throw ShapeError("ostrowski_rearrangement: function must declare convex");
    std::vector<double> mids(p.n);
    for (std::size_t k = 1; k <= p.n; ++k) mids[k - 1] = p.midpoint(k);
    double mid_sum = eval_points_sum(f, mids);

    double inner = 0.0;
    if (p.n > 1) {
        std::vector<double> xs(p.n - 1);
        for (std::size_t k = 1; k < p.n; ++k) xs[k - 1] = p.node(k);
        inner = eval_points_sum(f, xs);
    }
    double rhs = (f(p.interval.a) + f(p.interval.b)) / 2;
    return {mid_sum - inner, integral / p.h - inner, rhs};
}

} // namespace hhq
