#include "hhq/refine.hpp"

#include "hhq/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace hhq {

void RefinementPolicy::validate() const {
    if (n_start == 0) throw std::invalid_argument("refine: n_start must be >= 1");
    if (growth < 2) throw std::invalid_argument("refine: growth must be >= 2");
    if (n_max < n_start) throw std::invalid_argument("refine: n_max < n_start");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("refine: abs_tol must be > 0");
    if (rel_tol < 0.0) throw std::invalid_argument("refine: rel_tol must be >= 0");
}

std::pair<Enclosure, ConvergenceTrace>
integrate_to_tolerance(const FunctionSpec& f, Interval interval,
                       const RefinementPolicy& policy) {
    policy.validate();

    ConvergenceTrace trace;
    std::size_t n = policy.n_start;
    Enclosure enc = hh_enclosure(f, UniformPartition(interval, n));
    trace.rows.push_back({n, enc.lower, enc.upper, enc.width()});

    auto tight_enough = [&](const Enclosure& e) {
        return e.width() <= policy.abs_tol + policy.rel_tol * std::fabs(e.midvalue());
    };

    while (!tight_enough(enc)) {
        if (n > policy.n_max / policy.growth) {
            trace.status = RefineStatus::n_max_reached;
            return {enc, std::move(trace)};
        }
        n *= policy.growth;
        enc = hh_enclosure(f, UniformPartition(interval, n));
        trace.rows.push_back({n, enc.lower, enc.upper, enc.width()});
    }
    trace.status = RefineStatus::converged;
    return {enc, std::move(trace)};
}

ConvergenceOrder convergence_order(const ConvergenceTrace& trace) {
    std::vector<const TraceRow*> usable;
    for (const TraceRow& r : trace.rows)
        if (r.width > 0.0) usable.push_back(&r);

    if (usable.empty()) return {true, 0.0};
    if (usable.size() < 3)
        throw std::invalid_argument(
            "convergence_order: need at least 3 rows with nonzero width");

    // slope of v = log(width) against u = log(1/n)
    double su = 0, sv = 0, suu = 0, suv = 0;
    double m = static_cast<double>(usable.size());
    for (const TraceRow* r : usable) {
        double u = std::log(1.0 / static_cast<double>(r->n));
        double v = std::log(r->width);
        su += u;
        sv += v;
        suu += u * u;
        suv += u * v;
    }
    double denom = m * suu - su * su;
    if (denom == 0.0)
        throw std::invalid_argument("convergence_order: degenerate n values");
    return {false, (m * suv - su * sv) / denom};
}

} // namespace hhq
