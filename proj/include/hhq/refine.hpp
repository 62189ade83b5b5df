#pragma once

#include "hhq/funcspec.hpp"
#include "hhq/partition.hpp"
#include "hhq/quadrature.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace hhq {

// Doubling-style refinement driver. Stops once the bracket width reaches
// abs_tol + rel_tol * |midvalue| or n would exceed n_max.
struct RefinementPolicy {
    std::size_t n_start = 1;
    std::size_t growth = 2; // integer >= 2 keeps successive partitions nested
    std::size_t n_max = std::size_t{1} << 20;
    double abs_tol;
    double rel_tol = 0.0;

    void validate() const;
};

enum class RefineStatus { converged, n_max_reached };

struct TraceRow {
    std::size_t n;
    double lower;
    double upper;
    double width;
};

struct ConvergenceTrace {
    std::vector<TraceRow> rows;
    RefineStatus status;
};

std::pair<Enclosure, ConvergenceTrace>
integrate_to_tolerance(const FunctionSpec& f, Interval interval,
                       const RefinementPolicy& policy);

// Least-squares slope of log(width) against log(1/n). Rows with zero width
// are skipped; an all-zero trace (affine integrand) reports infinite order.
// Needs at least 3 usable rows otherwise.
struct ConvergenceOrder {
    bool infinite;
    double order; // meaningful when !infinite
};

ConvergenceOrder convergence_order(const ConvergenceTrace& trace);

} // namespace hhq
