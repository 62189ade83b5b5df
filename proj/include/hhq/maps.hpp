#pragma once

#include "hhq/funcspec.hpp"
#include "hhq/partition.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace hhq {

// Evaluation settings for the interpolation maps.
//
// H_j(t) = (1/h) * int_{x_{j-1}}^{x_j} f(t*u + (1-t)*(x_{j-1}+x_j)/2) du
// F_j(t) = (1/h) * int [ f((1+t)/2*x_{j-1} + (1-t)/2*u)
//                      + f((1+t)/2*x_j   + (1-t)/2*u) ] du
//
// With `f_halved` the F integrand carries an extra overall factor 1/2, which
// is the normalization that makes F(1) the endpoint average and F(0) the
// integral mean; the raw form is off by a factor two at both ends. Both
// variants are monotone nondecreasing and convex in t.
struct MapConfig {
    std::size_t inner_panels = std::size_t{1} << 16; // >= 64
    bool f_halved = true;
};

double eval_Hj(const FunctionSpec& f, const UniformPartition& p, std::size_t j,
               double t, const MapConfig& cfg = {});
double eval_Fj(const FunctionSpec& f, const UniformPartition& p, std::size_t j,
               double t, const MapConfig& cfg = {});

// H(t) = sum_j H_j(t), F(t) = sum_j F_j(t); fixed ascending-j reduction.
double eval_H(const FunctionSpec& f, const UniformPartition& p, double t,
              const MapConfig& cfg = {});
double eval_F(const FunctionSpec& f, const UniformPartition& p, double t,
              const MapConfig& cfg = {});

// H and F sampled on the same closed uniform t-grid in one sweep.
struct MapTable {
    std::vector<double> t;
    std::vector<double> H;
    std::vector<double> F;
};

MapTable map_table(const FunctionSpec& f, const UniformPartition& p,
                   std::size_t t_points, const MapConfig& cfg = {});

struct MapPropertyCheck {
    std::string property;
    double observed; // worst offending value (or measured deviation)
    double reference;
    double slack;
    bool holds;
};

// Grid checks of monotonicity, midpoint convexity in t, and the endpoint
// identities H(0), H(1), F(0), F(1). The integral is the caller-supplied
// oracle value. t_points >= 3.
std::vector<MapPropertyCheck> verify_map_properties(const FunctionSpec& f,
                                                    const UniformPartition& p,
                                                    std::size_t t_points,
                                                    double tol,
                                                    double integral,
                                                    const MapConfig& cfg = {});

} // namespace hhq
