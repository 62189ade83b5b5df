#pragma once

#include "hhq/funcspec.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace hhqtest {

inline hhq::FunctionSpec fn(const std::string& text, hhq::ShapeFlags flags = {}) {
    return hhq::FunctionSpec(hhq::parse_expression(text), flags, text);
}

inline hhq::FunctionSpec convex_fn(const std::string& text) {
    return fn(text, {.convex = true});
}

inline double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * u01(rng);
}

inline hhq::Interval random_interval(std::mt19937_64& rng, double max_len = 5.0) {
    double a = uniform(rng, -5.0, 5.0);
    double len = uniform(rng, 0.2, max_len);
    return hhq::Interval(a, a + len);
}

inline hhq::FunctionSpec random_convex(std::mt19937_64& rng, hhq::Interval iv,
                                       hhq::ShapeTarget target = hhq::ShapeTarget::convex) {
    hhq::ConvexGeneratorConfig cfg;
    cfg.seed = rng();
    cfg.shape_target = target;
    return hhq::generate_convex(cfg, iv);
}

} // namespace hhqtest
