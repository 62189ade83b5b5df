#include "hhq/errors.hpp"
#include "hhq/funcspec.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace hhq;

TEST_CASE("generator is deterministic in (seed, config, interval)") {
    Interval iv(-1.0, 2.0);
    ConvexGeneratorConfig cfg;
    cfg.seed = 99;
    GeneratedCoeffs a = generate_convex_coeffs(cfg, iv);
    GeneratedCoeffs b = generate_convex_coeffs(cfg, iv);
    CHECK(a == b);
    CHECK(unparse(generate_convex(cfg, iv).body()) ==
          unparse(generate_convex(cfg, iv).body()));

    cfg.seed = 100;
    CHECK(!(a == generate_convex_coeffs(cfg, iv)));
}

TEST_CASE("degenerate configs pin exact functions") {
    Interval iv(0.0, 1.0);
    ConvexGeneratorConfig cfg;
    cfg.hinge_count_min = cfg.hinge_count_max = 0;
    cfg.quadratic_coeff_min = cfg.quadratic_coeff_max = 0.0;
    cfg.affine_slope_min = cfg.affine_slope_max = 1.0;
    cfg.affine_intercept_min = cfg.affine_intercept_max = 0.0;
    FunctionSpec ident = generate_convex(cfg, iv);
    for (double x : {0.0, 0.25, 0.7, 1.0}) CHECK(ident(x) == x);

    cfg.affine_slope_min = cfg.affine_slope_max = 0.0;
    cfg.quadratic_coeff_min = cfg.quadratic_coeff_max = 1.0;
    FunctionSpec square = generate_convex(cfg, iv);
    for (double x : {0.0, 0.5, 1.0}) CHECK(square(x) == x * x);
    CHECK(square.shape().convex);
}

TEST_CASE("positive_convex target keeps a 0.1 floor") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        Interval iv = hhqtest::random_interval(rng);
        ConvexGeneratorConfig cfg;
        cfg.seed = rng();
        cfg.shape_target = ShapeTarget::positive_convex;
        FunctionSpec f = generate_convex(cfg, iv);
        CHECK(f.shape().positive);
        CHECK(f.shape().convex);

        double lo = 1e300;
        for (int i = 0; i <= 10000; ++i) {
            double x = iv.a + iv.length() * i / 10000.0;
            lo = std::min(lo, f(i == 10000 ? iv.b : x));
        }
        CHECK(lo >= 0.1 - 1e-12);
    }
}

TEST_CASE("piecewise_min matches a dense grid scan") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        Interval iv = hhqtest::random_interval(rng);
        ConvexGeneratorConfig cfg;
        cfg.seed = rng();
        GeneratedCoeffs c = generate_convex_coeffs(cfg, iv);
        FunctionSpec f = generate_convex(cfg, iv);
        double exact = piecewise_min(c, iv);
        double grid = 1e300;
        for (int i = 0; i <= 20000; ++i) {
            double x = iv.a + iv.length() * i / 20000.0;
            grid = std::min(grid, f(i == 20000 ? iv.b : x));
        }
        CHECK(exact <= grid + 1e-12);
        CHECK(grid - exact <= 1e-4);
    }
}

TEST_CASE("check_shape classifies the standard fixtures") {
    Interval iv(0.0, 1.0);
    ShapeReport sq = check_shape(hhqtest::fn("x^2"), iv, 101, 1e-12);
    CHECK(sq.convex.pass);
    CHECK(!sq.concave.pass);
    CHECK(sq.positive.pass);
    CHECK(sq.increasing.pass);

    ShapeReport nsq = check_shape(hhqtest::fn("-(x^2)"), iv, 101, 1e-12);
    CHECK(!nsq.convex.pass);
    CHECK(nsq.convex.counterexample.has_value());
    CHECK(nsq.concave.pass);

    ShapeReport lin = check_shape(hhqtest::fn("x"), iv, 101, 1e-12);
    CHECK(lin.convex.pass);
    CHECK(lin.concave.pass);
    CHECK(lin.increasing.pass);

    ShapeReport dec = check_shape(hhqtest::fn("1-x"), iv, 101, 1e-12);
    CHECK(!dec.increasing.pass);

    CHECK_THROWS_AS(check_shape(hhqtest::fn("x"), iv, 2, 1e-9),
                    std::invalid_argument);
}

TEST_CASE("generated functions pass check_shape for their declared flags") {
    std::mt19937_64 rng(77);
    const ShapeTarget targets[] = {
        ShapeTarget::convex,
        ShapeTarget::concave,
        ShapeTarget::positive_convex,
        ShapeTarget::increasing_positive_convex,
    };
    for (ShapeTarget target : targets) {
        for (int trial = 0; trial < 5; ++trial) {
            Interval iv = hhqtest::random_interval(rng);
            FunctionSpec f = hhqtest::random_convex(rng, iv, target);
            ShapeReport rep = check_shape(f, iv, 1001, 1e-9);
            if (f.shape().convex) CHECK(rep.convex.pass);
            if (f.shape().concave) CHECK(rep.concave.pass);
            if (f.shape().positive) CHECK(rep.positive.pass);
            if (f.shape().increasing) CHECK(rep.increasing.pass);
        }
    }
}

TEST_CASE("negation swaps convexity flags") {
    FunctionSpec f = hhqtest::convex_fn("x^2");
    FunctionSpec g = f.negated();
    CHECK(g.shape().concave);
    CHECK(!g.shape().convex);
    CHECK(g(0.5) == -0.25);
}

TEST_CASE("config validation rejects bad ranges") {
    Interval iv(0.0, 1.0);
    ConvexGeneratorConfig cfg;
    cfg.quadratic_coeff_min = -1.0;
    CHECK_THROWS_AS(generate_convex(cfg, iv), std::invalid_argument);

    ConvexGeneratorConfig cfg2;
    cfg2.hinge_weight_min = 0.5;
    cfg2.hinge_weight_max = 0.1;
    CHECK_THROWS_AS(generate_convex(cfg2, iv), std::invalid_argument);

    ConvexGeneratorConfig cfg3;
    cfg3.hinge_count_min = -1;
    CHECK_THROWS_AS(generate_convex(cfg3, iv), std::invalid_argument);
}
