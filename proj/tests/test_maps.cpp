#include "hhq/errors.hpp"
#include "hhq/maps.hpp"
#include "hhq/oracle.hpp"
#include "hhq/quadrature.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hhq;

TEST_CASE("H map closed forms on x^2 over [0,1], n=1") {
    FunctionSpec sq = hhqtest::convex_fn("x^2");
    UniformPartition p(Interval(0.0, 1.0), 1);

    CHECK(eval_Hj(sq, p, 1, 0.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(eval_Hj(sq, p, 1, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(eval_Hj(sq, p, 1, 0.5) == doctest::Approx(13.0 / 48.0).epsilon(1e-9));

    CHECK_THROWS_AS(eval_Hj(sq, p, 0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(eval_Hj(sq, p, 2, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(eval_Hj(sq, p, 1, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(eval_Hj(sq, p, 1, 0.5, {.inner_panels = 32}),
                    std::invalid_argument);
}

TEST_CASE("F map closed forms on x^2 over [0,1], n=1") {
    FunctionSpec sq = hhqtest::convex_fn("x^2");
    UniformPartition p(Interval(0.0, 1.0), 1);

    // raw displayed form carries twice the claimed endpoint values
    MapConfig raw{.inner_panels = std::size_t{1} << 16, .f_halved = false};
    CHECK(eval_Fj(sq, p, 1, 0.0, raw) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(eval_Fj(sq, p, 1, 1.0, raw) == doctest::Approx(1.0).epsilon(1e-12));

    MapConfig halved; // default
    CHECK(eval_Fj(sq, p, 1, 0.0, halved) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(eval_Fj(sq, p, 1, 1.0, halved) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("H and F aggregate per-subinterval maps in fixed order") {
    FunctionSpec sq = hhqtest::convex_fn("x^2");
    UniformPartition p(Interval(0.0, 1.0), 2);

    double h0 = eval_H(sq, p, 0.0);
    CHECK(h0 == doctest::Approx(sq(0.25) + sq(0.75)).epsilon(1e-12));

    double h1 = eval_H(sq, p, 1.0);
    CHECK(h1 == doctest::Approx((1.0 / 3.0) / p.h).epsilon(1e-9));

    double f1 = eval_F(sq, p, 1.0);
    CHECK(f1 == doctest::Approx(trapezoid_sum(sq, p) / p.h).epsilon(1e-9));

    double sum_parts = eval_Fj(sq, p, 1, 0.3) + eval_Fj(sq, p, 2, 0.3);
    CHECK(eval_F(sq, p, 0.3) == doctest::Approx(sum_parts).epsilon(1e-13));
}

TEST_CASE("affine functions give a constant H map") {
    FunctionSpec lin = hhqtest::convex_fn("2*x + 1");
    UniformPartition p(Interval(0.0, 1.0), 2);
    double h0 = eval_H(lin, p, 0.0);
    for (double t : {0.25, 0.5, 0.75, 1.0})
        CHECK(eval_H(lin, p, t) == doctest::Approx(h0).epsilon(1e-9));
}

TEST_CASE("map table spans the closed t grid") {
    FunctionSpec sq = hhqtest::convex_fn("x^2");
    UniformPartition p(Interval(0.0, 1.0), 1);
    MapTable tab = map_table(sq, p, 11, {.inner_panels = 4096});
    REQUIRE(tab.t.size() == 11);
    CHECK(tab.t.front() == 0.0);
    CHECK(tab.t.back() == 1.0);
    CHECK(tab.H.front() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(tab.F.back() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("map properties hold for x^2 and fail predictably unhalved") {
    FunctionSpec sq = hhqtest::convex_fn("x^2");
    UniformPartition p(Interval(0.0, 1.0), 1);
    double integral = 1.0 / 3.0;

    auto checks = verify_map_properties(sq, p, 11, 1e-7, integral);
    for (const MapPropertyCheck& c : checks) CHECK(c.holds);

    MapConfig raw;
    raw.f_halved = false;
    auto raw_checks = verify_map_properties(sq, p, 11, 1e-7, integral, raw);
    for (const MapPropertyCheck& c : raw_checks) {
        bool f_identity = c.property == "F1_equals_endpoint_bracket" ||
                          c.property == "F0_equals_integral_mean";
        CHECK(c.holds == !f_identity);
    }
}

TEST_CASE("map properties on generated convex functions") {
    std::mt19937_64 rng(63);
    MapConfig mc{.inner_panels = std::size_t{1} << 14, .f_halved = true};
    const double tol = 1e-6;
    for (int trial = 0; trial < 5; ++trial) {
        Interval iv = hhqtest::random_interval(rng);
        FunctionSpec f = hhqtest::random_convex(rng, iv);
        double integral =
            reference_integral(f, iv, {std::size_t{1} << 18}).value;
        for (std::size_t n : {1, 2, 4}) {
            UniformPartition p(iv, n);
            auto checks = verify_map_properties(f, p, 31, tol, integral, mc);
            for (const MapPropertyCheck& c : checks) {
                INFO(c.property << " n=" << n << " slack=" << c.slack);
                CHECK(c.holds);
            }

            // chain consistency: h*H(0) <= h*H(1) ~= integral <= h*F(1)
            double h0 = eval_H(f, p, 0.0, mc) * p.h;
            double h1 = eval_H(f, p, 1.0, mc) * p.h;
            double fe = eval_F(f, p, 1.0, mc) * p.h;
            CHECK(h0 <= integral + verdict_tol(integral));
            CHECK(std::fabs(h1 - integral) <= 1e-5 * (1.0 + std::fabs(integral)));
            CHECK(integral <= fe + verdict_tol(fe));
        }
    }
}

TEST_CASE("map evaluation propagates domain errors") {
    FunctionSpec f = hhqtest::convex_fn("log(x)");
    UniformPartition p(Interval(-1.0, 1.0), 1);
    CHECK_THROWS_AS(eval_Hj(f, p, 1, 1.0, {.inner_panels = 1024}), EvalError);
}
