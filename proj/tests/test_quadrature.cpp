#include "hhq/errors.hpp"
#include "hhq/oracle.hpp"
#include "hhq/quadrature.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hhq;

namespace {
const OracleConfig kFine{std::size_t{1} << 18};
}

TEST_CASE("midpoint and trapezoid sums on fixtures") {
    Interval iv(0.0, 1.0);
    FunctionSpec lin = hhqtest::convex_fn("x");
    FunctionSpec sq = hhqtest::convex_fn("x^2");
    FunctionSpec zero = hhqtest::fn("0");

    for (std::size_t n : {1, 3, 7, 64}) {
        UniformPartition p(iv, n);
        CHECK(midpoint_sum(lin, p) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(trapezoid_sum(lin, p) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(midpoint_sum(zero, p) == 0.0);
    }

    UniformPartition p2(iv, 2);
    CHECK(midpoint_sum(sq, p2) == 0.3125);
    CHECK(trapezoid_sum(sq, p2) == 0.375);

    FunctionSpec c = hhqtest::fn("2.5");
    UniformPartition pc(Interval(-1.0, 3.0), 5);
    CHECK(trapezoid_sum(c, pc) == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("hh_enclosure brackets and orients") {
    Interval iv(0.0, 1.0);
    UniformPartition p2(iv, 2);

    Enclosure e = hh_enclosure(hhqtest::convex_fn("x^2"), p2);
    CHECK(e.lower == 0.3125);
    CHECK(e.upper == 0.375);
    CHECK(e.n_used == 2);
    CHECK(e.lower <= 1.0 / 3.0);
    CHECK(1.0 / 3.0 <= e.upper);

    Enclosure c = hh_enclosure(hhqtest::fn("-(x^2)", {.concave = true}), p2);
    CHECK(c.lower == -0.375);
    CHECK(c.upper == -0.3125);
    CHECK(c.orientation == Orientation::concave);

    Enclosure lin = hh_enclosure(hhqtest::convex_fn("x"), UniformPartition(iv, 3));
    CHECK(lin.width() <= 1e-15);

    CHECK_THROWS_AS(hh_enclosure(hhqtest::fn("x^2"), p2), ShapeError);
}

TEST_CASE("classical enclosure is the n=1 case") {
    Interval iv(0.0, 1.0);
    Enclosure sq = classical_hh(hhqtest::convex_fn("x^2"), iv);
    CHECK(sq.lower == 0.25);
    CHECK(sq.upper == 0.5);

    Enclosure ex = classical_hh(hhqtest::convex_fn("exp(x)"), iv);
    CHECK(ex.lower == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
    CHECK(ex.upper == doctest::Approx((1.0 + std::exp(1.0)) / 2).epsilon(1e-12));
    double e1 = std::exp(1.0) - 1.0;
    CHECK(ex.lower <= e1);
    CHECK(e1 <= ex.upper);

    Enclosure aff = classical_hh(hhqtest::convex_fn("2*x+1"), Interval(0.0, 3.0));
    CHECK(aff.lower == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(aff.upper == doctest::Approx(12.0).epsilon(1e-12));

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        Interval riv = hhqtest::random_interval(rng);
        FunctionSpec f = hhqtest::random_convex(rng, riv);
        Enclosure a = hh_enclosure(f, UniformPartition(riv, 1));
        Enclosure b = classical_hh(f, riv);
        CHECK(a.lower == b.lower); // 0 difference
        CHECK(a.upper == b.upper);
    }
}

TEST_CASE("corollary closed forms") {
    Interval iv(0.0, 1.0);
    FunctionSpec sq = hhqtest::convex_fn("x^2");

    Enclosure n2 = corollary_closed_form(sq, iv, 2);
    CHECK(n2.lower == 0.3125);

    Enclosure n3 = corollary_closed_form(sq, iv, 3);
    CHECK(n3.lower == doctest::Approx(35.0 / 108.0).epsilon(1e-14));

    Enclosure n4 = corollary_closed_form(hhqtest::convex_fn("x"), iv, 4);
    CHECK(n4.lower == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(n4.upper == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(corollary_closed_form(sq, iv, 5), std::invalid_argument);
    CHECK_THROWS_AS(corollary_closed_form(sq, iv, 0), std::invalid_argument);

    std::mt19937_64 rng(57);
    for (int trial = 0; trial < 30; ++trial) {
        Interval riv = hhqtest::random_interval(rng);
        FunctionSpec f = hhqtest::random_convex(rng, riv);
        for (int n = 1; n <= 4; ++n) {
            Enclosure hh = hh_enclosure(f, UniformPartition(riv, n));
            Enclosure cf = corollary_closed_form(f, riv, n);
            double budget = 1e-12 * (1.0 + std::max(std::fabs(hh.lower),
                                                    std::fabs(hh.upper)));
            CHECK(std::fabs(hh.lower - cf.lower) <= budget);
            CHECK(std::fabs(hh.upper - cf.upper) <= budget);
        }
    }
}

TEST_CASE("one-panel error bounds attain equality on x^2") {
    Interval iv(0.0, 1.0);
    FunctionSpec sq = hhqtest::convex_fn("x^2");
    const double exact = 1.0 / 3.0;

    double mb = midpoint_error_bound(iv, SecondDerivativeBound(2.0));
    CHECK(mb == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    double mid_actual = std::fabs(exact - 1.0 * sq(0.5));
    CHECK(std::fabs(mid_actual - mb) <= 1e-12);

    double tb = trapezoid_error_bound(iv, SecondDerivativeBound(2.0));
    CHECK(tb == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    double trap_actual = std::fabs(exact - (sq(0.0) + sq(1.0)) / 2.0);
    CHECK(std::fabs(trap_actual - tb) <= 1e-12);

    CHECK(midpoint_error_bound(iv, SecondDerivativeBound(0.0)) == 0.0);
    CHECK(midpoint_error_bound(Interval(0.0, 2.0), SecondDerivativeBound(3.0)) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(trapezoid_error_bound(Interval(0.0, 3.0), SecondDerivativeBound(1.0)) ==
          doctest::Approx(2.25).epsilon(1e-15));
    CHECK_THROWS_AS(SecondDerivativeBound(-1.0), std::invalid_argument);
}

TEST_CASE("composite midpoint rule with its own indexing") {
    Interval iv(0.0, 1.0);
    FunctionSpec sq = hhqtest::convex_fn("x^2");

    CompositeResult r2 = composite_midpoint_bf(sq, iv, 2, SecondDerivativeBound(2.0));
    CHECK(r2.value == 0.3125);
    CHECK(*r2.error_bound == doctest::Approx(1.0 / 48.0).epsilon(1e-15));
    CHECK(std::fabs(std::fabs(1.0 / 3.0 - r2.value) - *r2.error_bound) <= 1e-12);

    CompositeResult r4 = composite_midpoint_bf(sq, iv, 4);
    CHECK(r4.value == doctest::Approx(35.0 / 108.0).epsilon(1e-14));
    CHECK(!r4.error_bound.has_value());

    CompositeResult aff =
        composite_midpoint_bf(hhqtest::fn("2*x"), Interval(1.0, 3.0), 6);
    CHECK(aff.value == doctest::Approx(8.0).epsilon(1e-14));

    CHECK_THROWS_AS(composite_midpoint_bf(sq, iv, 3), std::invalid_argument);
    CHECK_THROWS_AS(composite_midpoint_bf(sq, iv, 0), std::invalid_argument);
}

TEST_CASE("composite trapezoid rule agrees with trapezoid_sum") {
    Interval iv(0.0, 1.0);
    FunctionSpec sq = hhqtest::convex_fn("x^2");

    CompositeResult r2 = composite_trapezoid_bf(sq, iv, 2, SecondDerivativeBound(2.0));
    CHECK(r2.value == 0.375);
    CHECK(*r2.error_bound == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
    CHECK(std::fabs((r2.value - 1.0 / 3.0) - *r2.error_bound) <= 1e-12);

    FunctionSpec ex = hhqtest::convex_fn("exp(x)");
    CompositeResult re =
        composite_trapezoid_bf(ex, iv, 4, SecondDerivativeBound(std::exp(1.0)));
    CHECK(re.value == doctest::Approx(1.7272219).epsilon(1e-6));
    double err = re.value - (std::exp(1.0) - 1.0);
    CHECK(err <= *re.error_bound);
    CHECK(*re.error_bound == doctest::Approx(std::exp(1.0) / 192.0).epsilon(1e-12));

    std::mt19937_64 rng(91);
    for (int trial = 0; trial < 20; ++trial) {
        Interval riv = hhqtest::random_interval(rng);
        FunctionSpec f = hhqtest::random_convex(rng, riv);
        for (std::size_t n : {1, 2, 5, 16}) {
            double a = composite_trapezoid_bf(f, riv, n).value;
            double b = trapezoid_sum(f, UniformPartition(riv, n));
            CHECK(std::fabs(a - b) <= 1e-15 * (1.0 + std::fabs(b)));
        }
    }
}

TEST_CASE("rearranged chain members") {
    Interval iv(0.0, 1.0);

    OstrowskiChain lin = ostrowski_rearrangement(
        hhqtest::convex_fn("x"), UniformPartition(iv, 2), 0.5);
    CHECK(lin.lhs_gap == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lin.mid_gap == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lin.rhs == 0.5);

    OstrowskiChain sq = ostrowski_rearrangement(
        hhqtest::convex_fn("x^2"), UniformPartition(iv, 2), 1.0 / 3.0);
    CHECK(sq.lhs_gap == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(sq.mid_gap == doctest::Approx(2.0 / 3.0 - 0.25).epsilon(1e-14));
    CHECK(sq.rhs == 0.5);

    double e = std::exp(1.0);
    OstrowskiChain ex = ostrowski_rearrangement(
        hhqtest::convex_fn("exp(x)"), UniformPartition(iv, 1), e - 1.0);
    CHECK(ex.lhs_gap == doctest::Approx(std::exp(0.5)).epsilon(1e-14));
    CHECK(ex.mid_gap == doctest::Approx(e - 1.0).epsilon(1e-14));
    CHECK(ex.rhs == doctest::Approx((1.0 + e) / 2).epsilon(1e-14));

    CHECK_THROWS_AS(ostrowski_rearrangement(hhqtest::fn("x"),
                                            UniformPartition(iv, 2), 0.5),
                    ShapeError);

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 15; ++trial) {
        Interval riv = hhqtest::random_interval(rng);
        FunctionSpec f = hhqtest::random_convex(rng, riv);
        double integral = reference_integral(f, riv, kFine).value;
        for (std::size_t n : {1, 2, 4, 8}) {
            OstrowskiChain ch =
                ostrowski_rearrangement(f, UniformPartition(riv, n), integral);
            double tol = verdict_tol(ch.rhs);
            CHECK(ch.lhs_gap <= ch.mid_gap + tol);
            CHECK(ch.mid_gap <= ch.rhs + tol);
        }
    }
}

TEST_CASE("sandwich property on generated functions") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 25; ++trial) {
        Interval iv = hhqtest::random_interval(rng);
        FunctionSpec f = hhqtest::random_convex(rng, iv);
        double integral = reference_integral(f, iv, kFine).value;
        double tol = verdict_tol(integral);
        for (std::size_t n : {1, 2, 3, 4, 8, 16, 64}) {
            UniformPartition p(iv, n);
            CHECK(midpoint_sum(f, p) <= integral + tol);
            CHECK(integral <= trapezoid_sum(f, p) + tol);
        }
    }
}

TEST_CASE("concave reversal is exact negation symmetry") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 15; ++trial) {
        Interval iv = hhqtest::random_interval(rng);
        FunctionSpec f = hhqtest::random_convex(rng, iv);
        FunctionSpec g = f.negated();
        for (std::size_t n : {1, 2, 5, 16}) {
            UniformPartition p(iv, n);
            Enclosure ef = hh_enclosure(f, p);
            Enclosure eg = hh_enclosure(g, p);
            CHECK(eg.lower == -ef.upper);
            CHECK(eg.upper == -ef.lower);
        }
    }
}

TEST_CASE("bracket width shrinks under doubling") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 15; ++trial) {
        Interval iv = hhqtest::random_interval(rng);
        FunctionSpec f = hhqtest::random_convex(rng, iv);
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t n = 1; n <= 256; n *= 2) {
            double w = hh_enclosure(f, UniformPartition(iv, n)).width();
            CHECK(w <= prev + 1e-12);
            prev = w;
        }
    }
}

TEST_CASE("affine integrands collapse the bracket") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        double slope = hhqtest::uniform(rng, -3.0, 3.0);
        double icept = hhqtest::uniform(rng, -2.0, 2.0);
        Interval iv = hhqtest::random_interval(rng);
        FunctionSpec f(
            binary(OpCode::Add, binary(OpCode::Mul, constant(slope), variable()),
                   constant(icept)),
            {.convex = true, .concave = true}, "affine");
        double exact = slope * (iv.b * iv.b - iv.a * iv.a) / 2 +
                       icept * (iv.b - iv.a);
        for (std::size_t n : {1, 3, 8}) {
            Enclosure e = hh_enclosure(f, UniformPartition(iv, n));
            double budget = 1e-12 * (1.0 + std::fabs(exact));
            CHECK(std::fabs(e.lower - exact) <= budget);
            CHECK(std::fabs(e.upper - exact) <= budget);
        }
    }
}

TEST_CASE("partition nodes clamp and mesh is consistent") {
    Interval iv(0.1, 0.9);
    UniformPartition p(iv, 7);
    CHECK(p.node(0) == iv.a);
    CHECK(p.node(7) == iv.b);
    CHECK(std::fabs(p.h * 7 - iv.length()) <=
          2 * std::numeric_limits<double>::epsilon() * iv.length());
    for (std::size_t k = 1; k <= 7; ++k) {
        CHECK(p.midpoint(k) > p.node(k - 1));
        CHECK(p.midpoint(k) < p.node(k));
    }
    CHECK_THROWS_AS(UniformPartition(iv, 0), std::invalid_argument);
    CHECK_THROWS_AS(Interval(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Interval(2.0, 1.0), std::invalid_argument);
}
