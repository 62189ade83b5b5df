#include "hhq/errors.hpp"
#include "hhq/expr.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hhq;

TEST_CASE("parser produces expected node shapes") {
    ExprPtr v = parse_expression("x");
    CHECK(v->op == OpCode::Var);

    ExprPtr p = parse_expression("x^2");
    CHECK(p->op == OpCode::Pow);
    CHECK(p->lhs->op == OpCode::Var);
    CHECK(p->rhs->op == OpCode::Const);
    CHECK(p->rhs->value == 2.0);
}

TEST_CASE("mixed expression evaluates and matches a handwritten evaluator") {
    ExprPtr e = parse_expression("1 + 2*x - max(0, x-0.5)");
    CHECK(evaluate(*e, 1.0) == 2.5);

    auto by_hand = [](double x) {
        double hinge = x - 0.5;
        return (1.0 + 2.0 * x) - (0.0 > hinge ? 0.0 : hinge);
    };
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        double x = hhqtest::uniform(rng, -3.0, 3.0);
        CHECK(evaluate(*e, x) == by_hand(x));
    }
}

TEST_CASE("evaluation examples") {
    CHECK(evaluate(*parse_expression("x"), 0.7) == 0.7);
    CHECK(evaluate(*parse_expression("exp(x)"), 0.0) == 1.0);
    CHECK(evaluate(*parse_expression("x^2"), 0.25) == 0.0625);
}

TEST_CASE("precedence and associativity follow the grammar") {
    // '^' binds after the leading minus is consumed by `unary`
    CHECK(evaluate(*parse_expression("-x^2"), 3.0) == 9.0);
    CHECK(evaluate(*parse_expression("-(x^2)"), 3.0) == -9.0);
    CHECK(evaluate(*parse_expression("2^-3"), 0.0) == 0.125);
    CHECK(evaluate(*parse_expression("x^2^3"), 2.0) == 256.0); // right assoc
    CHECK(evaluate(*parse_expression("2*x+1"), 2.0) == 5.0);
    CHECK(evaluate(*parse_expression("2/4/2"), 0.0) == 0.25); // left assoc
    CHECK(evaluate(*parse_expression(" 1 +  2 "), 0.0) == 3.0);
    CHECK(evaluate(*parse_expression("1e-2 + 1E2"), 0.0) == 100.01);
}

TEST_CASE("parse errors carry offsets") {
    auto offset_of = [](const char* text) -> std::size_t {
        try {
            parse_expression(text);
        } catch (const ParseError& e) {
            return e.offset();
        }
        return static_cast<std::size_t>(-1);
    };
    CHECK(offset_of("x +") == 3);
    CHECK(offset_of("(x") == 2);
    CHECK(offset_of("sin(x)") == 0);
    CHECK(offset_of("1 + sin(x)") == 4);
    CHECK_THROWS_AS(parse_expression(""), ParseError);
    CHECK_THROWS_AS(parse_expression("   "), ParseError);
    CHECK_THROWS_AS(parse_expression("x y"), ParseError);
    CHECK_THROWS_AS(parse_expression("2..5"), ParseError);
    CHECK_THROWS_AS(parse_expression("max(1)"), ParseError);     // wrong arity
    CHECK_THROWS_AS(parse_expression("max(1,2,3)"), ParseError); // wrong arity
    CHECK_THROWS_AS(parse_expression("exp(1,2)"), ParseError);
    CHECK_THROWS_AS(parse_expression("1 + @"), ParseError);
}

TEST_CASE("domain violations raise EvalError instead of returning non-finite") {
    CHECK_THROWS_AS(evaluate(*parse_expression("log(x)"), 0.0), EvalError);
    CHECK_THROWS_AS(evaluate(*parse_expression("log(x)"), -1.0), EvalError);
    CHECK_THROWS_AS(evaluate(*parse_expression("1/x"), 0.0), EvalError);
    CHECK_THROWS_AS(evaluate(*parse_expression("sqrt(x)"), -4.0), EvalError);
    CHECK_THROWS_AS(evaluate(*parse_expression("x^0.5"), -1.0), EvalError);
    CHECK_THROWS_AS(evaluate(*parse_expression("exp(x)"), 1000.0), EvalError);

    try {
        evaluate(*parse_expression("log(x)"), -2.0);
        CHECK(false);
    } catch (const EvalError& e) {
        CHECK(e.at() == -2.0);
    }
}

TEST_CASE("unparse round trip evaluates identically") {
    const char* exprs[] = {
        "x",
        "x^2",
        "1 + 2*x - max(0, x-0.5)",
        "-x^2 + 3",
        "exp(x) / (1 + x^2)",
        "sqrt(abs(x - 0.25)) * 2",
        "max(x, -x) + log(x^2 + 1)",
        "0.1 * x ^ (1 + 1)",
        "-0.5",
    };
    std::mt19937_64 rng(11);
    for (const char* text : exprs) {
        ExprPtr tree = parse_expression(text);
        ExprPtr again = parse_expression(unparse(*tree));
        for (int i = 0; i < 100; ++i) {
            double x = hhqtest::uniform(rng, -2.0, 2.0);
            CHECK(evaluate(*tree, x) == evaluate(*again, x)); // 0 ulp
        }
    }
}

TEST_CASE("generated trees round trip through unparse") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        hhq::Interval iv = hhqtest::random_interval(rng);
        hhq::FunctionSpec f = hhqtest::random_convex(rng, iv);
        ExprPtr again = parse_expression(unparse(f.body()));
        for (int k = 0; k < 100; ++k) {
            double x = hhqtest::uniform(rng, iv.a, iv.b);
            CHECK(f(x) == evaluate(*again, x));
        }
    }
}

TEST_CASE("builders validate") {
    CHECK_THROWS_AS(constant(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(unary(OpCode::Add, variable()), std::invalid_argument);
    CHECK_THROWS_AS(binary(OpCode::Neg, variable(), variable()),
                    std::invalid_argument);
}
