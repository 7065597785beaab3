#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "qpp/errors.hpp"
#include "qpp/expr.hpp"

namespace qpp {
namespace {

using B = BinaryOp;

Lookup env(std::map<std::string, Value> unprimed, std::map<std::string, Value> primed = {}) {
    return [unprimed = std::move(unprimed), primed = std::move(primed)](const VarRef& v) {
        const auto& m = v.primed ? primed : unprimed;
        const auto it = m.find(v.name);
        if (it == m.end()) throw ValidationError("unbound " + v.name);
        return it->second;
    };
}

Value eval0(const Expr& e) { return evaluate(e, env({})); }

TEST(Value, Conversions) {
    EXPECT_TRUE(Value::integer(1).as_bool());
    EXPECT_FALSE(Value::integer(0).as_bool());
    EXPECT_THROW(Value::integer(2).as_bool(), DomainError);
    EXPECT_EQ(Value::real(3.0).as_int(), 3);
    EXPECT_THROW(Value::real(3.5).as_int(), DomainError);
    EXPECT_THROW(Value::infinity().as_real(), DomainError);
    EXPECT_EQ(Value::boolean(true).as_int(), 1);
}

TEST(Expr, IntegerArithmetic) {
    EXPECT_EQ(eval0(ex::bin(B::Add, ex::lit(2), ex::lit(3))), Value::integer(5));
    EXPECT_EQ(eval0(ex::bin(B::Sub, ex::lit(2), ex::lit(3))), Value::integer(-1));
    EXPECT_EQ(eval0(ex::bin(B::Mul, ex::lit(-4), ex::lit(3))), Value::integer(-12));
    EXPECT_EQ(eval0(ex::bin(B::IntDiv, ex::lit(-7), ex::lit(2))), Value::integer(-4));
    EXPECT_EQ(eval0(ex::bin(B::Mod, ex::lit(-7), ex::lit(2))), Value::integer(1));
    EXPECT_EQ(eval0(ex::neg(ex::lit(5))), Value::integer(-5));
    EXPECT_THROW(eval0(ex::bin(B::IntDiv, ex::lit(1), ex::lit(0))), DomainError);
    EXPECT_THROW(eval0(ex::bin(B::Mul, ex::lit(INT64_MAX), ex::lit(2))), DomainError);
    EXPECT_THROW(eval0(ex::bin(B::Add, ex::lit(INT64_MAX), ex::lit(1))), DomainError);
}

TEST(Expr, RealArithmetic) {
    EXPECT_EQ(eval0(ex::bin(B::Div, ex::lit(1), ex::lit(4))), Value::real(0.25));
    EXPECT_EQ(eval0(ex::bin(B::Add, ex::real(0.5), ex::lit(1))), Value::real(1.5));
    EXPECT_EQ(eval0(ex::bin(B::Pow, ex::lit(2), ex::lit(10))).as_real(), 1024.0);
    EXPECT_THROW(eval0(ex::bin(B::Div, ex::lit(1), ex::real(0.0))), DomainError);
    EXPECT_THROW(eval0(ex::bin(B::Pow, ex::real(-1.0), ex::real(0.5))), DomainError);
}

TEST(Expr, Functions) {
    const double p = eval0(ex::call("sin", {ex::call("arcsin", {ex::call("sqrt", {ex::real(0.25)})})})).as_real();
    EXPECT_NEAR(p, 0.5, 1e-15);
    EXPECT_EQ(eval0(ex::call("binom", {ex::lit(5), ex::lit(2)})).as_real(), 10.0);
    EXPECT_EQ(eval0(ex::call("binom", {ex::lit(2), ex::lit(5)})).as_real(), 0.0);
    EXPECT_EQ(eval0(ex::call("abs", {ex::lit(-3)})), Value::integer(3));
    EXPECT_EQ(eval0(ex::call("max", {ex::lit(2), ex::lit(7)})).as_int(), 7);
    EXPECT_EQ(eval0(ex::call("floor", {ex::real(-1.5)})).as_int(), -2);
    EXPECT_THROW(eval0(ex::call("sqrt", {ex::lit(-1)})), DomainError);
    EXPECT_THROW(eval0(ex::call("arcsin", {ex::lit(2)})), DomainError);
    EXPECT_THROW(eval0(ex::call("sin", {ex::lit(1), ex::lit(2)})), DomainError);
    EXPECT_THROW(eval0(ex::call("nope", {})), DomainError);
    EXPECT_TRUE(is_known_function("binom"));
    EXPECT_FALSE(is_known_function("nope"));
}

TEST(Expr, Logic) {
    const auto t = ex::boolean(true);
    const auto f = ex::boolean(false);
    EXPECT_EQ(eval0(ex::bin(B::And, t, f)), Value::boolean(false));
    EXPECT_EQ(eval0(ex::bin(B::Or, t, f)), Value::boolean(true));
    EXPECT_EQ(eval0(ex::bin(B::Implies, f, f)), Value::boolean(true));
    EXPECT_EQ(eval0(ex::bin(B::Implies, t, f)), Value::boolean(false));
    EXPECT_EQ(eval0(ex::lnot(t)), Value::boolean(false));
    EXPECT_EQ(eval0(ex::bin(B::Eq, t, ex::lit(1))), Value::boolean(true));
    EXPECT_EQ(eval0(ex::bin(B::Ne, t, f)), Value::boolean(true));
    EXPECT_EQ(eval0(ex::bin(B::Lt, ex::lit(1), ex::real(1.5))), Value::boolean(true));
    EXPECT_THROW(eval0(ex::bin(B::And, ex::lit(3), t)), DomainError);
}

TEST(Expr, BooleansActAsNumbers) {
    // (b' = false) * (t' = t + 1) style probability products.
    const auto e = ex::bin(B::Mul, ex::bin(B::Eq, ex::primed("b"), ex::boolean(false)),
                           ex::bin(B::Eq, ex::primed("t"), ex::bin(B::Add, ex::var("t"), ex::lit(1))));
    const auto l = env({{"t", Value::integer(0)}}, {{"b", Value::boolean(false)}, {"t", Value::integer(1)}});
    EXPECT_EQ(evaluate(e, l).as_real(), 1.0);
    const auto l2 = env({{"t", Value::integer(0)}}, {{"b", Value::boolean(true)}, {"t", Value::integer(1)}});
    EXPECT_EQ(evaluate(e, l2).as_real(), 0.0);
}

TEST(Expr, Infinity) {
    const auto inf = ex::inf();
    EXPECT_TRUE(eval0(ex::bin(B::Add, inf, ex::lit(3))).is_inf());
    EXPECT_TRUE(eval0(ex::bin(B::Mul, inf, ex::lit(2))).is_inf());
    EXPECT_EQ(eval0(ex::bin(B::Eq, inf, inf)), Value::boolean(true));
    EXPECT_EQ(eval0(ex::bin(B::Lt, ex::lit(1000000), inf)), Value::boolean(true));
    EXPECT_EQ(eval0(ex::bin(B::Ge, inf, ex::bin(B::Add, inf, ex::lit(1)))), Value::boolean(true));
    EXPECT_THROW(eval0(ex::bin(B::Sub, inf, inf)), DomainError);
    EXPECT_THROW(eval0(ex::bin(B::Mul, inf, ex::lit(0))), DomainError);
    EXPECT_THROW(eval0(ex::neg(inf)), DomainError);
    EXPECT_THROW(eval0(ex::bin(B::Div, inf, ex::lit(2))), DomainError);
}

TEST(Expr, VariablesAndPrimes) {
    const auto l = env({{"x", Value::integer(3)}}, {{"x", Value::integer(7)}});
    EXPECT_EQ(evaluate(ex::bin(B::Sub, ex::primed("x"), ex::var("x")), l), Value::integer(4));
    const auto refs = referenced_vars(ex::bin(B::Add, ex::primed("x"), ex::bin(B::Mul, ex::var("y"), ex::primed("x"))));
    ASSERT_EQ(refs.size(), 2U);
    EXPECT_EQ(refs[0], (VarRef{"x", true}));
    EXPECT_EQ(refs[1], (VarRef{"y", false}));
}

TEST(Expr, Substitution) {
    // x' = x + 1 with x replaced by y * 2; primed x is untouched.
    const auto e = ex::bin(B::Eq, ex::primed("x"), ex::bin(B::Add, ex::var("x"), ex::lit(1)));
    const auto s = substitute(e, "x", ex::bin(B::Mul, ex::var("y"), ex::lit(2)));
    const auto want = ex::bin(B::Eq, ex::primed("x"),
                              ex::bin(B::Add, ex::bin(B::Mul, ex::var("y"), ex::lit(2)), ex::lit(1)));
    EXPECT_EQ(s, want);
    const auto l = env({{"y", Value::integer(4)}}, {{"x", Value::integer(9)}});
    EXPECT_EQ(evaluate(s, l), Value::boolean(true));
}

TEST(Expr, RandBranching) {
    const auto e = ex::bin(B::Sub, ex::var("x"), ex::rand(ex::lit(2)));
    EXPECT_TRUE(contains_rand(e));
    EXPECT_FALSE(contains_rand(ex::var("x")));
    const auto l = env({{"x", Value::integer(5)}});
    const auto outcomes = evaluate_branching(e, l);
    ASSERT_EQ(outcomes.size(), 2U);
    EXPECT_EQ(outcomes[0].first, Value::integer(5));
    EXPECT_EQ(outcomes[1].first, Value::integer(4));
    EXPECT_DOUBLE_EQ(outcomes[0].second, 0.5);
    EXPECT_DOUBLE_EQ(outcomes[1].second, 0.5);

    const std::int64_t choice[] = {1};
    EXPECT_EQ(evaluate(e, l, choice), Value::integer(4));
    EXPECT_THROW(evaluate(e, l), DomainError);

    // Two independent occurrences: four equally likely branches, unmerged.
    const auto sum = evaluate_branching(ex::bin(B::Add, ex::rand(ex::lit(2)), ex::rand(ex::lit(2))), l);
    ASSERT_EQ(sum.size(), 4U);
    double total = 0.0;
    for (const auto& [v, p] : sum) total += p;
    EXPECT_DOUBLE_EQ(total, 1.0);

    EXPECT_THROW(evaluate_branching(ex::rand(ex::lit(0)), l), DomainError);
}

}  // namespace
}  // namespace qpp
