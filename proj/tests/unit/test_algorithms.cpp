#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qpp/algorithms.hpp"
#include "qpp/errors.hpp"
#include "qpp/eval.hpp"
#include "qpp/refine.hpp"

namespace qpp {
namespace {

double binom(unsigned n, unsigned k) {
    double r = 1.0;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

TEST(Oracle, Classification) {
    EXPECT_EQ(OracleFunction::from_bits("0000").classification(), OracleClass::Constant);
    EXPECT_EQ(OracleFunction::from_bits("0110").classification(), OracleClass::Balanced);
    EXPECT_EQ(OracleFunction::from_bits("0010").classification(), OracleClass::Point);
    EXPECT_EQ(OracleFunction::from_bits("0111").classification(), OracleClass::Other);
    EXPECT_EQ(OracleFunction::from_bits("01").classification(), OracleClass::Balanced);
    EXPECT_EQ(OracleFunction::from_bits("0010").solution(), std::optional<std::size_t>{2});
    EXPECT_FALSE(OracleFunction::from_bits("0110").solution().has_value());
    EXPECT_EQ(OracleFunction::point(3, 5).bits(), "00000100");
    EXPECT_TRUE(OracleFunction::constant(2, true)(3));
    EXPECT_THROW(OracleFunction::from_bits("012"), DomainError);
    EXPECT_THROW(OracleFunction::from_bits("011"), DomainError);
    EXPECT_EQ(to_string(OracleClass::Balanced), "balanced");
}

TEST(Oracle, Enumeration) {
    for (int n = 1; n <= 4; ++n) {
        const auto bal = balanced_functions(n);
        EXPECT_EQ(bal.size(), static_cast<std::size_t>(binom(1U << n, 1U << (n - 1))));
        for (const auto& f : bal) ASSERT_EQ(f.classification(), OracleClass::Balanced);
        EXPECT_EQ(constant_functions(n).size(), 2U);
    }
    EXPECT_EQ(balanced_functions(3).size(), 70U);
    EXPECT_THROW(balanced_functions(5), CapacityError);
}

TEST(DeutschJozsa, QuantumOneCallAlwaysCorrect) {
    for (int n = 1; n <= 3; ++n) {
        auto fs = constant_functions(n);
        const auto bal = balanced_functions(n);
        fs.insert(fs.end(), bal.begin(), bal.end());
        for (const auto& f : fs) {
            const auto r = deutsch_jozsa_quantum(f);
            EXPECT_NEAR(r.p_correct, 1.0, 1e-9) << f.bits();
            EXPECT_EQ(r.oracle_calls, 1U);
        }
    }
    EXPECT_THROW(deutsch_jozsa_quantum(OracleFunction::from_bits("0111")), DomainError);
}

TEST(DeutschJozsa, ClassicalNeedsHalfPlusOneQueries) {
    for (int n = 1; n <= 3; ++n) {
        for (const auto& f : constant_functions(n)) {
            const auto r = deutsch_jozsa_classical(f);
            EXPECT_TRUE(r.constant);
            EXPECT_EQ(r.oracle_calls, (1U << (n - 1)) + 1);
        }
        for (const auto& f : balanced_functions(n)) {
            const auto r = deutsch_jozsa_classical(f);
            EXPECT_FALSE(r.constant);
            EXPECT_EQ(r.oracle_calls, (1U << (n - 1)) + 1);
        }
    }
}

TEST(DeutschJozsa, NoOneQueryClassicalProcedure) {
    const auto w = one_query_decision_trees();
    EXPECT_EQ(w.trees_checked, 8U);
    EXPECT_EQ(w.correct_trees, 0U);
}

TEST(DeutschJozsa, Sweeps) {
    for (int n = 1; n <= 3; ++n) {
        const auto q = deutsch_jozsa_quantum_sweep(n);
        EXPECT_TRUE(q.pass);
        EXPECT_EQ(q.oracle_calls, 1U);
        const auto c = deutsch_jozsa_classical_sweep(n);
        EXPECT_TRUE(c.pass);
        EXPECT_EQ(c.cases_checked, 2U + static_cast<std::size_t>(binom(1U << n, 1U << (n - 1))));
    }
}

TEST(Grover, AnalysisExamples) {
    const GroverAnalysis g4(4);
    EXPECT_NEAR(g4.theta(), std::numbers::pi / 6, 1e-15);
    EXPECT_NEAR(g4.p_success(1), 1.0, 1e-15);
    EXPECT_NEAR(g4.p_success(0), 0.25, 1e-15);
    EXPECT_NEAR(g4.p_other(0), 0.25, 1e-15);
    EXPECT_EQ(g4.k_opt(), 1U);
    EXPECT_EQ(g4.k_approx(), 2U);
    const auto opt2 = grover_optimal_iterations(2);
    EXPECT_EQ(opt2.k_opt, 0U);
    EXPECT_NEAR(opt2.p_success, 0.5, 1e-15);
    EXPECT_THROW(GroverAnalysis(3), DomainError);
    EXPECT_THROW(GroverAnalysis(1), DomainError);
    for (std::uint64_t n = 4; n <= 1024; n *= 2) {
        const GroverAnalysis g(n);
        EXPECT_NEAR(g.real_optimum(), std::numbers::pi / (4 * std::asin(std::sqrt(1.0 / n))) - 0.5, 1e-12);
        EXPECT_GE(g.p_success(g.k_opt()), g.p_success(g.k_opt() + 1));
        // At the rounded optimum (2k+1) theta is within theta of pi/2.
        EXPECT_LE(1.0 - g.p_success(g.k_opt()), 1.0 / static_cast<double>(n) + 1e-12);
        EXPECT_EQ(g.k_approx(), static_cast<std::uint64_t>(std::ceil(std::numbers::pi * std::sqrt(double(n)) / 4)));
    }
}

TEST(Grover, RunMatchesClosedForm) {
    for (int n = 2; n <= 5; ++n) {
        const std::size_t size = std::size_t{1} << n;
        const GroverAnalysis g(size);
        for (std::size_t x1 : {std::size_t{0}, size - 1}) {
            for (std::uint64_t k = 0; k <= 4; ++k) {
                const auto r = grover_run(OracleFunction::point(n, x1), k);
                EXPECT_NEAR(r.p_solution, g.p_success(k), 1e-9);
                EXPECT_EQ(r.oracle_calls, k);
                EXPECT_NEAR(r.dist.total(), 1.0, 1e-9);
            }
        }
    }
    EXPECT_THROW(grover_run(OracleFunction::from_bits("0110"), 1), DomainError);
}

TEST(Grover, ProgramEvaluationAgreesWithDirectReadout) {
    const auto f = OracleFunction::point(3, 6);
    for (std::uint64_t k = 0; k <= 3; ++k) {
        const auto program = grover_program(f, k);
        const auto r = eval(program, Distribution::point(schema_of(program), make_state({0, 0})));
        const std::vector<std::string> keep{"r", "t"};
        const auto m = marginal(r.dist, keep);
        const auto direct = grover_run(f, k);
        EXPECT_LE(distance(m, direct.dist), 1e-12);
    }
}

TEST(Grover, Sweep) {
    const auto r = grover_sweep(3, 2);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.cases_checked, 8U);
    EXPECT_LE(r.max_abs_error, 1e-9);
}

TEST(Walk, ClosedForm) {
    EXPECT_EQ(walk_probability(0, 0), 1.0);
    EXPECT_EQ(walk_probability(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(walk_probability(1, 1), 0.5);
    EXPECT_DOUBLE_EQ(walk_probability(2, 3), 0.25);
    EXPECT_EQ(walk_probability(3, 2), 0.0);
    EXPECT_NEAR(walk_probability(4, 10), binom(9, 3) / 1024.0, 1e-15);
}

TEST(Walk, EvaluationMatchesClosedForm) {
    for (std::int64_t x0 = 0; x0 <= 4; ++x0) {
        const auto r = probabilistic_walk(x0, 400);
        for (std::uint64_t k = 0; k <= 60; ++k) {
            EXPECT_NEAR(r.dist.probability_of(make_state({0}, k)), walk_probability(x0, k), 1e-9);
        }
        EXPECT_LE(r.infinite_mass, 1e-9);
    }
    EXPECT_THROW(probabilistic_walk(-1, 100), DomainError);
    EXPECT_THROW(probabilistic_walk(10, 50), DomainError);
}

TEST(Walk, Check) {
    const auto r = walk_check(3);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.max_abs_error, 1e-9);
}

TEST(Mixed, DemosPass) {
    const auto report = mixed_state_demos(kMixedSeed, 20);
    ASSERT_EQ(report.checks.size(), 3U);
    EXPECT_TRUE(report.passed());
    for (const auto& c : report.checks) EXPECT_LE(c.distance, kMixedTol) << c.name;
    EXPECT_EQ(report.checks[2].cases, 20U);
}

TEST(Report, Json) {
    AlgorithmReport r{"grover", 3, 8, 1e-16, 2, true};
    const auto j = to_json(r);
    EXPECT_NE(j.find("\"algorithm\":\"grover\""), std::string::npos);
    EXPECT_NE(j.find("\"pass\":true"), std::string::npos);
}

}  // namespace
}  // namespace qpp
