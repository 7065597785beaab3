#include <gtest/gtest.h>

#include <random>

#include "qpp/distribution.hpp"
#include "qpp/errors.hpp"
#include "qpp/qops.hpp"
#include "support.hpp"

namespace qpp {
namespace {

Schema xy_schema() { return Schema{{"x", "y"}, {false, true}, "", true}; }

ProgramState classical(std::int64_t x, std::int64_t y, Time t = Time::finite(0)) {
    return ProgramState{{x, y}, std::nullopt, t};
}

TEST(Time, Ordering) {
    EXPECT_LT(Time::finite(3), Time::finite(4));
    EXPECT_LT(Time::finite(1000000), Time::infinite());
    EXPECT_EQ(Time::infinite().plus(5), Time::infinite());
    EXPECT_EQ(Time::finite(2).plus(3), Time::finite(5));
}

TEST(Distribution, MergesEqualStates) {
    Distribution d(xy_schema());
    d.add(classical(1, 0), 0.25);
    d.add(classical(2, 1), 0.5);
    d.add(classical(1, 0), 0.25);
    EXPECT_EQ(d.size(), 2U);
    EXPECT_DOUBLE_EQ(d.probability_of(classical(1, 0)), 0.5);
    EXPECT_DOUBLE_EQ(d.total(), 1.0);
    EXPECT_EQ(d.probability_of(classical(3, 0)), 0.0);
    // Time is part of the state.
    d.add(classical(1, 0, Time::infinite()), 0.1);
    EXPECT_EQ(d.size(), 3U);
    EXPECT_DOUBLE_EQ(d.probability_of(classical(1, 0)), 0.5);
}

TEST(Distribution, QuantumKeysMergeWithinTolerance) {
    const Schema s{{"r"}, {false}, "psi", true};
    const auto plus = apply(Operator::hadamard_all(1), QuantumState::zero(1));
    const auto nudged = QuantumState::from_amplitudes({plus[0] + Amplitude(1e-12), plus[1] - Amplitude(1e-12)});
    Distribution d(s);
    d.add(ProgramState{{0}, plus, Time::finite(0)}, 0.5);
    d.add(ProgramState{{0}, nudged, Time::finite(0)}, 0.25);
    d.add(ProgramState{{0}, QuantumState::basis(1, 1), Time::finite(0)}, 0.25);
    EXPECT_EQ(d.size(), 2U);
    EXPECT_NEAR(d.probability_of(ProgramState{{0}, plus, Time::finite(0)}), 0.75, 1e-15);
}

TEST(Distribution, Prune) {
    Distribution d(xy_schema());
    d.add(classical(0, 0), 1.0 - 1e-13);
    d.add(classical(1, 0), 1e-13);
    EXPECT_NEAR(d.prune(1e-12), 1e-13, 1e-20);
    EXPECT_EQ(d.size(), 1U);
}

TEST(Distribution, PropertyMergeSoundness) {
    // Random additions against a brute-force list of (state, p) pairs.
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 50; ++trial) {
        Distribution d(xy_schema());
        std::vector<std::pair<std::array<std::int64_t, 3>, double>> raw;
        for (int i = 0; i < 40; ++i) {
            const std::array<std::int64_t, 3> k{static_cast<std::int64_t>(rng() % 4) - 2,
                                                static_cast<std::int64_t>(rng() % 2),
                                                static_cast<std::int64_t>(rng() % 3)};
            const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            raw.emplace_back(k, p);
            d.add(classical(k[0], k[1], k[2] == 2 ? Time::infinite() : Time::finite(k[2])), p);
        }
        double total = 0.0;
        for (const auto& [k, p] : raw) total += p;
        EXPECT_NEAR(d.total(), total, 1e-12);
        for (const auto& [k, p] : raw) {
            double want = 0.0;
            for (const auto& [k2, p2] : raw) {
                if (k2 == k) want += p2;
            }
            EXPECT_NEAR(d.probability_of(classical(k[0], k[1], k[2] == 2 ? Time::infinite() : Time::finite(k[2]))),
                        want, 1e-12);
        }
        // Iteration order is sorted and free of duplicates.
        const auto entries = d.entries();
        for (std::size_t i = 1; i < entries.size(); ++i) {
            const auto& a = entries[i - 1].state;
            const auto& b = entries[i].state;
            EXPECT_TRUE(std::tie(a.values, a.time) < std::tie(b.values, b.time));
        }
    }
}

TEST(Distribution, Marginal) {
    Distribution d(xy_schema());
    d.add(classical(1, 0, Time::finite(2)), 0.2);
    d.add(classical(1, 1, Time::finite(3)), 0.3);
    d.add(classical(2, 1, Time::finite(3)), 0.5);
    const std::vector<std::string> keep_x{"x"};
    const auto mx = marginal(d, keep_x);
    EXPECT_EQ(mx.schema().vars, std::vector<std::string>{"x"});
    EXPECT_FALSE(mx.schema().has_time);
    EXPECT_EQ(mx.size(), 2U);
    EXPECT_NEAR(mx.probability_of(ProgramState{{1}, std::nullopt, Time{}}), 0.5, 1e-15);
    const std::vector<std::string> keep_yt{"y", "t"};
    const auto myt = marginal(d, keep_yt);
    EXPECT_NEAR(myt.probability_of(ProgramState{{1}, std::nullopt, Time::finite(3)}), 0.8, 1e-15);
    EXPECT_NEAR(myt.probability_of(ProgramState{{0}, std::nullopt, Time::finite(2)}), 0.2, 1e-15);
    const std::vector<std::string> bad{"z"};
    EXPECT_THROW(marginal(d, bad), ValidationError);
}

TEST(Distribution, ExpectationAndDistance) {
    Distribution a(xy_schema());
    a.add(classical(1, 0), 0.5);
    a.add(classical(3, 0), 0.5);
    EXPECT_DOUBLE_EQ(expectation(a, [](const ProgramState& s) { return static_cast<double>(s.values[0]); }), 2.0);
    Distribution b(xy_schema());
    b.add(classical(1, 0), 0.75);
    b.add(classical(2, 0), 0.25);
    EXPECT_DOUBLE_EQ(distance(a, b), 0.5);
    EXPECT_EQ(distance(a, a), 0.0);
    EXPECT_THROW(distance(a, Distribution(Schema{{"x"}, {}, "", true})), DomainError);
}

TEST(Distribution, JsonlRoundTrip) {
    std::mt19937_64 rng(52);
    const Schema s{{"r", "b"}, {false, true}, "psi", true};
    Distribution d(s);
    d.add(ProgramState{{0, 1}, testing::random_state(rng, 2), Time::finite(4)}, 0.125);
    d.add(ProgramState{{3, 0}, testing::random_state(rng, 2), Time::infinite()}, 0.375);
    d.add(ProgramState{{-2, 0}, QuantumState::basis(3, 2), Time::finite(0)}, 0.5);
    const auto text = to_jsonl(d);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
    EXPECT_NE(text.find("\"inf\""), std::string::npos);
    const auto back = from_jsonl(text, s);
    EXPECT_EQ(back.size(), d.size());
    EXPECT_LE(distance(back, d), 1e-15);
    EXPECT_EQ(to_jsonl(back), text);

    Distribution c(xy_schema());
    c.add(classical(-4, 1, Time::finite(7)), 1.0);
    EXPECT_EQ(to_jsonl(from_jsonl(to_jsonl(c), xy_schema())), to_jsonl(c));
    EXPECT_ANY_THROW(from_jsonl("{not json}\n", xy_schema()));
}

}  // namespace
}  // namespace qpp
