// One pass/fail line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <chrono>
#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "generators.hpp"
#include "qpp/algorithms.hpp"
#include "qpp/cli.hpp"
#include "qpp/eval.hpp"
#include "qpp/parser.hpp"
#include "qpp/qmeasure.hpp"
#include "qpp/qops.hpp"
#include "support.hpp"

namespace {

using namespace qpp;

const std::string kRoot = QPP_SOURCE_DIR;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

double binom(unsigned n, unsigned k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<OracleFunction> promise_set(int n) {
    auto all = constant_functions(n);
    for (auto& f : balanced_functions(n)) all.push_back(std::move(f));
    return all;
}

bool is_constant(const OracleFunction& f) {
    for (std::size_t i = 1; i < f.size(); ++i) {
        if (f(i) != f(0)) return false;
    }
    return true;
}

Outcome deutsch_jozsa_quantum_criterion() {
    Outcome o;
    std::size_t cases = 0;
    for (int n = 1; n <= 3; ++n) {
        for (const auto& f : promise_set(n)) {
            const auto r = deutsch_jozsa_quantum(f);
            const std::vector<std::string> keep{"b", "t"};
            const auto m = marginal(r.dist, keep);
            const std::int64_t want = is_constant(f) ? 1 : 0;
            const double p = m.probability_of(ProgramState{{want}, std::nullopt, Time::finite(1)});
            o.require(p >= 1.0 - 1e-9, fmt::format("n={} f={} P(correct, one call)={}", n, f.bits(), p));
            o.require(r.oracle_calls == 1, fmt::format("n={} f={} calls={}", n, f.bits(), r.oracle_calls));
            ++cases;
        }
    }
    o.require(cases == 4 + 8 + 72, fmt::format("{} oracles", cases));
    if (o.pass) o.detail = fmt::format("{} oracles, one call each", cases);
    return o;
}

Outcome deutsch_jozsa_classical_criterion() {
    Outcome o;
    std::size_t cases = 0;
    for (int n = 1; n <= 3; ++n) {
        const std::uint64_t want_calls = (std::uint64_t{1} << (n - 1)) + 1;
        for (const auto& f : promise_set(n)) {
            const auto r = deutsch_jozsa_classical(f);
            o.require(r.constant == is_constant(f), fmt::format("n={} f={} wrong answer", n, f.bits()));
            o.require(r.oracle_calls == want_calls, fmt::format("n={} f={} calls={}", n, f.bits(), r.oracle_calls));
            ++cases;
        }
    }
    const auto trees = one_query_decision_trees();
    o.require(trees.correct_trees == 0, "a one-query classical procedure was found correct");
    if (o.pass) o.detail = fmt::format("{} oracles, 2^(n-1)+1 calls each", cases);
    return o;
}

Outcome grover_formula_criterion() {
    Outcome o;
    std::size_t cases = 0;
    double worst = 0.0;
    for (int n = 2; n <= 8; ++n) {
        const double size = std::ldexp(1.0, n);
        const double theta = std::asin(std::sqrt(1.0 / size));
        const auto k_max = static_cast<std::uint64_t>(std::ceil(std::numbers::pi * std::sqrt(size) / 4)) + 3;
        for (std::size_t x1 = 0; x1 < static_cast<std::size_t>(size); ++x1) {
            for (std::uint64_t k = 0; k <= k_max; ++k) {
                const auto r = grover_run(OracleFunction::point(n, x1), k);
                const double s = std::sin((2.0 * static_cast<double>(k) + 1.0) * theta);
                const double want = s * s;
                const double other = (1.0 - want) / (size - 1.0);
                double err = std::abs(r.p_solution - want);
                for (std::size_t x = 0; x < static_cast<std::size_t>(size); ++x) {
                    if (x == x1) continue;
                    const ProgramState st{{static_cast<std::int64_t>(x)}, std::nullopt, Time::finite(k)};
                    err = std::max(err, std::abs(r.dist.probability_of(st) - other));
                }
                worst = std::max(worst, err);
                o.require(err <= 1e-9, fmt::format("n={} x1={} k={} error {:.3e}", n, x1, k, err));
                ++cases;
            }
        }
    }
    if (o.pass) o.detail = fmt::format("{} (n, x1, k) cases, max error {:.3e}", cases, worst);
    return o;
}

Outcome grover_optimum_criterion() {
    Outcome o;
    double worst_ratio = 0.0;
    double worst_optimum_ratio = 0.0;
    std::vector<int> failing;
    for (int n = 4; n <= 10; ++n) {
        const double size = std::ldexp(1.0, n);
        const auto k = static_cast<std::uint64_t>(std::ceil(std::numbers::pi * std::sqrt(size) / 4));
        // Rounded real optimum pi / (4 theta) - 1/2, for the report only.
        const auto k_best = static_cast<std::uint64_t>(
            std::llround(std::numbers::pi / (4 * std::asin(std::sqrt(1.0 / size))) - 0.5));
        bool ok = true;
        for (std::size_t x1 : {std::size_t{0}, static_cast<std::size_t>(size) / 3, static_cast<std::size_t>(size) - 1}) {
            const double failure = 1.0 - grover_run(OracleFunction::point(n, x1), k).p_solution;
            worst_ratio = std::max(worst_ratio, failure * size);
            ok = ok && failure <= 2.0 / size;
            const double at_best = 1.0 - grover_run(OracleFunction::point(n, x1), k_best).p_solution;
            worst_optimum_ratio = std::max(worst_optimum_ratio, at_best * size);
        }
        if (!ok) failing.push_back(n);
    }
    o.require(failing.empty(), fmt::format("failure > 2/N at ceil(pi sqrt(N)/4) for n in {{{}}}", fmt::join(failing, ",")));
    o.detail += fmt::format("{}max failure * N = {:.3f} at ceil(pi sqrt(N)/4); {:.3f} at the rounded optimum",
                            o.detail.empty() ? "" : "; ", worst_ratio, worst_optimum_ratio);
    return o;
}

Outcome mixed_state_criterion() {
    Outcome o;
    const auto report = mixed_state_demos(kMixedSeed, kMixedRandomStates);
    o.require(report.checks.size() == 3, "expected three checks");
    double worst = 0.0;
    for (const auto& c : report.checks) {
        worst = std::max(worst, c.distance);
        o.require(c.passed && c.distance <= 1e-12, fmt::format("{}: distance {:.3e}", c.name, c.distance));
    }
    o.require(report.checks.size() == 3 && report.checks[2].cases == 100, "measure; measure needs 100 states");
    if (o.pass) o.detail = fmt::format("max distance {:.3e}", worst);
    return o;
}

Outcome walk_criterion() {
    Outcome o;
    double worst = 0.0;
    for (std::int64_t x0 = 0; x0 <= 6; ++x0) {
        const auto p = walk_program(x0);
        const auto r = eval(p, Distribution::point(schema_of(p), make_state({x0})), EvalOptions{400});
        const std::vector<std::string> keep{"t"};
        const auto times = marginal(r.dist, keep);
        for (std::uint64_t k = 0; k <= 80; ++k) {
            double want = 0.0;
            if (x0 == 0) {
                want = k == 0 ? 1.0 : 0.0;
            } else if (k >= static_cast<std::uint64_t>(x0)) {
                want = binom(static_cast<unsigned>(k - 1), static_cast<unsigned>(x0 - 1)) / std::ldexp(1.0, static_cast<int>(k));
            }
            const double got = times.probability_of(ProgramState{{}, std::nullopt, Time::finite(k)});
            worst = std::max(worst, std::abs(got - want));
            o.require(std::abs(got - want) <= 1e-9, fmt::format("x={} k={} got {} want {}", x0, k, got, want));
        }
        double mean = 0.0;
        r.dist.for_each([&](const ProgramState& s, double q) {
            if (!s.time.is_infinite()) mean += q * static_cast<double>(s.time.ticks());
        });
        o.require(std::abs(mean - 2.0 * static_cast<double>(x0)) <= 1e-6, fmt::format("x={} mean {}", x0, mean));
        o.require(!r.nonterminating(), fmt::format("x={} did not terminate within fuel", x0));
    }
    if (o.pass) o.detail = fmt::format("x in 0..6, k <= 80, max pointwise error {:.3e}", worst);
    return o;
}

int cli(const std::string& line, std::string* captured = nullptr) {
    std::istringstream in(line);
    std::vector<std::string> args;
    for (std::string w; in >> w;) args.push_back(w.starts_with("programs/") ? kRoot + "/" + w : w);
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    if (captured != nullptr) *captured = out.str();
    return code;
}

Outcome refinement_criterion() {
    Outcome o;
    for (const char* file : {"countdown.qpp", "countdown_timed.qpp", "walk_bound.qpp"}) {
        std::string out;
        const int code = cli(fmt::format("refine programs/{} --fuel 1000", file), &out);
        o.require(code == kExitOk, fmt::format("{} exit {}", file, code));
        o.require(out.find("-4,..9") != std::string::npos, fmt::format("{} does not report its window", file));
    }
    std::string out;
    const int code = cli("refine programs/countdown_mutant.qpp --fuel 1000", &out);
    o.require(code == kExitRefinementFails, fmt::format("mutant exit {}", code));
    o.require(out.find("counterexample: x=") != std::string::npos, "mutant report has no counterexample");
    if (o.pass) o.detail = "3 refinements hold, mutant refuted";
    return o;
}

Outcome semantics_criterion() {
    Outcome o;
    Program xy;
    xy.vars = {VarDecl{"x", VarDecl::Type::Int, 0, 9}, VarDecl{"y", VarDecl::Type::Int, 0, 9}};
    auto start = [&](std::int64_t x, std::int64_t y) { return Distribution::point(schema_of(xy), make_state({x, y})); };

    testing::StmtGen gen(20240917);
    for (int i = 0; i < 100; ++i) {
        const auto a = gen.stmt({"x", "y"}, 3);
        const auto b = gen.stmt({"x", "y"}, 3);
        const auto c = gen.stmt({"x", "y"}, 3);
        const auto init = start(i % 9, (i * 7) % 9);
        const auto left = eval(xy, st::seq(st::seq(a, b), c), init);
        const auto right = eval(xy, st::seq(a, st::seq(b, c)), init);
        o.require(std::abs(left.dist.total() - 1.0) <= 1e-9, "mass not conserved");
        o.require(distance(left.dist, right.dist) <= 1e-12, "sequential composition not associative");
    }

    // (x := e); P against P with e for x, P a distribution specification.
    for (int i = 0; i < 100; ++i) {
        const auto e = gen.value_expr({"x", "y"}, false);
        const auto body = ex::bin(BinaryOp::Mul, ex::bin(BinaryOp::Eq, ex::primed("x"), gen.value_expr({"x", "y"}, false)),
                                  ex::bin(BinaryOp::Eq, ex::primed("y"), gen.value_expr({"x"}, false)));
        const auto init = start(i % 9, (i * 5) % 9);
        const auto lhs = eval(xy, st::seq(st::assign("x", e), st::spec(SpecKind::Dist, body)), init).dist;
        const auto rhs = eval(xy, st::spec(SpecKind::Dist, substitute(body, "x", e)), init).dist;
        o.require(distance(lhs, rhs) <= 1e-12, "substitution law fails for " + print_expr(body));
    }

    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const int n = 1 + i % 3;
        const auto psi = testing::random_state(rng, n);
        const std::size_t dim = std::size_t{1} << n;
        std::vector<Matrix> projectors;
        std::vector<Observable::Eigenpair> pairs;
        for (std::size_t m = 0; m < dim; ++m) {
            Matrix pm(dim);
            pm(m, m) = 1.0;
            projectors.push_back(pm);
            pairs.push_back({static_cast<double>(m), pm});
        }
        const auto chain = {measure_general(MeasurementCollection(n, projectors), psi),
                            measure_observable(Observable(pairs), psi),
                            measure_in_basis(MeasurementBasis::computational(n), psi)};
        for (std::size_t r = 0; r < dim; ++r) {
            const double want = std::norm(psi[r]);
            for (const auto& d : chain) {
                o.require(std::abs(d.probability_of(r) - (want > kProbEps ? want : 0.0)) <= 1e-10,
                          "measurement specialization chain differs");
            }
        }
        for (const auto& d : chain) {
            for (const auto& e : d.entries) {
                o.require(std::abs(std::abs(e.post_state[e.outcome]) - 1.0) <= 1e-10, "post state is not the outcome ket");
            }
        }
    }

    for (int n = 1; n <= 4; ++n) {
        const std::size_t dim = std::size_t{1} << n;
        std::vector<std::uint8_t> table(dim);
        for (auto& b : table) b = static_cast<std::uint8_t>(rng() & 1U);
        Matrix h(dim), inv(dim), orc(dim);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                h(r, c) = (std::popcount(r & c) % 2 ? -1.0 : 1.0) / std::sqrt(static_cast<double>(dim));
                inv(r, c) = 2.0 / static_cast<double>(dim) - (r == c ? 1.0 : 0.0);
            }
            orc(r, r) = table[r] ? -1.0 : 1.0;
        }
        o.require(max_abs_difference(Operator::hadamard_all(n).to_dense(), h) <= 1e-10, "H differs from dense");
        o.require(max_abs_difference(Operator::inversion_about_mean(n).to_dense(), inv) <= 1e-10, "M differs from dense");
        o.require(max_abs_difference(Operator::phase_oracle(table).to_dense(), orc) <= 1e-10, "U_f differs from dense");
        for (const auto& u : {Operator::hadamard_all(n), Operator::inversion_about_mean(n), Operator::phase_oracle(table),
                              Operator::dense(testing::random_unitary(rng, dim))}) {
            o.require(is_unitary(u, 1e-10), "operator is not unitary");
            for (int t = 0; t < 25; ++t) {
                o.require(std::abs(apply(u, testing::random_state(rng, n)).norm_squared() - 1.0) <= 1e-9,
                          "norm not preserved");
            }
        }
    }
    if (o.pass) o.detail = "mass, associativity, 100 substitutions, measurement chain, unitarity";
    return o;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome parser_and_golden_criterion() {
    Outcome o;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        testing::ProgramGen gen(seed);
        const auto p = gen.program();
        const auto text = print_program(p);
        try {
            o.require(parse_program(text) == p, fmt::format("round trip changes program {}", seed));
        } catch (const std::exception& e) {
            o.require(false, fmt::format("program {} does not parse back: {}", seed, e.what()));
        }
    }
    std::ifstream list(kRoot + "/tests/golden/commands.txt");
    std::size_t goldens = 0;
    for (std::string line; std::getline(list, line);) {
        if (line.empty() || line[0] == '#') continue;
        const auto bar = line.find('|');
        std::string first, second;
        cli(line.substr(bar + 1), &first);
        cli(line.substr(bar + 1), &second);
        o.require(first == second, "output differs between runs: " + line.substr(bar + 1));
        o.require(first == read_file(kRoot + "/tests/golden/" + line.substr(0, bar)), "golden mismatch: " + line.substr(0, bar));
        ++goldens;
    }
    o.require(goldens > 0, "no golden files");
    if (o.pass) o.detail = fmt::format("500 round trips, {} goldens", goldens);
    return o;
}

}  // namespace

// With a criterion number as argument, runs only that criterion.
int main(int argc, char** argv) {
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    struct Criterion {
        int id;
        const char* name;
        double limit_seconds;  // 0: no limit
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "Deutsch-Jozsa quantum", 5, deutsch_jozsa_quantum_criterion},
        {2, "Deutsch-Jozsa classical bound", 1, deutsch_jozsa_classical_criterion},
        {3, "Grover formula agreement", 60, grover_formula_criterion},
        {4, "Grover optimal iterations", 30, grover_optimum_criterion},
        {5, "mixed-state identities", 0, mixed_state_criterion},
        {6, "probabilistic walk", 0, walk_criterion},
        {7, "refinement checker", 0, refinement_criterion},
        {8, "semantics properties", 0, semantics_criterion},
        {9, "parser round trip and goldens", 0, parser_and_golden_criterion},
    };
    int failures = 0;
    std::size_t ran = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        ++ran;
        const auto begin = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
        if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
            o.require(false, fmt::format("took {:.2f} s, limit {} s", seconds, c.limit_seconds));
        }
        std::cout << fmt::format("criterion {}: {} - {} ({:.2f} s) {}\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                                 seconds, o.detail);
        if (!o.pass) ++failures;
    }
    if (ran == 0) {
        std::cerr << "no criterion " << only << '\n';
        return 2;
    }
    std::cout << fmt::format("{} of {} criteria passed\n", ran - failures, ran);
    return failures == 0 ? 0 : 1;
}
