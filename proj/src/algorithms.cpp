#include "qpp/algorithms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <exception>
#include <numbers>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "qpp/errors.hpp"

namespace qpp {

std::string to_string(OracleClass c) {
    switch (c) {
        case OracleClass::Constant:
            return "constant";
        case OracleClass::Balanced:
            return "balanced";
        case OracleClass::Point:
            return "point";
        case OracleClass::Other:
            return "other";
    }
    return "other";
}

namespace {

OracleClass classify(const std::vector<std::uint8_t>& table) {
    const auto ones = static_cast<std::size_t>(std::count(table.begin(), table.end(), 1));
    if (ones == 0 || ones == table.size()) return OracleClass::Constant;
    if (2 * ones == table.size()) return OracleClass::Balanced;
    if (ones == 1) return OracleClass::Point;
    return OracleClass::Other;
}

}  // namespace

OracleFunction::OracleFunction(std::vector<std::uint8_t> table) : table_(std::move(table)) {
    if (table_.empty()) throw DomainError("oracle table is empty");
    n_ = qubits_for_dimension(table_.size());
    for (const auto b : table_) {
        if (b > 1) throw DomainError("oracle table entries must be 0 or 1");
    }
    class_ = classify(table_);
}

OracleFunction OracleFunction::from_bits(const std::string& bits) {
    std::vector<std::uint8_t> table;
    table.reserve(bits.size());
    for (const char c : bits) {
        if (c != '0' && c != '1') throw DomainError(fmt::format("'{}' is not a bit", c));
        table.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return OracleFunction(std::move(table));
}

OracleFunction OracleFunction::constant(int n, bool value) {
    check_qubit_count(n);
    return OracleFunction(std::vector<std::uint8_t>(std::size_t{1} << n, value ? 1 : 0));
}

OracleFunction OracleFunction::point(int n, std::size_t solution) {
    check_qubit_count(n);
    std::vector<std::uint8_t> table(std::size_t{1} << n, 0);
    if (solution >= table.size()) throw DomainError(fmt::format("solution {} outside 0,..{}", solution, table.size()));
    table[solution] = 1;
    return OracleFunction(std::move(table));
}

std::optional<std::size_t> OracleFunction::solution() const {
    if (std::count(table_.begin(), table_.end(), 1) != 1) return std::nullopt;
    return static_cast<std::size_t>(std::find(table_.begin(), table_.end(), 1) - table_.begin());
}

std::string OracleFunction::bits() const {
    std::string out;
    out.reserve(table_.size());
    for (const auto b : table_) out += static_cast<char>('0' + b);
    return out;
}

std::vector<OracleFunction> constant_functions(int n) {
    return {OracleFunction::constant(n, false), OracleFunction::constant(n, true)};
}

std::vector<OracleFunction> balanced_functions(int n) {
    if (n < 1) throw DomainError("balanced functions need n >= 1");
    if (n > kMaxBalancedEnumeration) {
        throw CapacityError(fmt::format("enumerating balanced functions is limited to n <= {}", kMaxBalancedEnumeration));
    }
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::uint8_t> table(size, 0);
    std::fill(table.begin() + static_cast<std::ptrdiff_t>(size / 2), table.end(), 1);
    std::vector<OracleFunction> out;
    do {
        out.emplace_back(table);
    } while (std::next_permutation(table.begin(), table.end()));
    return out;
}

// ---------------------------------------------------------------------------

namespace {

void require_promise(const OracleFunction& f) {
    const auto c = f.classification();
    if (c != OracleClass::Constant && c != OracleClass::Balanced) {
        throw DomainError(fmt::format("oracle {} is neither constant nor balanced", f.bits()));
    }
}

Distribution start(const Program& p) {
    std::vector<std::int64_t> values;
    for (const auto& v : p.vars) values.push_back(v.lo);
    return Distribution::point(schema_of(p), make_state(std::move(values)));
}

std::uint64_t ticks_if_uniform(const Distribution& d) {
    std::optional<Time> seen;
    bool uniform = true;
    d.for_each([&](const ProgramState& s, double) {
        if (seen && *seen != s.time) uniform = false;
        seen = s.time;
    });
    if (!seen || !uniform || seen->is_infinite()) throw DomainError("final states disagree on the time");
    return seen->ticks();
}

}  // namespace

Program deutsch_jozsa_program(const OracleFunction& f) {
    const int n = f.n_qubits();
    Program p;
    p.vars = {VarDecl{"r", VarDecl::Type::Int, 0, std::int64_t{1} << n}, VarDecl{"b", VarDecl::Type::Bool, 0, 2}};
    p.qreg = QRegDecl{"psi", n};
    p.oracles = {OracleDecl{"f", f.table()}};
    p.main = st::seq({st::qinit(n), st::apply_h(), st::tick(), st::apply_oracle("f"), st::apply_h(),
                      st::measure("r"), st::assign("b", ex::bin(BinaryOp::Eq, ex::var("r"), ex::lit(0)))});
    return p;
}

DeutschJozsaQuantum deutsch_jozsa_quantum(const OracleFunction& f) {
    require_promise(f);
    const Program p = deutsch_jozsa_program(f);
    DeutschJozsaQuantum out;
    out.dist = eval(p, start(p)).dist;
    const bool constant = f.classification() == OracleClass::Constant;
    const auto b = static_cast<std::size_t>(schema_of(p).index_of("b"));
    out.dist.for_each([&](const ProgramState& s, double prob) {
        if ((s.values[b] != 0) == constant) out.p_correct += prob;
    });
    out.oracle_calls = ticks_if_uniform(out.dist);
    return out;
}

DeutschJozsaClassical deutsch_jozsa_classical(const OracleFunction& f) {
    require_promise(f);
    DeutschJozsaClassical out;
    const std::size_t last = f.size() / 2;  // 2^(n-1), inclusive
    const bool first = f(0);
    out.oracle_calls = 1;
    out.constant = true;
    for (std::size_t i = 1; i <= last; ++i) {
        ++out.oracle_calls;
        if (f(i) != first) out.constant = false;
    }
    return out;
}

DecisionTreeWitness one_query_decision_trees() {
    std::vector<OracleFunction> promise = constant_functions(1);
    for (auto& b : balanced_functions(1)) promise.push_back(std::move(b));
    DecisionTreeWitness w;
    for (std::size_t query = 0; query < 2; ++query) {
        for (unsigned answers = 0; answers < 4; ++answers) {
            // bit j of `answers`: the verdict "constant" after observing j
            ++w.trees_checked;
            bool correct = true;
            for (const auto& f : promise) {
                const bool verdict = ((answers >> (f(query) ? 1 : 0)) & 1U) != 0;
                if (verdict != (f.classification() == OracleClass::Constant)) correct = false;
            }
            if (correct) ++w.correct_trees;
        }
    }
    return w;
}

// ---------------------------------------------------------------------------

GroverAnalysis::GroverAnalysis(std::uint64_t n) : n_(n) {
    if (n < 2 || (n & (n - 1)) != 0) throw DomainError(fmt::format("N = {} is not a power of two >= 2", n));
    qubits_ = std::countr_zero(n);
    theta_ = std::asin(std::sqrt(1.0 / static_cast<double>(n)));
}

double GroverAnalysis::p_success(std::uint64_t k) const {
    const double s = std::sin((2.0 * static_cast<double>(k) + 1.0) * theta_);
    return s * s;
}

double GroverAnalysis::p_other(std::uint64_t k) const {
    return (1.0 - p_success(k)) / static_cast<double>(n_ - 1);
}

double GroverAnalysis::real_optimum() const { return std::numbers::pi / (4.0 * theta_) - 0.5; }

std::uint64_t GroverAnalysis::k_opt() const {
    const double r = std::max(0.0, real_optimum());
    const auto lo = static_cast<std::uint64_t>(std::floor(r));
    const auto hi = static_cast<std::uint64_t>(std::ceil(r));
    return p_success(hi) > p_success(lo) ? hi : lo;
}

std::uint64_t GroverAnalysis::k_approx() const {
    return static_cast<std::uint64_t>(std::ceil(std::numbers::pi * std::sqrt(static_cast<double>(n_)) / 4.0));
}

GroverOptimum grover_optimal_iterations(std::uint64_t n) {
    const GroverAnalysis g(n);
    GroverOptimum out;
    out.k_opt = g.k_opt();
    out.p_success = g.p_success(out.k_opt);
    out.k_approx = g.k_approx();
    out.p_approx = g.p_success(out.k_approx);
    return out;
}

namespace {

Program grover_program_impl(const OracleFunction& f, std::uint64_t k, bool with_measurement) {
    const int n = f.n_qubits();
    const auto kk = static_cast<std::int64_t>(k);
    Program p;
    p.vars = {VarDecl{"r", VarDecl::Type::Int, 0, std::int64_t{1} << n}, VarDecl{"i", VarDecl::Type::Int, 0, kk + 1}};
    p.qreg = QRegDecl{"psi", n};
    p.oracles = {OracleDecl{"f", f.table()}};
    Stmt iteration = st::seq({st::apply_oracle("f"), st::apply_invmean(),
                              st::assign("i", ex::bin(BinaryOp::Add, ex::var("i"), ex::lit(1))), st::tick(),
                              st::call("R")});
    p.definitions = {Definition{"R", st::if_(ex::bin(BinaryOp::Eq, ex::var("i"), ex::lit(kk)),
                                             with_measurement ? st::measure("r") : st::ok(), std::move(iteration))}};
    p.main = st::seq({st::assign("i", ex::lit(0)), st::qinit(n), st::apply_h(), st::call("R")});
    return p;
}

EvalOptions grover_fuel(std::uint64_t k) { return EvalOptions{std::max(kDefaultFuel, k + 2)}; }

std::size_t require_solution(const OracleFunction& f) {
    const auto x1 = f.solution();
    if (!x1) throw DomainError(fmt::format("oracle {} does not have exactly one solution", f.bits()));
    return *x1;
}

}  // namespace

Program grover_program(const OracleFunction& f, std::uint64_t k) { return grover_program_impl(f, k, true); }

Spec grover_spec(const OracleFunction& f) {
    const auto x1 = static_cast<std::int64_t>(require_solution(f));
    const std::int64_t n = std::int64_t{1} << f.n_qubits();
    using ex::bin;
    const Expr elapsed = bin(BinaryOp::Sub, ex::primed("t"), ex::var("t"));
    const Expr angle =
        bin(BinaryOp::Mul, bin(BinaryOp::Add, bin(BinaryOp::Mul, ex::lit(2), elapsed), ex::lit(1)),
            ex::call("arcsin", {ex::call("sqrt", {bin(BinaryOp::Div, ex::lit(1), ex::lit(n))})}));
    const Expr success = bin(BinaryOp::Pow, ex::call("sin", {angle}), ex::lit(2));
    const Expr hit = bin(BinaryOp::Eq, ex::primed("r"), ex::lit(x1));
    const Expr miss = bin(BinaryOp::Ne, ex::primed("r"), ex::lit(x1));
    const Expr other = bin(BinaryOp::Div, bin(BinaryOp::Sub, ex::lit(1), success), ex::lit(n - 1));
    return Spec{SpecKind::Dist, bin(BinaryOp::Add, bin(BinaryOp::Mul, hit, success), bin(BinaryOp::Mul, miss, other))};
}

GroverRun grover_run(const OracleFunction& f, std::uint64_t k) {
    const std::size_t x1 = require_solution(f);
    const Program p = grover_program_impl(f, k, false);
    const EvalResult before = eval(p, start(p), grover_fuel(k));
    const auto entries = before.dist.entries();
    if (entries.size() != 1 || !entries[0].state.quantum) throw DomainError("Grover iterations did not end in one state");
    const ProgramState& final_state = entries[0].state;
    const QuantumState& psi = *final_state.quantum;

    Schema schema;
    schema.vars = {"r"};
    schema.boolean = {false};
    GroverRun out;
    out.dist = Distribution(schema);
    out.oracle_calls = final_state.time.ticks();
    for (std::size_t r = 0; r < psi.dim(); ++r) {
        const double prob = std::norm(psi[r]);
        if (prob > kProbEps) out.dist.add(ProgramState{{static_cast<std::int64_t>(r)}, std::nullopt, final_state.time}, prob);
    }
    out.p_solution = std::norm(psi[x1]);
    return out;
}

// ---------------------------------------------------------------------------

Program walk_program(std::int64_t x0) {
    if (x0 < 0) throw DomainError("the walk starts at x >= 0");
    Program p;
    p.vars = {VarDecl{"x", VarDecl::Type::Int, 0, x0 + 1}};
    const Expr step = ex::bin(BinaryOp::Sub, ex::var("x"), ex::rand(ex::lit(2)));
    p.definitions = {Definition{
        "P", st::if_(ex::bin(BinaryOp::Eq, ex::var("x"), ex::lit(0)), st::ok(),
                     st::seq({st::assign("x", step), st::tick(), st::call("P")}))}};
    p.main = st::call("P");
    return p;
}

WalkRun probabilistic_walk(std::int64_t x0, std::uint64_t fuel) {
    if (x0 < 0) throw DomainError("the walk starts at x >= 0");
    const auto needed = 4 * static_cast<std::uint64_t>(x0) + 64;
    if (fuel < needed) throw DomainError(fmt::format("fuel {} is below 4 x + 64 = {}", fuel, needed));
    const Program p = walk_program(x0);
    const Distribution init = Distribution::point(schema_of(p), make_state({x0}));
    EvalResult r = eval(p, init, EvalOptions{fuel});
    return WalkRun{std::move(r.dist), r.infinite_mass, r.pruned_mass};
}

double walk_probability(std::int64_t x0, std::uint64_t k) {
    if (x0 < 0) throw DomainError("the walk starts at x >= 0");
    if (x0 == 0) return k == 0 ? 1.0 : 0.0;
    const auto x = static_cast<std::uint64_t>(x0);
    if (k < x) return 0.0;
    // binom(k-1, x-1) / 2^k in log space
    const double lb = std::lgamma(static_cast<double>(k)) - std::lgamma(static_cast<double>(x)) -
                      std::lgamma(static_cast<double>(k - x + 1));
    return std::exp(lb - static_cast<double>(k) * std::numbers::ln2);
}

// ---------------------------------------------------------------------------

namespace {

std::string show(const Distribution& d) {
    std::string out;
    d.for_each([&](const ProgramState& s, double p) {
        out += fmt::format("  p={:.17g}", p);
        if (s.quantum) {
            out += " psi=[";
            for (std::size_t i = 0; i < s.quantum->dim(); ++i) {
                const auto a = (*s.quantum)[i];
                out += fmt::format("{}{:.12g}{:+.12g}i", i ? ", " : "", a.real(), a.imag());
            }
            out += "]";
        }
        out += '\n';
    });
    return out;
}

Program single_qubit_program() {
    Program p;
    p.vars = {VarDecl{"r", VarDecl::Type::Int, 0, 2}};
    p.qreg = QRegDecl{"psi", 1};
    return p;
}

Distribution psi_marginal(const Distribution& d) {
    const std::vector<std::string> keep{"psi"};
    return marginal(d, keep);
}

MixedCheck compare_check(std::string name, const Distribution& got, const Distribution& want) {
    MixedCheck c;
    c.name = std::move(name);
    c.cases = 1;
    c.distance = distance(got, want);
    c.passed = c.distance <= kMixedTol;
    if (!c.passed) c.detail = "computed:\n" + show(got) + "expected:\n" + show(want);
    return c;
}

QuantumState random_state(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss;
    std::vector<Amplitude> a(std::size_t{1} << n);
    double norm = 0.0;
    for (auto& z : a) {
        z = {gauss(rng), gauss(rng)};
        norm += std::norm(z);
    }
    for (auto& z : a) z /= std::sqrt(norm);
    return QuantumState::from_amplitudes(std::move(a));
}

}  // namespace

Program toy_mixed_program() {
    Program p = single_qubit_program();
    p.main = st::seq({st::qinit(1), st::apply_h(), st::measure("r"),
                      st::if_(ex::bin(BinaryOp::Eq, ex::var("r"), ex::lit(0)), st::apply_h(), st::ok())});
    return p;
}

bool MixedStateReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const MixedCheck& c) { return c.passed; });
}

MixedStateReport mixed_state_demos(std::uint64_t seed, std::size_t random_states) {
    MixedStateReport report;
    const double h = 1.0 / std::sqrt(2.0);
    const QuantumState zero = QuantumState::basis(0, 1);
    const QuantumState one = QuantumState::basis(1, 1);
    const QuantumState plus = QuantumState::from_amplitudes({h, h});

    Schema psi_only;
    psi_only.qreg = "psi";
    psi_only.has_time = false;

    {
        Program p = single_qubit_program();
        p.main = st::seq({st::qinit(1), st::apply_h(), st::measure("r")});
        const Distribution got = psi_marginal(eval(p, start(p)).dist);
        Distribution want(psi_only);
        want.add(ProgramState{{}, zero, Time{}}, 0.5);
        want.add(ProgramState{{}, one, Time{}}, 0.5);
        report.checks.push_back(compare_check("measurement of (|0>+|1>)/sqrt2", got, want));
    }
    {
        const Program p = toy_mixed_program();
        const Distribution got = psi_marginal(eval(p, start(p)).dist);
        Distribution want(psi_only);
        want.add(ProgramState{{}, plus, Time{}}, 0.5);
        want.add(ProgramState{{}, one, Time{}}, 0.5);
        report.checks.push_back(compare_check("toy program final state", got, want));
    }
    {
        MixedCheck c;
        c.name = "measure; measure = measure";
        c.passed = true;
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> qubits(1, 3);
        for (std::size_t i = 0; i < random_states; ++i) {
            const int n = qubits(rng);
            const QuantumState psi = random_state(rng, n);
            Program p;
            p.vars = {VarDecl{"r", VarDecl::Type::Int, 0, std::int64_t{1} << n}};
            p.qreg = QRegDecl{"psi", n};
            const Distribution init = Distribution::point(schema_of(p), ProgramState{{0}, psi, Time{}});
            const Distribution once = eval(p, st::measure("r"), init).dist;
            const Distribution twice = eval(p, st::seq(st::measure("r"), st::measure("r")), init).dist;
            const double d = distance(twice, once);
            ++c.cases;
            c.distance = std::max(c.distance, d);
            if (d > kMixedTol && c.passed) {
                c.passed = false;
                c.detail = "measure; measure:\n" + show(twice) + "measure:\n" + show(once);
            }
        }
        report.checks.push_back(std::move(c));
    }
    return report;
}

// ---------------------------------------------------------------------------

std::string to_json(const AlgorithmReport& r) {
    nlohmann::ordered_json j;
    j["algorithm"] = r.algorithm;
    j["n"] = r.n;
    j["cases_checked"] = r.cases_checked;
    j["max_abs_error"] = r.max_abs_error;
    j["oracle_calls"] = r.oracle_calls;
    j["pass"] = r.pass;
    return j.dump();
}

namespace {

std::vector<OracleFunction> promise_set(int n) {
    std::vector<OracleFunction> all = constant_functions(n);
    for (auto& f : balanced_functions(n)) all.push_back(std::move(f));
    return all;
}

}  // namespace

AlgorithmReport deutsch_jozsa_quantum_sweep(int n) {
    const auto oracles = promise_set(n);
    std::vector<DeutschJozsaQuantum> results(oracles.size());
    std::vector<std::exception_ptr> errors(oracles.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < oracles.size(); ++i) {
        try {
            results[i] = deutsch_jozsa_quantum(oracles[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    AlgorithmReport r{"deutsch-jozsa-quantum", n, oracles.size(), 0.0, 1, true};
    for (std::size_t i = 0; i < oracles.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        r.max_abs_error = std::max(r.max_abs_error, 1.0 - results[i].p_correct);
        if (results[i].oracle_calls != 1) {
            r.pass = false;
            r.oracle_calls = results[i].oracle_calls;
        }
    }
    r.pass = r.pass && r.max_abs_error <= 1e-9;
    return r;
}

AlgorithmReport deutsch_jozsa_classical_sweep(int n) {
    const auto oracles = promise_set(n);
    const std::uint64_t expected = (std::uint64_t{1} << (n - 1)) + 1;
    AlgorithmReport r{"deutsch-jozsa-classical", n, oracles.size(), 0.0, expected, true};
    for (const auto& f : oracles) {
        const auto res = deutsch_jozsa_classical(f);
        if (res.constant != (f.classification() == OracleClass::Constant)) {
            r.pass = false;
            r.max_abs_error = 1.0;
        }
        if (res.oracle_calls != expected) {
            r.pass = false;
            r.oracle_calls = res.oracle_calls;
        }
    }
    return r;
}

AlgorithmReport grover_sweep(int n, std::uint64_t k) {
    check_qubit_count(n);
    const GroverAnalysis g(std::uint64_t{1} << n);
    const std::size_t size = std::size_t{1} << n;
    std::vector<double> errors(size, 0.0);
    std::vector<std::uint64_t> calls(size, 0);
    std::vector<std::exception_ptr> failures(size);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t x1 = 0; x1 < size; ++x1) {
        try {
            const GroverRun run = grover_run(OracleFunction::point(n, x1), k);
            double err = std::abs(run.p_solution - g.p_success(k));
            const double other = g.p_other(k);
            for (std::size_t r = 0; r < size; ++r) {
                if (r == x1) continue;
                const ProgramState s{{static_cast<std::int64_t>(r)}, std::nullopt, Time::finite(k)};
                err = std::max(err, std::abs(run.dist.probability_of(s) - other));
            }
            errors[x1] = err;
            calls[x1] = run.oracle_calls;
        } catch (...) {
            failures[x1] = std::current_exception();
        }
    }
    AlgorithmReport r{"grover", n, size, 0.0, k, true};
    for (std::size_t x1 = 0; x1 < size; ++x1) {
        if (failures[x1]) std::rethrow_exception(failures[x1]);
        r.max_abs_error = std::max(r.max_abs_error, errors[x1]);
        if (calls[x1] != k) {
            r.pass = false;
            r.oracle_calls = calls[x1];
        }
    }
    r.pass = r.pass && r.max_abs_error <= 1e-9;
    return r;
}

AlgorithmReport walk_check(std::int64_t x0, std::uint64_t max_k) {
    const std::uint64_t fuel = std::max<std::uint64_t>(4 * static_cast<std::uint64_t>(x0) + 64, max_k + 1);
    const WalkRun run = probabilistic_walk(x0, fuel);
    const std::vector<std::string> keep{"t"};
    const Distribution times = marginal(run.dist, keep);
    AlgorithmReport r{"walk", static_cast<int>(x0), 0, 0.0, 0, true};
    for (std::uint64_t k = 0; k <= max_k; ++k) {
        ++r.cases_checked;
        const double got = times.probability_of(ProgramState{{}, std::nullopt, Time::finite(k)});
        r.max_abs_error = std::max(r.max_abs_error, std::abs(got - walk_probability(x0, k)));
    }
    const double mean = expectation(run.dist, [](const ProgramState& s) {
        return s.time.is_infinite() ? 0.0 : static_cast<double>(s.time.ticks());
    });
    const double mean_error = std::abs(mean - 2.0 * static_cast<double>(x0));
    r.pass = r.max_abs_error <= 1e-9 && mean_error <= 1e-6 && run.infinite_mass <= kReportEps;
    return r;
}

}  // namespace qpp
