#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpp/eval.hpp"
#include "qpp/program.hpp"

namespace qpp {

// ---------------------------------------------------------------------------
// Oracles

enum class OracleClass { Constant, Balanced, Point, Other };

std::string to_string(OracleClass c);

/// A function 0,..2^n -> 0,1 given by its truth table.
class OracleFunction {
public:
    explicit OracleFunction(std::vector<std::uint8_t> table);
    /// "0110" -> f0=0, f1=1, f2=1, f3=0
    static OracleFunction from_bits(const std::string& bits);
    static OracleFunction constant(int n, bool value);
    static OracleFunction point(int n, std::size_t solution);

    int n_qubits() const noexcept { return n_; }
    std::size_t size() const noexcept { return table_.size(); }
    const std::vector<std::uint8_t>& table() const noexcept { return table_; }
    bool operator()(std::size_t i) const { return table_.at(i) != 0; }

    /// Constant takes precedence (n = 0 has a single entry); for n = 1 the
    /// balanced functions are also point functions and are tagged balanced.
    OracleClass classification() const noexcept { return class_; }
    /// Position of the single 1, for point functions.
    std::optional<std::size_t> solution() const;
    std::string bits() const;

private:
    int n_;
    std::vector<std::uint8_t> table_;
    OracleClass class_;
};

std::vector<OracleFunction> constant_functions(int n);
/// All C(2^n, 2^(n-1)) balanced functions in lexicographic table order.
/// CapacityError above n = 4.
std::vector<OracleFunction> balanced_functions(int n);
inline constexpr int kMaxBalancedEnumeration = 4;

// ---------------------------------------------------------------------------
// Deutsch-Jozsa

/// r : 0,..2^n; b : bool; psi[n]; oracle f.
/// psi := zero(n); psi := apply(H, psi); tick; psi := apply(oracle f, psi);
/// psi := apply(H, psi); measure psi r; b := r = 0
Program deutsch_jozsa_program(const OracleFunction& f);

struct DeutschJozsaQuantum {
    Distribution dist;
    /// Probability that b' says whether f is constant.
    double p_correct = 0.0;
    /// Ticks on every final state (each oracle application costs one).
    std::uint64_t oracle_calls = 0;
};

/// DomainError unless f is constant or balanced.
DeutschJozsaQuantum deutsch_jozsa_quantum(const OracleFunction& f);

struct DeutschJozsaClassical {
    bool constant = false;
    std::uint64_t oracle_calls = 0;
};

/// Queries f at 0,..2^(n-1)+1; DomainError unless f is constant or balanced.
DeutschJozsaClassical deutsch_jozsa_classical(const OracleFunction& f);

/// Deterministic one-query decision procedures for n = 1: which input to
/// query, and the answer for each observed bit.
struct DecisionTreeWitness {
    std::size_t trees_checked = 0;
    std::size_t correct_trees = 0;
};
DecisionTreeWitness one_query_decision_trees();

// ---------------------------------------------------------------------------
// Grover

class GroverAnalysis {
public:
    /// DomainError unless n is a power of two and at least 2.
    explicit GroverAnalysis(std::uint64_t n);

    std::uint64_t size() const noexcept { return n_; }
    int qubits() const noexcept { return qubits_; }
    /// arcsin(sqrt(1/N))
    double theta() const noexcept { return theta_; }
    /// sin^2((2k+1) theta)
    double p_success(std::uint64_t k) const;
    /// (1 - p_success(k)) / (N - 1)
    double p_other(std::uint64_t k) const;
    /// pi / (4 theta) - 1/2
    double real_optimum() const;
    /// Better of floor and ceiling of real_optimum(); ties go to the smaller.
    std::uint64_t k_opt() const;
    /// ceil(pi sqrt(N) / 4)
    std::uint64_t k_approx() const;

private:
    std::uint64_t n_;
    int qubits_;
    double theta_;
};

struct GroverOptimum {
    std::uint64_t k_opt = 0;
    double p_success = 0.0;
    std::uint64_t k_approx = 0;
    double p_approx = 0.0;
};
GroverOptimum grover_optimal_iterations(std::uint64_t n);

/// r : 0,..N; i : 0,..k+1; psi[n]; oracle f.
/// def R = if i = k then measure psi r else
///   (psi := apply(oracle f, psi); psi := apply(invmean, psi); i := i + 1; tick; call R)
/// main i := 0; psi := zero(n); psi := apply(H, psi); call R
Program grover_program(const OracleFunction& f, std::uint64_t k);
/// (r' = x1) * sin((2(t'-t)+1) arcsin(sqrt(1/N)))^2
///   + (r' # x1) * (1 - sin(...)^2) / (N - 1)
Spec grover_spec(const OracleFunction& f);

struct GroverRun {
    /// Over (r', t').
    Distribution dist;
    double p_solution = 0.0;
    std::uint64_t oracle_calls = 0;
};

/// DomainError unless f is a point function. The final measurement
/// probabilities are read off the state the program reaches, so the
/// N post-measurement states are never stored.
GroverRun grover_run(const OracleFunction& f, std::uint64_t k);

// ---------------------------------------------------------------------------
// Probabilistic walk

/// x : 0,..x0+1; def P = if x = 0 then ok else (x := x - rand(2); tick; call P)
Program walk_program(std::int64_t x0);

struct WalkRun {
    /// Over (x', t').
    Distribution dist;
    double infinite_mass = 0.0;
    double pruned_mass = 0.0;
};

/// DomainError for x0 < 0 or fuel < 4 x0 + 64.
WalkRun probabilistic_walk(std::int64_t x0, std::uint64_t fuel);
/// P(t' - t = k) = binom(k-1, x0-1) / 2^k for k >= x0 > 0; x0 = 0 stops at once.
double walk_probability(std::int64_t x0, std::uint64_t k);

// ---------------------------------------------------------------------------
// Mixed states

struct MixedCheck {
    std::string name;
    bool passed = false;
    double distance = 0.0;
    std::size_t cases = 0;
    std::string detail;  // the two distributions, on failure
};

struct MixedStateReport {
    std::vector<MixedCheck> checks;
    bool passed() const;
};

inline constexpr double kMixedTol = 1e-12;
inline constexpr std::uint64_t kMixedSeed = 20240917;
inline constexpr std::size_t kMixedRandomStates = 100;

/// (a) measuring H|0>, (b) the measure-then-maybe-H program,
/// (c) measure; measure = measure on random 1-3 qubit states.
MixedStateReport mixed_state_demos(std::uint64_t seed = kMixedSeed, std::size_t random_states = kMixedRandomStates);

/// measure psi r; if r = 0 then psi := apply(H, psi) else ok, after preparing H|0>
Program toy_mixed_program();

// ---------------------------------------------------------------------------
// Reports

struct AlgorithmReport {
    std::string algorithm;
    int n = 0;
    std::size_t cases_checked = 0;
    double max_abs_error = 0.0;
    std::uint64_t oracle_calls = 0;
    bool pass = false;
};

std::string to_json(const AlgorithmReport& r);

/// Every constant and balanced oracle on n qubits.
AlgorithmReport deutsch_jozsa_quantum_sweep(int n);
AlgorithmReport deutsch_jozsa_classical_sweep(int n);
/// Every solution position at k iterations: simulation against the closed form.
AlgorithmReport grover_sweep(int n, std::uint64_t k);
/// x0 against the negative binomial for k <= max_k, and the mean.
AlgorithmReport walk_check(std::int64_t x0, std::uint64_t max_k = 80);

}  // namespace qpp
