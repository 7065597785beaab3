#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "qpp/distribution.hpp"
#include "qpp/program.hpp"

namespace qpp {

inline constexpr std::uint64_t kDefaultFuel = 10000;
/// Nonterminating mass above this is reported.
inline constexpr double kReportEps = 1e-9;
/// Entries below this are dropped at each recursive unfolding so that long
/// probabilistic runs keep a bounded support. The dropped mass is reported.
inline constexpr double kEvalPruneEps = 1e-24;

struct EvalOptions {
    /// Maximum number of nested call unfoldings along any path.
    std::uint64_t fuel = kDefaultFuel;
};

struct EvalResult {
    Distribution dist;
    /// Mass whose evaluation ran out of fuel; it carries time = inf.
    double infinite_mass = 0.0;
    /// Mass dropped below kEvalPruneEps / kProbEps.
    double pruned_mass = 0.0;
    /// A boolean specification ran in statement position, so the
    /// probabilities only describe the support.
    bool nondeterministic = false;

    bool nonterminating() const noexcept { return infinite_mass > kReportEps; }
};

/// Variables of a program's states, in declaration order.
Schema schema_of(const Program& program);

/// Prestate with the given classical values, no quantum state, and time t.
ProgramState make_state(std::vector<std::int64_t> values, std::uint64_t t = 0);

/// Exact distribution semantics of a validated program.
///
/// Distributions are pushed through each statement; recursion unfolds
/// named definitions up to `fuel` levels deep, and any mass still running
/// at that depth is given time inf. An Interpreter is immutable after
/// construction and may be shared between threads.
class Interpreter {
public:
    explicit Interpreter(Program program, EvalOptions options = {});

    const Program& program() const noexcept { return *program_; }
    const Schema& schema() const noexcept { return schema_; }
    const EvalOptions& options() const noexcept { return options_; }

    EvalResult run(const Stmt& stmt, const Distribution& initial) const;
    EvalResult run(const Distribution& initial) const { return run(program_->main, initial); }

    /// The unitary an application statement refers to.
    const Operator& resolve(const OpRef& op) const;

private:
    std::shared_ptr<const Program> program_;
    EvalOptions options_;
    Schema schema_;
    std::map<std::string, Operator> oracles_;
    std::optional<Operator> hadamard_;
    std::optional<Operator> invmean_;
};

EvalResult eval(const Program& program, const Stmt& stmt, const Distribution& initial, const EvalOptions& options = {});
EvalResult eval(const Program& program, const Distribution& initial, const EvalOptions& options = {});

/// Distribution transformers: the denotation of a program fragment.
using Transformer = std::function<Distribution(const Distribution&)>;

Transformer transformer(const Program& program, const Stmt& stmt, const EvalOptions& options = {});
/// R;S = sum over intermediate states of R'' * S''.
Transformer seq_compose(Transformer r, Transformer s);
/// if p then R else S = p * R + (1 - p) * S. DomainError unless 0 <= p <= 1.
Transformer prob_if(double p, Transformer r, Transformer s);

}  // namespace qpp
