#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpp/eval.hpp"

namespace qpp {

inline constexpr double kRefineTol = 1e-9;

struct RefinementOptions {
    EvalOptions eval;
    double tol = kRefineTol;
    std::size_t max_counterexamples = 20;
    /// Value of t in every enumerated prestate.
    std::uint64_t initial_time = 0;
};

struct Counterexample {
    ProgramState pre;
    /// Poststate (over the variables the specification mentions for
    /// distribution specifications).
    ProgramState post;
    /// Specification value: 0/1 for boolean specifications.
    double expected = 0.0;
    /// Probability the program gives the poststate.
    double actual = 0.0;
    std::string description;
};

struct RefinementReport {
    bool holds = true;
    SpecKind kind = SpecKind::Bool;
    std::size_t prestates_checked = 0;
    std::size_t pairs_checked = 0;
    /// The finite window the result is certified over, e.g. "x: -4,..9".
    std::string window;
    double max_abs_error = 0.0;
    double max_infinite_mass = 0.0;
    std::vector<Counterexample> counterexamples;
    std::vector<std::string> notes;
};

/// Checks spec <= impl for every prestate in the product of the declared
/// windows (time starts at options.initial_time).
///
/// Boolean specifications must hold for every poststate the program reaches
/// with positive probability; mass that does not terminate within the fuel
/// must satisfy the specification at t' = inf for every window value of the
/// primed variables it mentions. Distribution specifications are compared
/// pointwise against the program's marginal on the primed variables they
/// mention. Throws ValidationError for bad references, CapacityError for
/// windows that are too large.
RefinementReport check_refinement(const Program& program, const Spec& spec, const Stmt& impl,
                                  const RefinementOptions& options = {});
/// The program's own spec against its main body.
RefinementReport check_refinement(const Program& program, const RefinementOptions& options = {});

/// As check_refinement, but first requires that every call inside a
/// definition is preceded by a tick in the same sequence, so that t counts
/// recursive calls.
RefinementReport check_timed_refinement(const Program& program, const Spec& spec, const Stmt& impl,
                                        const RefinementOptions& options = {});
RefinementReport check_timed_refinement(const Program& program, const RefinementOptions& options = {});

/// "x=1 b=true t=0"; primed adds ' to every name.
std::string describe_state(const Schema& schema, const ProgramState& state, bool primed = false);
/// "x: -4,..9; b: bool"
std::string describe_window(const Program& program);

}  // namespace qpp
