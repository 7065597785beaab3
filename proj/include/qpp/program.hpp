#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qpp/box.hpp"
#include "qpp/expr.hpp"
#include "qpp/qmeasure.hpp"
#include "qpp/qops.hpp"

namespace qpp {

// ---------------------------------------------------------------------------
// Statements

struct Stmt;

enum class SpecKind { Bool, Dist };

struct OkStmt {
    bool operator==(const OkStmt&) const = default;
};
/// x := e (e may contain rand).
struct AssignStmt {
    std::string var;
    Expr value;
    bool operator==(const AssignStmt&) const = default;
};
struct SeqStmt {
    Box<Stmt> first;
    Box<Stmt> second;
    bool operator==(const SeqStmt&) const = default;
};
struct IfStmt {
    Expr cond;
    Box<Stmt> then_branch;
    Box<Stmt> else_branch;
    bool operator==(const IfStmt&) const = default;
};
/// if p then R else S == p * R + (1 - p) * S
struct ProbIfStmt {
    Expr prob;
    Box<Stmt> then_branch;
    Box<Stmt> else_branch;
    bool operator==(const ProbIfStmt&) const = default;
};
/// t := t + 1
struct TickStmt {
    bool operator==(const TickStmt&) const = default;
};
/// psi := |0>^(x)n
struct QInitStmt {
    int n_qubits;
    bool operator==(const QInitStmt&) const = default;
};

struct OpRef {
    enum class Kind { Hadamard, InvMean, Oracle, Named };
    Kind kind;
    std::string name;  // oracle or registered operator name
    bool operator==(const OpRef&) const = default;
};
/// psi := U psi
struct QApplyStmt {
    OpRef op;
    bool operator==(const QApplyStmt&) const = default;
};
/// measure psi r; `measurement` empty means the computational basis,
/// otherwise a measurement registered on the program.
struct QMeasureStmt {
    std::string result_var;
    std::string measurement;
    bool operator==(const QMeasureStmt&) const = default;
};
/// Unfolds a named definition (recursion).
struct CallStmt {
    std::string name;
    bool operator==(const CallStmt&) const = default;
};
/// A specification used in statement position. Boolean specifications run
/// as a choice among all satisfying poststates of the declared window (only
/// the support is meaningful); distribution specifications weight each
/// poststate by their value.
struct SpecStmt {
    SpecKind kind;
    Expr body;
    bool operator==(const SpecStmt&) const = default;
};

struct Stmt {
    using Node = std::variant<OkStmt, AssignStmt, SeqStmt, IfStmt, ProbIfStmt, TickStmt, QInitStmt, QApplyStmt,
                              QMeasureStmt, CallStmt, SpecStmt>;
    Node node;
    bool operator==(const Stmt&) const = default;
};

namespace st {
Stmt ok();
Stmt assign(std::string var, Expr value);
Stmt seq(Stmt a, Stmt b);
/// Right-nested sequence of one or more statements.
Stmt seq(std::vector<Stmt> parts);
Stmt if_(Expr cond, Stmt then_branch, Stmt else_branch);
Stmt prob_if(Expr p, Stmt then_branch, Stmt else_branch);
Stmt tick();
Stmt qinit(int n);
Stmt apply_h();
Stmt apply_invmean();
Stmt apply_oracle(std::string name);
Stmt apply_named(std::string name);
Stmt measure(std::string result_var, std::string measurement = {});
Stmt call(std::string name);
Stmt spec(SpecKind kind, Expr body);
}  // namespace st

// ---------------------------------------------------------------------------
// Programs

/// Classical variable. The range lo,..hi (hi exclusive) is the window over
/// which prestates are enumerated by the refinement checker; values computed
/// during evaluation are unbounded integers. Booleans have range 0,..2.
struct VarDecl {
    enum class Type { Int, Bool };
    std::string name;
    Type type = Type::Int;
    std::int64_t lo = 0;
    std::int64_t hi = 1;

    std::int64_t size() const { return hi - lo; }
    bool operator==(const VarDecl&) const = default;
};

struct QRegDecl {
    std::string name;
    int n_qubits;
    bool operator==(const QRegDecl&) const = default;
};

struct OracleDecl {
    std::string name;
    std::vector<std::uint8_t> table;
    bool operator==(const OracleDecl&) const = default;
};

struct Definition {
    std::string name;
    Stmt body;
    bool operator==(const Definition&) const = default;
};

struct Spec {
    SpecKind kind;
    Expr body;
    bool operator==(const Spec&) const = default;
};

using Measurement = std::variant<MeasurementCollection, Observable, MeasurementBasis>;

/// Name of the time variable in specifications.
inline constexpr const char* kTimeVar = "t";
/// Per-variable window size and product of all windows.
inline constexpr std::int64_t kMaxVarDomain = std::int64_t{1} << 16;
inline constexpr std::int64_t kMaxStateSpace = std::int64_t{1} << 20;

struct Program {
    std::vector<VarDecl> vars;
    std::optional<QRegDecl> qreg;
    std::vector<OracleDecl> oracles;
    std::vector<Definition> definitions;
    Stmt main = st::ok();
    std::optional<Spec> spec;

    // In-process extensions with no surface syntax of their own.
    std::map<std::string, Operator> operators;
    std::map<std::string, Measurement> measurements;

    const VarDecl* find_var(const std::string& name) const;
    const Definition* find_definition(const std::string& name) const;
    const OracleDecl* find_oracle(const std::string& name) const;

    /// Compares the syntactic parts (everything except the registered
    /// operators and measurements).
    friend bool operator==(const Program& a, const Program& b);
};

/// Checks declarations, references, oracle sizes and window budgets.
/// Throws ValidationError (or CapacityError for window budgets).
void validate(const Program& program);
/// Checks a statement against the program's declarations.
void validate_stmt(const Program& program, const Stmt& stmt);
/// Checks that a specification only mentions declared variables and t.
void validate_spec(const Program& program, const Spec& spec);

}  // namespace qpp
