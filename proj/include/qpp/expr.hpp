#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qpp/box.hpp"

namespace qpp {

// ---------------------------------------------------------------------------
// Values

/// Result of evaluating an expression: integer, real, boolean or the time
/// value infinity. Booleans act as 0/1 in arithmetic.
class Value {
public:
    enum class Kind { Int, Real, Bool, Inf };

    static Value integer(std::int64_t v) { return Value(Kind::Int, v, 0.0); }
    static Value real(double v) { return Value(Kind::Real, 0, v); }
    static Value boolean(bool v) { return Value(Kind::Bool, v ? 1 : 0, 0.0); }
    static Value infinity() { return Value(Kind::Inf, 0, 0.0); }

    Kind kind() const noexcept { return kind_; }
    bool is_inf() const noexcept { return kind_ == Kind::Inf; }

    /// Bool, or Int 0/1; DomainError otherwise.
    bool as_bool() const;
    /// Int, Bool, or an integral Real; DomainError otherwise.
    std::int64_t as_int() const;
    /// Numeric view; DomainError for infinity.
    double as_real() const;

    bool operator==(const Value&) const = default;

private:
    Value(Kind k, std::int64_t i, double r) : kind_(k), int_(i), real_(r) {}
    Kind kind_;
    std::int64_t int_;
    double real_;
};

// ---------------------------------------------------------------------------
// Expressions over unprimed (prestate) and primed (poststate) variables

struct Expr;

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, IntDiv, Mod, Pow, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Implies };

struct IntLit {
    std::int64_t value;
    bool operator==(const IntLit&) const = default;
};
struct RealLit {
    double value;
    bool operator==(const RealLit&) const = default;
};
struct BoolLit {
    bool value;
    bool operator==(const BoolLit&) const = default;
};
struct InfLit {
    bool operator==(const InfLit&) const = default;
};
struct VarRef {
    std::string name;
    bool primed = false;
    bool operator==(const VarRef&) const = default;
};
struct UnaryExpr {
    UnaryOp op;
    Box<Expr> operand;
    bool operator==(const UnaryExpr&) const = default;
};
struct BinaryExpr {
    BinaryOp op;
    Box<Expr> lhs;
    Box<Expr> rhs;
    bool operator==(const BinaryExpr&) const = default;
};
/// Built-in function application: sin cos arcsin arccos sqrt exp log abs
/// floor ceil min max binom.
struct CallExpr {
    std::string function;
    std::vector<Expr> args;
    bool operator==(const CallExpr&) const = default;
};
/// rand n: uniform natural in 0,..n. Each occurrence is a fresh random
/// variable; evaluation branches over all of its values.
struct RandExpr {
    Box<Expr> bound;
    bool operator==(const RandExpr&) const = default;
};

struct Expr {
    using Node = std::variant<IntLit, RealLit, BoolLit, InfLit, VarRef, UnaryExpr, BinaryExpr, CallExpr, RandExpr>;
    Node node;
    bool operator==(const Expr&) const = default;
};

// Builders
namespace ex {
Expr lit(std::int64_t v);
Expr real(double v);
Expr boolean(bool v);
Expr inf();
Expr var(std::string name);
Expr primed(std::string name);
Expr neg(Expr e);
Expr lnot(Expr e);
Expr bin(BinaryOp op, Expr a, Expr b);
Expr call(std::string fn, std::vector<Expr> args);
Expr rand(Expr bound);
}  // namespace ex

bool is_known_function(const std::string& name);

/// Variable lookup used during evaluation. The time variable is `t`.
using Lookup = std::function<Value(const VarRef&)>;

/// Evaluates a rand-free expression.
Value evaluate(const Expr& e, const Lookup& lookup);

/// Evaluates with the given values for the rand occurrences, in preorder.
Value evaluate(const Expr& e, const Lookup& lookup, std::span<const std::int64_t> rand_values);

/// All (value, probability) outcomes, branching over every rand occurrence.
/// Outcomes with equal values are not merged.
std::vector<std::pair<Value, double>> evaluate_branching(const Expr& e, const Lookup& lookup);

bool contains_rand(const Expr& e);
/// Variables referenced, in order of first occurrence.
std::vector<VarRef> referenced_vars(const Expr& e);
/// Replace every unprimed occurrence of `name` with `replacement`.
Expr substitute(const Expr& e, const std::string& name, const Expr& replacement);

}  // namespace qpp
