#include "qpp/expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "qpp/errors.hpp"

namespace qpp {

bool Value::as_bool() const {
    if (kind_ == Kind::Bool) return int_ != 0;
    if (kind_ == Kind::Int && (int_ == 0 || int_ == 1)) return int_ == 1;
    throw DomainError("expected a boolean value");
}

std::int64_t Value::as_int() const {
    switch (kind_) {
        case Kind::Int:
        case Kind::Bool:
            return int_;
        case Kind::Real:
            if (std::isfinite(real_) && std::floor(real_) == real_ && std::abs(real_) < 9.0e15) {
                return static_cast<std::int64_t>(real_);
            }
            throw DomainError(fmt::format("expected an integer, got {}", real_));
        case Kind::Inf:
            break;
    }
    throw DomainError("expected an integer, got inf");
}

double Value::as_real() const {
    switch (kind_) {
        case Kind::Int:
        case Kind::Bool:
            return static_cast<double>(int_);
        case Kind::Real:
            return real_;
        case Kind::Inf:
            break;
    }
    throw DomainError("inf used where a finite number is required");
}

namespace ex {
Expr lit(std::int64_t v) { return Expr{IntLit{v}}; }
Expr real(double v) { return Expr{RealLit{v}}; }
Expr boolean(bool v) { return Expr{BoolLit{v}}; }
Expr inf() { return Expr{InfLit{}}; }
Expr var(std::string name) { return Expr{VarRef{std::move(name), false}}; }
Expr primed(std::string name) { return Expr{VarRef{std::move(name), true}}; }
Expr neg(Expr e) { return Expr{UnaryExpr{UnaryOp::Neg, std::move(e)}}; }
Expr lnot(Expr e) { return Expr{UnaryExpr{UnaryOp::Not, std::move(e)}}; }
Expr bin(BinaryOp op, Expr a, Expr b) { return Expr{BinaryExpr{op, std::move(a), std::move(b)}}; }
Expr call(std::string fn, std::vector<Expr> args) { return Expr{CallExpr{std::move(fn), std::move(args)}}; }
Expr rand(Expr bound) { return Expr{RandExpr{std::move(bound)}}; }
}  // namespace ex

namespace {

const std::set<std::string, std::less<>>& known_functions() {
    static const std::set<std::string, std::less<>> fns = {"sin",   "cos",  "arcsin", "arccos", "sqrt", "exp", "log",
                                                           "abs",   "floor", "ceil",  "min",    "max",  "binom"};
    return fns;
}

bool both_int(const Value& a, const Value& b) {
    auto intlike = [](const Value& v) { return v.kind() == Value::Kind::Int || v.kind() == Value::Kind::Bool; };
    return intlike(a) && intlike(b);
}

void check_overflow(bool overflow) {
    if (overflow) throw DomainError("integer overflow");
}

Value add(const Value& a, const Value& b) {
    if (a.is_inf() || b.is_inf()) return Value::infinity();
    if (both_int(a, b)) {
        std::int64_t r = 0;
        check_overflow(__builtin_add_overflow(a.as_int(), b.as_int(), &r));
        return Value::integer(r);
    }
    return Value::real(a.as_real() + b.as_real());
}

Value sub(const Value& a, const Value& b) {
    if (b.is_inf()) throw DomainError("subtracting inf");
    if (a.is_inf()) return Value::infinity();
    if (both_int(a, b)) {
        std::int64_t r = 0;
        check_overflow(__builtin_sub_overflow(a.as_int(), b.as_int(), &r));
        return Value::integer(r);
    }
    return Value::real(a.as_real() - b.as_real());
}

Value mul(const Value& a, const Value& b) {
    if (a.is_inf() || b.is_inf()) {
        const Value& other = a.is_inf() ? b : a;
        if (other.is_inf() || other.as_real() > 0) return Value::infinity();
        throw DomainError("inf multiplied by a non-positive number");
    }
    if (both_int(a, b)) {
        std::int64_t r = 0;
        check_overflow(__builtin_mul_overflow(a.as_int(), b.as_int(), &r));
        return Value::integer(r);
    }
    return Value::real(a.as_real() * b.as_real());
}

// Floor division and modulo with a non-negative remainder for positive divisors.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    if (b == 0) throw DomainError("division by zero");
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

int compare(const Value& a, const Value& b) {
    if (a.is_inf() || b.is_inf()) {
        if (a.is_inf() && b.is_inf()) return 0;
        return a.is_inf() ? 1 : -1;
    }
    if (both_int(a, b)) {
        const auto x = a.as_int();
        const auto y = b.as_int();
        return x < y ? -1 : (x > y ? 1 : 0);
    }
    const double x = a.as_real();
    const double y = b.as_real();
    return x < y ? -1 : (x > y ? 1 : 0);
}

double binom(double n, double k) {
    if (n != std::floor(n) || k != std::floor(k)) throw DomainError("binom needs integer arguments");
    if (k < 0 || n < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (double i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r < 9.0e15 ? std::round(r) : r;
}

Value call_function(const std::string& fn, const std::vector<Value>& args) {
    auto arity = [&](std::size_t n) {
        if (args.size() != n) throw DomainError(fmt::format("{} expects {} argument(s)", fn, n));
    };
    auto real_fn = [&](double (*f)(double)) {
        arity(1);
        const double r = f(args[0].as_real());
        if (!std::isfinite(r)) throw DomainError(fmt::format("{} outside its domain", fn));
        return Value::real(r);
    };
    if (fn == "sin") return real_fn(std::sin);
    if (fn == "cos") return real_fn(std::cos);
    if (fn == "arcsin") return real_fn(std::asin);
    if (fn == "arccos") return real_fn(std::acos);
    if (fn == "sqrt") return real_fn(std::sqrt);
    if (fn == "exp") return real_fn(std::exp);
    if (fn == "log") return real_fn(std::log);
    if (fn == "abs") {
        arity(1);
        if (args[0].is_inf()) return args[0];
        if (both_int(args[0], args[0])) {
            const auto v = args[0].as_int();
            if (v == std::numeric_limits<std::int64_t>::min()) throw DomainError("integer overflow");
            return Value::integer(v < 0 ? -v : v);
        }
        return Value::real(std::abs(args[0].as_real()));
    }
    if (fn == "floor" || fn == "ceil") {
        arity(1);
        if (both_int(args[0], args[0])) return Value::integer(args[0].as_int());
        const double r = fn == "floor" ? std::floor(args[0].as_real()) : std::ceil(args[0].as_real());
        return Value::integer(Value::real(r).as_int());
    }
    if (fn == "min" || fn == "max") {
        arity(2);
        const int c = compare(args[0], args[1]);
        return (fn == "min") == (c <= 0) ? args[0] : args[1];
    }
    if (fn == "binom") {
        arity(2);
        return Value::real(binom(args[0].as_real(), args[1].as_real()));
    }
    throw DomainError(fmt::format("unknown function '{}'", fn));
}

class Evaluator {
public:
    Evaluator(const Lookup& lookup, std::span<const std::int64_t> rands) : lookup_(lookup), rands_(rands) {}

    Value eval(const Expr& e) {
        return std::visit([this](const auto& n) { return this->node(n); }, e.node);
    }

private:
    Value node(const IntLit& n) { return Value::integer(n.value); }
    Value node(const RealLit& n) { return Value::real(n.value); }
    Value node(const BoolLit& n) { return Value::boolean(n.value); }
    Value node(const InfLit&) { return Value::infinity(); }
    Value node(const VarRef& n) { return lookup_(n); }
    Value node(const UnaryExpr& n) {
        const Value v = eval(*n.operand);
        if (n.op == UnaryOp::Not) return Value::boolean(!v.as_bool());
        if (v.is_inf()) throw DomainError("negating inf");
        if (v.kind() == Value::Kind::Real) return Value::real(-v.as_real());
        return sub(Value::integer(0), v);
    }
    Value node(const CallExpr& n) {
        std::vector<Value> args;
        args.reserve(n.args.size());
        for (const auto& a : n.args) args.push_back(eval(a));
        return call_function(n.function, args);
    }
    Value node(const RandExpr& n) {
        // The bound is rand-free, so evaluating it does not consume choices.
        const auto bound = eval(*n.bound).as_int();
        if (next_ >= rands_.size()) throw DomainError("rand evaluated without a branch choice");
        const auto v = rands_[next_++];
        if (v < 0 || v >= bound) throw DomainError("rand choice outside its range");
        return Value::integer(v);
    }
    Value node(const BinaryExpr& n) {
        const Value a = eval(*n.lhs);
        const Value b = eval(*n.rhs);
        switch (n.op) {
            case BinaryOp::Add:
                return add(a, b);
            case BinaryOp::Sub:
                return sub(a, b);
            case BinaryOp::Mul:
                return mul(a, b);
            case BinaryOp::Div: {
                if (a.is_inf() || b.is_inf()) throw DomainError("division involving inf");
                const double d = b.as_real();
                if (d == 0.0) throw DomainError("division by zero");
                return Value::real(a.as_real() / d);
            }
            case BinaryOp::IntDiv:
                return Value::integer(floor_div(a.as_int(), b.as_int()));
            case BinaryOp::Mod:
                return Value::integer(floor_mod(a.as_int(), b.as_int()));
            case BinaryOp::Pow: {
                const double r = std::pow(a.as_real(), b.as_real());
                if (!std::isfinite(r)) throw DomainError("power outside its domain");
                return Value::real(r);
            }
            case BinaryOp::Eq:
                if (a.kind() == Value::Kind::Bool && b.kind() == Value::Kind::Bool) return Value::boolean(a == b);
                return Value::boolean(compare(a, b) == 0);
            case BinaryOp::Ne:
                if (a.kind() == Value::Kind::Bool && b.kind() == Value::Kind::Bool) return Value::boolean(!(a == b));
                return Value::boolean(compare(a, b) != 0);
            case BinaryOp::Lt:
                return Value::boolean(compare(a, b) < 0);
            case BinaryOp::Le:
                return Value::boolean(compare(a, b) <= 0);
            case BinaryOp::Gt:
                return Value::boolean(compare(a, b) > 0);
            case BinaryOp::Ge:
                return Value::boolean(compare(a, b) >= 0);
            case BinaryOp::And:
                return Value::boolean(a.as_bool() && b.as_bool());
            case BinaryOp::Or:
                return Value::boolean(a.as_bool() || b.as_bool());
            case BinaryOp::Implies:
                return Value::boolean(!a.as_bool() || b.as_bool());
        }
        throw DomainError("unknown operator");
    }

    const Lookup& lookup_;
    std::span<const std::int64_t> rands_;
    std::size_t next_ = 0;
};

template <class F>
void visit_preorder(const Expr& e, F&& f) {
    f(e);
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, UnaryExpr>) {
                visit_preorder(*n.operand, f);
            } else if constexpr (std::is_same_v<N, BinaryExpr>) {
                visit_preorder(*n.lhs, f);
                visit_preorder(*n.rhs, f);
            } else if constexpr (std::is_same_v<N, CallExpr>) {
                for (const auto& a : n.args) visit_preorder(a, f);
            } else if constexpr (std::is_same_v<N, RandExpr>) {
                visit_preorder(*n.bound, f);
            }
        },
        e.node);
}

}  // namespace

bool is_known_function(const std::string& name) { return known_functions().contains(name); }

Value evaluate(const Expr& e, const Lookup& lookup) { return Evaluator(lookup, {}).eval(e); }

Value evaluate(const Expr& e, const Lookup& lookup, std::span<const std::int64_t> rand_values) {
    return Evaluator(lookup, rand_values).eval(e);
}

std::vector<std::pair<Value, double>> evaluate_branching(const Expr& e, const Lookup& lookup) {
    std::vector<std::int64_t> bounds;
    visit_preorder(e, [&](const Expr& sub) {
        if (const auto* r = std::get_if<RandExpr>(&sub.node)) {
            if (contains_rand(*r->bound)) throw DomainError("rand bound must not contain rand");
            const auto n = evaluate(*r->bound, lookup).as_int();
            if (n < 1) throw DomainError(fmt::format("rand {} has an empty range", n));
            bounds.push_back(n);
        }
    });
    std::vector<std::pair<Value, double>> out;
    if (bounds.empty()) {
        out.emplace_back(evaluate(e, lookup), 1.0);
        return out;
    }
    double weight = 1.0;
    std::size_t combos = 1;
    for (const auto b : bounds) {
        weight /= static_cast<double>(b);
        combos *= static_cast<std::size_t>(b);
        if (combos > (std::size_t{1} << 20)) throw CapacityError("too many rand branches in one expression");
    }
    std::vector<std::int64_t> choice(bounds.size(), 0);
    out.reserve(combos);
    for (std::size_t c = 0; c < combos; ++c) {
        out.emplace_back(evaluate(e, lookup, choice), weight);
        for (std::size_t i = choice.size(); i-- > 0;) {
            if (++choice[i] < bounds[i]) break;
            choice[i] = 0;
        }
    }
    return out;
}

bool contains_rand(const Expr& e) {
    bool found = false;
    visit_preorder(e, [&](const Expr& sub) { found = found || std::holds_alternative<RandExpr>(sub.node); });
    return found;
}

std::vector<VarRef> referenced_vars(const Expr& e) {
    std::vector<VarRef> out;
    visit_preorder(e, [&](const Expr& sub) {
        if (const auto* v = std::get_if<VarRef>(&sub.node)) {
            if (std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
        }
    });
    return out;
}

Expr substitute(const Expr& e, const std::string& name, const Expr& replacement) {
    return std::visit(
        [&](const auto& n) -> Expr {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, VarRef>) {
                if (!n.primed && n.name == name) return replacement;
                return e;
            } else if constexpr (std::is_same_v<N, UnaryExpr>) {
                return Expr{UnaryExpr{n.op, substitute(*n.operand, name, replacement)}};
            } else if constexpr (std::is_same_v<N, BinaryExpr>) {
                return Expr{BinaryExpr{n.op, substitute(*n.lhs, name, replacement), substitute(*n.rhs, name, replacement)}};
            } else if constexpr (std::is_same_v<N, CallExpr>) {
                CallExpr c{n.function, {}};
                for (const auto& a : n.args) c.args.push_back(substitute(a, name, replacement));
                return Expr{std::move(c)};
            } else if constexpr (std::is_same_v<N, RandExpr>) {
                return Expr{RandExpr{substitute(*n.bound, name, replacement)}};
            } else {
                return e;
            }
        },
        e.node);
}

}  // namespace qpp
