#include <cmath>

#include <fmt/format.h>

#include "qpp/parser.hpp"

namespace qpp {

namespace {

// Binding strength, loosest first; a child printed where a stronger level is
// required gets parentheses.
enum Level : int {
    kImplies = 1,
    kOr,
    kAnd,
    kNot,
    kCompare,
    kAdd,
    kMul,
    kUnary,
    kPower,
    kPrimary,
};

struct OpInfo {
    const char* text;
    int level;
    int left;
    int right;
};

OpInfo info(BinaryOp op) {
    switch (op) {
        case BinaryOp::Implies:
            return {"=>", kImplies, kOr, kImplies};
        case BinaryOp::Or:
            return {"\\/", kOr, kOr, kAnd};
        case BinaryOp::And:
            return {"/\\", kAnd, kAnd, kNot};
        case BinaryOp::Eq:
            return {"=", kCompare, kAdd, kAdd};
        case BinaryOp::Ne:
            return {"#", kCompare, kAdd, kAdd};
        case BinaryOp::Lt:
            return {"<", kCompare, kAdd, kAdd};
        case BinaryOp::Le:
            return {"<=", kCompare, kAdd, kAdd};
        case BinaryOp::Gt:
            return {">", kCompare, kAdd, kAdd};
        case BinaryOp::Ge:
            return {">=", kCompare, kAdd, kAdd};
        case BinaryOp::Add:
            return {"+", kAdd, kAdd, kMul};
        case BinaryOp::Sub:
            return {"-", kAdd, kAdd, kMul};
        case BinaryOp::Mul:
            return {"*", kMul, kMul, kUnary};
        case BinaryOp::Div:
            return {"/", kMul, kMul, kUnary};
        case BinaryOp::IntDiv:
            return {"div", kMul, kMul, kUnary};
        case BinaryOp::Mod:
            return {"mod", kMul, kMul, kUnary};
        case BinaryOp::Pow:
            return {"^", kPower, kPrimary, kUnary};
    }
    return {"?", kPrimary, kPrimary, kPrimary};
}

std::string real_text(double v) {
    std::string s = fmt::format("{}", v);
    if (s.find_first_of(".en") == std::string::npos) s += ".0";
    return s;
}

bool is_number(const Expr& e) {
    return std::holds_alternative<IntLit>(e.node) || std::holds_alternative<RealLit>(e.node);
}

struct Printed {
    std::string text;
    int level;
};

Printed show(const Expr& e);

std::string at_least(const Expr& e, int level) {
    Printed p = show(e);
    return p.level < level ? "(" + p.text + ")" : std::move(p.text);
}

Printed show(const Expr& e) {
    return std::visit(
        [](const auto& n) -> Printed {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, IntLit>) {
                return {fmt::format("{}", n.value), n.value < 0 ? kUnary : kPrimary};
            } else if constexpr (std::is_same_v<N, RealLit>) {
                return {real_text(n.value), std::signbit(n.value) ? kUnary : kPrimary};
            } else if constexpr (std::is_same_v<N, BoolLit>) {
                return {n.value ? "true" : "false", kPrimary};
            } else if constexpr (std::is_same_v<N, InfLit>) {
                return {"inf", kPrimary};
            } else if constexpr (std::is_same_v<N, VarRef>) {
                return {n.primed ? n.name + "'" : n.name, kPrimary};
            } else if constexpr (std::is_same_v<N, UnaryExpr>) {
                if (n.op == UnaryOp::Not) return {"not " + at_least(*n.operand, kNot), kNot};
                std::string inner = at_least(*n.operand, kUnary);
                // keep "-(3)" distinct from the literal -3, and never emit "--"
                if (is_number(*n.operand) || inner.starts_with('-')) inner = "(" + inner + ")";
                return {"-" + inner, kUnary};
            } else if constexpr (std::is_same_v<N, BinaryExpr>) {
                const OpInfo op = info(n.op);
                return {fmt::format("{} {} {}", at_least(*n.lhs, op.left), op.text, at_least(*n.rhs, op.right)),
                        op.level};
            } else if constexpr (std::is_same_v<N, CallExpr>) {
                std::string args;
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i > 0) args += ", ";
                    args += show(n.args[i]).text;
                }
                return {fmt::format("{}({})", n.function, args), kPrimary};
            } else {
                return {fmt::format("rand({})", show(*n.bound).text), kPrimary};
            }
        },
        e.node);
}

std::string show_stmt(const Stmt& s, const std::string& reg);

std::string show_unit(const Stmt& s, const std::string& reg) {
    std::string text = show_stmt(s, reg);
    return std::holds_alternative<SeqStmt>(s.node) ? "(" + text + ")" : text;
}

std::string show_op(const OpRef& op) {
    switch (op.kind) {
        case OpRef::Kind::Hadamard:
            return "H";
        case OpRef::Kind::InvMean:
            return "invmean";
        case OpRef::Kind::Oracle:
            return "oracle " + op.name;
        case OpRef::Kind::Named:
            return op.name;
    }
    return op.name;
}

std::string show_stmt(const Stmt& s, const std::string& reg) {
    return std::visit(
        [&](const auto& n) -> std::string {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, OkStmt>) {
                return "ok";
            } else if constexpr (std::is_same_v<N, AssignStmt>) {
                return fmt::format("{} := {}", n.var, show(n.value).text);
            } else if constexpr (std::is_same_v<N, SeqStmt>) {
                return fmt::format("{}; {}", show_unit(*n.first, reg), show_stmt(*n.second, reg));
            } else if constexpr (std::is_same_v<N, IfStmt>) {
                return fmt::format("if {} then {} else {}", show(n.cond).text, show_unit(*n.then_branch, reg),
                                   show_unit(*n.else_branch, reg));
            } else if constexpr (std::is_same_v<N, ProbIfStmt>) {
                return fmt::format("if prob({}) then {} else {}", show(n.prob).text,
                                   show_unit(*n.then_branch, reg), show_unit(*n.else_branch, reg));
            } else if constexpr (std::is_same_v<N, TickStmt>) {
                return "tick";
            } else if constexpr (std::is_same_v<N, QInitStmt>) {
                return fmt::format("{} := zero({})", reg, n.n_qubits);
            } else if constexpr (std::is_same_v<N, QApplyStmt>) {
                return fmt::format("{} := apply({}, {})", reg, show_op(n.op), reg);
            } else if constexpr (std::is_same_v<N, QMeasureStmt>) {
                if (n.measurement.empty()) return fmt::format("measure {} {}", reg, n.result_var);
                return fmt::format("measure {} {} with {}", reg, n.result_var, n.measurement);
            } else if constexpr (std::is_same_v<N, CallStmt>) {
                return "call " + n.name;
            } else {
                const std::string body = show(n.body).text;
                return n.kind == SpecKind::Bool ? "{ " + body + " }" : "dist { " + body + " }";
            }
        },
        s.node);
}

}  // namespace

std::string print_expr(const Expr& expr) { return show(expr).text; }

std::string print_stmt(const Stmt& stmt, const std::string& qreg) { return show_stmt(stmt, qreg); }

std::string print_program(const Program& p) {
    const std::string reg = p.qreg ? p.qreg->name : "psi";
    std::string out;
    for (const auto& v : p.vars) {
        if (v.type == VarDecl::Type::Bool) {
            out += fmt::format("var {} : bool\n", v.name);
        } else {
            out += fmt::format("var {} : {},..{}\n", v.name, v.lo, v.hi);
        }
    }
    if (p.qreg) out += fmt::format("qreg {}[{}]\n", p.qreg->name, p.qreg->n_qubits);
    for (const auto& o : p.oracles) {
        std::string bits;
        for (const auto b : o.table) bits += static_cast<char>('0' + b);
        out += fmt::format("oracle {} = {}\n", o.name, bits);
    }
    for (const auto& d : p.definitions) out += fmt::format("def {} = {}\n", d.name, show_stmt(d.body, reg));
    out += fmt::format("main {}\n", show_stmt(p.main, reg));
    if (p.spec) {
        out += fmt::format("spec {}{{ {} }}\n", p.spec->kind == SpecKind::Dist ? "dist " : "", show(p.spec->body).text);
    }
    return out;
}

}  // namespace qpp
