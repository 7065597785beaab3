#include "qpp/program.hpp"

#include <set>

#include <fmt/format.h>

#include "qpp/errors.hpp"

namespace qpp {

namespace st {
Stmt ok() { return Stmt{OkStmt{}}; }
Stmt assign(std::string var, Expr value) { return Stmt{AssignStmt{std::move(var), std::move(value)}}; }
Stmt seq(Stmt a, Stmt b) { return Stmt{SeqStmt{std::move(a), std::move(b)}}; }
Stmt seq(std::vector<Stmt> parts) {
    if (parts.empty()) return ok();
    Stmt acc = std::move(parts.back());
    for (std::size_t i = parts.size() - 1; i-- > 0;) acc = seq(std::move(parts[i]), std::move(acc));
    return acc;
}
Stmt if_(Expr cond, Stmt t, Stmt e) { return Stmt{IfStmt{std::move(cond), std::move(t), std::move(e)}}; }
Stmt prob_if(Expr p, Stmt t, Stmt e) { return Stmt{ProbIfStmt{std::move(p), std::move(t), std::move(e)}}; }
Stmt tick() { return Stmt{TickStmt{}}; }
Stmt qinit(int n) { return Stmt{QInitStmt{n}}; }
Stmt apply_h() { return Stmt{QApplyStmt{{OpRef::Kind::Hadamard, {}}}}; }
Stmt apply_invmean() { return Stmt{QApplyStmt{{OpRef::Kind::InvMean, {}}}}; }
Stmt apply_oracle(std::string name) { return Stmt{QApplyStmt{{OpRef::Kind::Oracle, std::move(name)}}}; }
Stmt apply_named(std::string name) { return Stmt{QApplyStmt{{OpRef::Kind::Named, std::move(name)}}}; }
Stmt measure(std::string result_var, std::string measurement) {
    return Stmt{QMeasureStmt{std::move(result_var), std::move(measurement)}};
}
Stmt call(std::string name) { return Stmt{CallStmt{std::move(name)}}; }
Stmt spec(SpecKind kind, Expr body) { return Stmt{SpecStmt{kind, std::move(body)}}; }
}  // namespace st

const VarDecl* Program::find_var(const std::string& name) const {
    for (const auto& v : vars) {
        if (v.name == name) return &v;
    }
    return nullptr;
}

const Definition* Program::find_definition(const std::string& name) const {
    for (const auto& d : definitions) {
        if (d.name == name) return &d;
    }
    return nullptr;
}

const OracleDecl* Program::find_oracle(const std::string& name) const {
    for (const auto& o : oracles) {
        if (o.name == name) return &o;
    }
    return nullptr;
}

bool operator==(const Program& a, const Program& b) {
    return a.vars == b.vars && a.qreg == b.qreg && a.oracles == b.oracles && a.definitions == b.definitions &&
           a.main == b.main && a.spec == b.spec;
}

namespace {

int measurement_qubits(const Measurement& m) {
    return std::visit([](const auto& x) { return x.n_qubits(); }, m);
}

class Validator {
public:
    explicit Validator(const Program& p) : p_(p) {}

    void expr(const Expr& e, bool primes_allowed) {
        for (const auto& v : referenced_vars(e)) {
            if (v.primed && !primes_allowed) {
                throw ValidationError(fmt::format("primed variable {}' outside a specification", v.name));
            }
            if (v.name != kTimeVar && p_.find_var(v.name) == nullptr) {
                throw ValidationError(fmt::format("undeclared variable '{}'", v.name));
            }
        }
        check_functions(e);
    }

    void stmt(const Stmt& s) {
        std::visit([this](const auto& n) { this->node(n); }, s.node);
    }

private:
    void check_functions(const Expr& e) {
        std::visit(
            [this](const auto& n) {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, CallExpr>) {
                    if (!is_known_function(n.function)) {
                        throw ValidationError(fmt::format("unknown function '{}'", n.function));
                    }
                    for (const auto& a : n.args) check_functions(a);
                } else if constexpr (std::is_same_v<N, UnaryExpr>) {
                    check_functions(*n.operand);
                } else if constexpr (std::is_same_v<N, BinaryExpr>) {
                    check_functions(*n.lhs);
                    check_functions(*n.rhs);
                } else if constexpr (std::is_same_v<N, RandExpr>) {
                    if (contains_rand(*n.bound)) throw ValidationError("rand bound must not contain rand");
                    check_functions(*n.bound);
                }
            },
            e.node);
    }

    void no_rand(const Expr& e, const char* where) {
        if (contains_rand(e)) throw ValidationError(fmt::format("rand is not allowed in {}", where));
    }

    void require_qreg(const char* what) {
        if (!p_.qreg) throw ValidationError(fmt::format("{} without a declared quantum register", what));
    }

    void node(const OkStmt&) {}
    void node(const TickStmt&) {}
    void node(const AssignStmt& n) {
        if (n.var == kTimeVar) throw ValidationError("assign time with 'tick'");
        if (p_.find_var(n.var) == nullptr) throw ValidationError(fmt::format("assignment to undeclared variable '{}'", n.var));
        expr(n.value, false);
    }
    void node(const SeqStmt& n) {
        stmt(*n.first);
        stmt(*n.second);
    }
    void node(const IfStmt& n) {
        expr(n.cond, false);
        no_rand(n.cond, "a condition");
        stmt(*n.then_branch);
        stmt(*n.else_branch);
    }
    void node(const ProbIfStmt& n) {
        expr(n.prob, false);
        no_rand(n.prob, "a branch probability");
        stmt(*n.then_branch);
        stmt(*n.else_branch);
    }
    void node(const QInitStmt& n) {
        require_qreg("quantum initialization");
        if (n.n_qubits != p_.qreg->n_qubits) {
            throw ValidationError(fmt::format("zero({}) does not match register {}[{}]", n.n_qubits, p_.qreg->name,
                                              p_.qreg->n_qubits));
        }
    }
    void node(const QApplyStmt& n) {
        require_qreg("operator application");
        const int want = p_.qreg->n_qubits;
        switch (n.op.kind) {
            case OpRef::Kind::Hadamard:
            case OpRef::Kind::InvMean:
                return;
            case OpRef::Kind::Oracle: {
                const auto* o = p_.find_oracle(n.op.name);
                if (o == nullptr) throw ValidationError(fmt::format("undeclared oracle '{}'", n.op.name));
                if (o->table.size() != (std::size_t{1} << want)) {
                    throw ValidationError(fmt::format("oracle '{}' has {} entries, register needs {}", n.op.name,
                                                      o->table.size(), std::size_t{1} << want));
                }
                return;
            }
            case OpRef::Kind::Named: {
                const auto it = p_.operators.find(n.op.name);
                if (it == p_.operators.end()) throw ValidationError(fmt::format("unknown operator '{}'", n.op.name));
                if (it->second.n_qubits() != want) {
                    throw ValidationError(fmt::format("operator '{}' acts on {} qubits", n.op.name, it->second.n_qubits()));
                }
                return;
            }
        }
    }
    void node(const QMeasureStmt& n) {
        require_qreg("measurement");
        if (p_.find_var(n.result_var) == nullptr) {
            throw ValidationError(fmt::format("measurement result variable '{}' is undeclared", n.result_var));
        }
        if (!n.measurement.empty()) {
            const auto it = p_.measurements.find(n.measurement);
            if (it == p_.measurements.end()) throw ValidationError(fmt::format("unknown measurement '{}'", n.measurement));
            if (measurement_qubits(it->second) != p_.qreg->n_qubits) {
                throw ValidationError(fmt::format("measurement '{}' has the wrong size", n.measurement));
            }
        }
    }
    void node(const CallStmt& n) {
        if (p_.find_definition(n.name) == nullptr) throw ValidationError(fmt::format("call to undefined '{}'", n.name));
    }
    void node(const SpecStmt& n) {
        expr(n.body, true);
        no_rand(n.body, "a specification");
        for (const auto& v : referenced_vars(n.body)) {
            if (v.name == kTimeVar && v.primed) {
                throw ValidationError("a specification in statement position cannot constrain t'");
            }
        }
    }

    const Program& p_;
};

}  // namespace

void validate(const Program& program) {
    std::set<std::string> names;
    std::int64_t space = 1;
    for (const auto& v : program.vars) {
        if (v.name == kTimeVar) throw ValidationError("'t' is reserved for time");
        if (!names.insert(v.name).second) throw ValidationError(fmt::format("duplicate declaration of '{}'", v.name));
        if (v.hi <= v.lo) throw ValidationError(fmt::format("empty range for '{}'", v.name));
        if (v.type == VarDecl::Type::Bool && (v.lo != 0 || v.hi != 2)) {
            throw ValidationError(fmt::format("boolean '{}' must range over 0,..2", v.name));
        }
        if (v.size() > kMaxVarDomain) {
            throw CapacityError(fmt::format("range of '{}' has {} values (max {})", v.name, v.size(), kMaxVarDomain));
        }
        space *= v.size();
        if (space > kMaxStateSpace) {
            throw CapacityError(fmt::format("declared windows exceed {} classical states", kMaxStateSpace));
        }
    }
    if (program.qreg) {
        if (names.contains(program.qreg->name) || program.qreg->name == kTimeVar) {
            throw ValidationError(fmt::format("duplicate declaration of '{}'", program.qreg->name));
        }
        check_qubit_count(program.qreg->n_qubits);
    }
    std::set<std::string> oracle_names;
    for (const auto& o : program.oracles) {
        if (!oracle_names.insert(o.name).second) throw ValidationError(fmt::format("duplicate oracle '{}'", o.name));
        for (const auto b : o.table) {
            if (b > 1) throw ValidationError(fmt::format("oracle '{}' has a non-bit entry", o.name));
        }
    }
    std::set<std::string> def_names;
    for (const auto& d : program.definitions) {
        if (!def_names.insert(d.name).second) throw ValidationError(fmt::format("duplicate definition '{}'", d.name));
    }
    Validator check(program);
    for (const auto& d : program.definitions) check.stmt(d.body);
    check.stmt(program.main);
    if (program.spec) validate_spec(program, *program.spec);
}

void validate_stmt(const Program& program, const Stmt& stmt) {
    Validator check(program);
    check.stmt(stmt);
}

void validate_spec(const Program& program, const Spec& spec) {
    Validator check(program);
    check.expr(spec.body, true);
    if (contains_rand(spec.body)) throw ValidationError("rand is not allowed in a specification");
}

}  // namespace qpp
