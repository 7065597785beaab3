#include "qpp/eval.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "qpp/errors.hpp"

namespace qpp {

Schema schema_of(const Program& program) {
    Schema s;
    for (const auto& v : program.vars) {
        s.vars.push_back(v.name);
        s.boolean.push_back(v.type == VarDecl::Type::Bool);
    }
    if (program.qreg) s.qreg = program.qreg->name;
    return s;
}

ProgramState make_state(std::vector<std::int64_t> values, std::uint64_t t) {
    return ProgramState{std::move(values), std::nullopt, Time::finite(t)};
}

Interpreter::Interpreter(Program program, EvalOptions options)
    : program_(std::make_shared<const Program>(std::move(program))), options_(options), schema_(schema_of(*program_)) {
    validate(*program_);
    if (options_.fuel == 0) throw DomainError("fuel must be positive");
    if (program_->qreg) {
        const int n = program_->qreg->n_qubits;
        hadamard_ = Operator::hadamard_all(n);
        invmean_ = Operator::inversion_about_mean(n);
        for (const auto& o : program_->oracles) {
            if (o.table.size() == (std::size_t{1} << n)) oracles_.emplace(o.name, Operator::phase_oracle(o.table));
        }
    }
}

const Operator& Interpreter::resolve(const OpRef& op) const {
    switch (op.kind) {
        case OpRef::Kind::Hadamard:
            return *hadamard_;
        case OpRef::Kind::InvMean:
            return *invmean_;
        case OpRef::Kind::Oracle:
            return oracles_.at(op.name);
        case OpRef::Kind::Named:
            return program_->operators.at(op.name);
    }
    throw DomainError("unknown operator reference");
}

namespace {

Value time_value(const Time& t) {
    return t.is_infinite() ? Value::infinity() : Value::integer(static_cast<std::int64_t>(t.ticks()));
}

Value var_value(const Schema& schema, const ProgramState& s, const std::string& name) {
    if (name == kTimeVar) return time_value(s.time);
    const int i = schema.index_of(name);
    if (i < 0) throw ValidationError(fmt::format("undeclared variable '{}'", name));
    const auto v = s.values[static_cast<std::size_t>(i)];
    return schema.is_bool(static_cast<std::size_t>(i)) ? Value::boolean(v != 0) : Value::integer(v);
}

std::int64_t store_value(const Schema& schema, std::size_t index, const Value& v) {
    if (schema.is_bool(index)) return v.as_bool() ? 1 : 0;
    if (v.kind() == Value::Kind::Bool) throw DomainError(fmt::format("boolean assigned to integer '{}'", schema.vars[index]));
    return v.as_int();
}

struct Frame {
    const Stmt* stmt;
    Distribution input;
    std::uint64_t depth;
    int phase = 0;
    Distribution acc;
    Distribution pending;
    Distribution bypass;  // time = inf: no further statements run
};

class Run {
public:
    Run(const Interpreter& interp, EvalResult& result) : interp_(interp), result_(result), schema_(interp.schema()) {}

    Distribution execute(const Stmt& root, Distribution initial) {
        push(root, std::move(initial), 0);
        while (!stack_.empty()) step(stack_.size() - 1);
        return std::move(ret_);
    }

private:
    void push(const Stmt& stmt, Distribution input, std::uint64_t depth) {
        Frame f{&stmt, Distribution(schema_), depth, 0, Distribution(schema_), Distribution(schema_), Distribution(schema_)};
        bool finite = true;
        input.for_each([&](const ProgramState& s, double) { finite = finite && !s.time.is_infinite(); });
        if (finite) {
            f.input = std::move(input);
        } else {
            input.for_each([&](const ProgramState& s, double p) {
                (s.time.is_infinite() ? f.bypass : f.input).add(s, p);
            });
        }
        stack_.push_back(std::move(f));
    }

    void finish(std::size_t idx, Distribution out) {
        if (!stack_[idx].bypass.empty()) out.add_all(stack_[idx].bypass);
        ret_ = std::move(out);
        stack_.pop_back();
    }

    template <class F>
    Distribution map_entries(const Distribution& in, F&& f) {
        Distribution out(schema_);
        in.for_each([&](const ProgramState& s, double p) { f(s, p, out); });
        return out;
    }

    Lookup lookup_for(const ProgramState& s) const {
        return [this, &s](const VarRef& v) {
            if (v.primed) throw ValidationError(fmt::format("primed variable {}' in a program", v.name));
            return var_value(schema_, s, v.name);
        };
    }

    void step(std::size_t idx) {
        Frame& f = stack_[idx];
        if (f.phase == 0 && f.input.empty()) {
            finish(idx, Distribution(schema_));
            return;
        }
        const auto& node = f.stmt->node;
        if (const auto* seq = std::get_if<SeqStmt>(&node)) {
            if (f.phase == 0) {
                f.phase = 1;
                Distribution in = std::move(f.input);
                const auto depth = f.depth;
                push(*seq->first, std::move(in), depth);
            } else if (f.phase == 1) {
                f.phase = 2;
                const auto depth = f.depth;
                push(*seq->second, std::move(ret_), depth);
            } else {
                finish(idx, std::move(ret_));
            }
            return;
        }
        if (const auto* cond = std::get_if<IfStmt>(&node)) {
            branch(idx, *cond->then_branch, *cond->else_branch, [&](const ProgramState& s) {
                return evaluate(cond->cond, lookup_for(s)).as_bool() ? 1.0 : 0.0;
            });
            return;
        }
        if (const auto* pif = std::get_if<ProbIfStmt>(&node)) {
            branch(idx, *pif->then_branch, *pif->else_branch, [&](const ProgramState& s) {
                const double p = evaluate(pif->prob, lookup_for(s)).as_real();
                if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("branch probability {} outside [0,1]", p));
                return p;
            });
            return;
        }
        if (const auto* call = std::get_if<CallStmt>(&node)) {
            if (f.phase == 0) {
                result_.pruned_mass += f.input.prune(kEvalPruneEps);
                if (f.depth >= interp_.options().fuel) {
                    Distribution out = map_entries(f.input, [&](const ProgramState& s, double p, Distribution& o) {
                        ProgramState n = s;
                        n.time = Time::infinite();
                        result_.infinite_mass += p;
                        o.add(std::move(n), p);
                    });
                    finish(idx, std::move(out));
                    return;
                }
                f.phase = 1;
                const auto* def = interp_.program().find_definition(call->name);
                Distribution in = std::move(f.input);
                const auto depth = f.depth + 1;
                push(def->body, std::move(in), depth);
            } else {
                finish(idx, std::move(ret_));
            }
            return;
        }
        finish(idx, atomic(node, f.input));
    }

    // Shared shape of boolean and probabilistic if: the weight is the
    // probability of taking the then-branch.
    template <class W>
    void branch(std::size_t idx, const Stmt& then_branch, const Stmt& else_branch, W&& weight) {
        Frame& f = stack_[idx];
        if (f.phase == 0) {
            Distribution then_in(schema_);
            f.input.for_each([&](const ProgramState& s, double p) {
                const double w = weight(s);
                then_in.add(s, p * w);
                f.pending.add(s, p * (1.0 - w));
            });
            f.phase = 1;
            const auto depth = f.depth;
            push(then_branch, std::move(then_in), depth);
        } else if (f.phase == 1) {
            f.acc = std::move(ret_);
            f.phase = 2;
            Distribution in = std::move(f.pending);
            const auto depth = f.depth;
            push(else_branch, std::move(in), depth);
        } else {
            // fold the smaller result into the larger one
            Distribution out = std::move(f.acc);
            if (out.size() < ret_.size()) std::swap(out, ret_);
            out.add_all(ret_);
            finish(idx, std::move(out));
        }
    }

    Distribution atomic(const Stmt::Node& node, const Distribution& in) {
        if (std::holds_alternative<OkStmt>(node)) return in;
        if (std::holds_alternative<TickStmt>(node)) {
            return map_entries(in, [](const ProgramState& s, double p, Distribution& out) {
                ProgramState n = s;
                n.time = n.time.plus(1);
                out.add(std::move(n), p);
            });
        }
        if (const auto* a = std::get_if<AssignStmt>(&node)) {
            const auto index = static_cast<std::size_t>(schema_.index_of(a->var));
            return map_entries(in, [&](const ProgramState& s, double p, Distribution& out) {
                for (const auto& [value, w] : evaluate_branching(a->value, lookup_for(s))) {
                    ProgramState n = s;
                    n.values[index] = store_value(schema_, index, value);
                    out.add(std::move(n), p * w);
                }
            });
        }
        if (const auto* q = std::get_if<QInitStmt>(&node)) {
            return map_entries(in, [&](const ProgramState& s, double p, Distribution& out) {
                ProgramState n = s;
                n.quantum = QuantumState::zero(q->n_qubits);
                out.add(std::move(n), p);
            });
        }
        if (const auto* q = std::get_if<QApplyStmt>(&node)) {
            const Operator& op = interp_.resolve(q->op);
            return map_entries(in, [&](const ProgramState& s, double p, Distribution& out) {
                ProgramState n = s;
                n.quantum = apply(op, require_quantum(s));
                out.add(std::move(n), p);
            });
        }
        if (const auto* m = std::get_if<QMeasureStmt>(&node)) {
            const auto index = static_cast<std::size_t>(schema_.index_of(m->result_var));
            return map_entries(in, [&](const ProgramState& s, double p, Distribution& out) {
                for (auto& o : measure(m->measurement, require_quantum(s)).entries) {
                    ProgramState n = s;
                    n.values[index] = static_cast<std::int64_t>(o.outcome);
                    n.quantum = std::move(o.post_state);
                    out.add(std::move(n), p * o.probability);
                }
            });
        }
        if (const auto* sp = std::get_if<SpecStmt>(&node)) return run_spec(*sp, in);
        throw DomainError("statement kind cannot be evaluated here");
    }

    const QuantumState& require_quantum(const ProgramState& s) const {
        if (!s.quantum) throw DomainError("quantum register used before initialization");
        return *s.quantum;
    }

    MeasurementOutcomeDist measure(const std::string& name, const QuantumState& psi) const {
        if (name.empty()) return measure_computational(psi);
        return std::visit(
            [&](const auto& m) {
                using M = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<M, MeasurementCollection>) {
                    return measure_general(m, psi);
                } else if constexpr (std::is_same_v<M, Observable>) {
                    return measure_observable(m, psi);
                } else {
                    return measure_in_basis(m, psi);
                }
            },
            interp_.program().measurements.at(name));
    }

    // Specification as a statement: enumerate the declared window.
    Distribution run_spec(const SpecStmt& sp, const Distribution& in) {
        const auto& vars = interp_.program().vars;
        if (sp.kind == SpecKind::Bool) result_.nondeterministic = true;
        return map_entries(in, [&](const ProgramState& pre, double p, Distribution& out) {
            ProgramState post = pre;
            for (std::size_t i = 0; i < vars.size(); ++i) post.values[i] = vars[i].lo;
            const Lookup lookup = [&](const VarRef& v) {
                return var_value(schema_, v.primed ? post : pre, v.name);
            };
            std::vector<std::pair<ProgramState, double>> hits;
            double total = 0.0;
            while (true) {
                const Value v = evaluate(sp.body, lookup);
                const double w = sp.kind == SpecKind::Bool ? (v.as_bool() ? 1.0 : 0.0) : v.as_real();
                if (w < 0.0 || w > 1.0 + kMassTol) throw DomainError(fmt::format("specification value {} is not a probability", w));
                if (w > 0.0) {
                    hits.emplace_back(post, w);
                    total += w;
                }
                std::size_t i = vars.size();
                while (i-- > 0) {
                    if (++post.values[i] < vars[i].hi) break;
                    post.values[i] = vars[i].lo;
                }
                if (i == static_cast<std::size_t>(-1)) break;
            }
            if (hits.empty()) throw DomainError("specification has no poststate in the declared window");
            if (sp.kind == SpecKind::Dist && std::abs(total - 1.0) > kMassTol) {
                throw DomainError(fmt::format("specification sums to {} over the declared window", total));
            }
            const double scale = sp.kind == SpecKind::Bool ? 1.0 / total : 1.0;
            for (auto& [s, w] : hits) out.add(std::move(s), p * w * scale);
        });
    }

    const Interpreter& interp_;
    EvalResult& result_;
    const Schema& schema_;
    std::vector<Frame> stack_;
    Distribution ret_;
};

}  // namespace

EvalResult Interpreter::run(const Stmt& stmt, const Distribution& initial) const {
    if (!(initial.schema() == schema_)) throw DomainError("initial distribution does not match the program's variables");
    if (&stmt != &program_->main) validate_stmt(*program_, stmt);
    EvalResult result;
    Run run(*this, result);
    result.dist = run.execute(stmt, initial);
    result.pruned_mass += result.dist.prune(kProbEps);
    return result;
}

EvalResult eval(const Program& program, const Stmt& stmt, const Distribution& initial, const EvalOptions& options) {
    return Interpreter(program, options).run(stmt, initial);
}

EvalResult eval(const Program& program, const Distribution& initial, const EvalOptions& options) {
    return Interpreter(program, options).run(initial);
}

Transformer transformer(const Program& program, const Stmt& stmt, const EvalOptions& options) {
    auto interp = std::make_shared<const Interpreter>(program, options);
    auto body = std::make_shared<const Stmt>(stmt);
    return [interp, body](const Distribution& d) { return interp->run(*body, d).dist; };
}

Transformer seq_compose(Transformer r, Transformer s) {
    return [r = std::move(r), s = std::move(s)](const Distribution& d) { return s(r(d)); };
}

Transformer prob_if(double p, Transformer r, Transformer s) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("probability {} outside [0,1]", p));
    return [p, r = std::move(r), s = std::move(s)](const Distribution& d) {
        Distribution out(d.schema());
        if (p > 0.0) out.add_all(r(d), p);
        if (p < 1.0) out.add_all(s(d), 1.0 - p);
        return out;
    };
}

}  // namespace qpp
