#include "qpp/refine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <fmt/format.h>

#include "qpp/errors.hpp"

namespace qpp {

std::string describe_state(const Schema& schema, const ProgramState& state, bool primed) {
    const char* mark = primed ? "'" : "";
    std::string out;
    for (std::size_t i = 0; i < schema.vars.size() && i < state.values.size(); ++i) {
        if (!out.empty()) out += ' ';
        if (schema.is_bool(i)) {
            out += fmt::format("{}{}={}", schema.vars[i], mark, state.values[i] != 0 ? "true" : "false");
        } else {
            out += fmt::format("{}{}={}", schema.vars[i], mark, state.values[i]);
        }
    }
    if (schema.has_time) {
        if (!out.empty()) out += ' ';
        if (state.time.is_infinite()) {
            out += fmt::format("t{}=inf", mark);
        } else {
            out += fmt::format("t{}={}", mark, state.time.ticks());
        }
    }
    return out;
}

std::string describe_window(const Program& program) {
    std::string out;
    for (const auto& v : program.vars) {
        if (!out.empty()) out += "; ";
        if (v.type == VarDecl::Type::Bool) {
            out += fmt::format("{}: bool", v.name);
        } else {
            out += fmt::format("{}: {},..{}", v.name, v.lo, v.hi);
        }
    }
    return out.empty() ? "(no classical variables)" : out;
}

namespace {

// Every call in a definition must follow a tick within the same flattened
// sequence.
void check_ticked(const Stmt& stmt) {
    std::vector<const Stmt*> seq;
    std::vector<const Stmt*> todo{&stmt};
    auto flatten = [](const Stmt& s, std::vector<const Stmt*>& out) {
        std::vector<const Stmt*> work{&s};
        while (!work.empty()) {
            const Stmt* cur = work.back();
            work.pop_back();
            if (const auto* q = std::get_if<SeqStmt>(&cur->node)) {
                work.push_back(&*q->second);
                work.push_back(&*q->first);
            } else {
                out.push_back(cur);
            }
        }
    };
    while (!todo.empty()) {
        const Stmt* s = todo.back();
        todo.pop_back();
        seq.clear();
        flatten(*s, seq);
        bool ticked = false;
        for (const Stmt* part : seq) {
            if (std::holds_alternative<TickStmt>(part->node)) {
                ticked = true;
            } else if (const auto* c = std::get_if<CallStmt>(&part->node)) {
                if (!ticked) throw ValidationError(fmt::format("call {} is not preceded by tick", c->name));
            } else if (const auto* i = std::get_if<IfStmt>(&part->node)) {
                todo.push_back(&*i->then_branch);
                todo.push_back(&*i->else_branch);
            } else if (const auto* p = std::get_if<ProbIfStmt>(&part->node)) {
                todo.push_back(&*p->then_branch);
                todo.push_back(&*p->else_branch);
            }
        }
    }
}

struct Window {
    std::vector<std::int64_t> lo;
    std::vector<std::int64_t> size;
    std::size_t count = 1;

    std::vector<std::int64_t> at(std::size_t index) const {
        std::vector<std::int64_t> values(lo.size());
        for (std::size_t i = lo.size(); i-- > 0;) {
            const auto s = static_cast<std::size_t>(size[i]);
            values[i] = lo[i] + static_cast<std::int64_t>(index % s);
            index /= s;
        }
        return values;
    }
};

Window window_of(const std::vector<const VarDecl*>& vars) {
    Window w;
    for (const auto* v : vars) {
        w.lo.push_back(v->lo);
        w.size.push_back(v->size());
        w.count *= static_cast<std::size_t>(v->size());
    }
    return w;
}

struct PrestateResult {
    std::size_t pairs = 0;
    double max_error = 0.0;
    double infinite_mass = 0.0;
    bool nondeterministic = false;
    std::vector<Counterexample> failures;
    std::exception_ptr error;
};

Value time_value(const Time& t) {
    return t.is_infinite() ? Value::infinity() : Value::integer(static_cast<std::int64_t>(t.ticks()));
}

Value lookup_in(const Schema& schema, const ProgramState& s, const std::string& name) {
    if (name == kTimeVar) return time_value(s.time);
    const int i = schema.index_of(name);
    if (i < 0) throw ValidationError(fmt::format("variable '{}' is not available here", name));
    const auto v = s.values[static_cast<std::size_t>(i)];
    return schema.is_bool(static_cast<std::size_t>(i)) ? Value::boolean(v != 0) : Value::integer(v);
}

class Checker {
public:
    Checker(const Program& program, const Spec& spec, const Stmt& impl, const RefinementOptions& options)
        : interp_(program, options.eval), spec_(spec), impl_(impl), options_(options) {
        validate_spec(program, spec);
        for (const auto& ref : referenced_vars(spec.body)) {
            if (!ref.primed) continue;
            if (ref.name == kTimeVar) {
                uses_time_ = true;
            } else if (std::find(primed_.begin(), primed_.end(), ref.name) == primed_.end()) {
                primed_.push_back(ref.name);
            }
        }
        // Primed variables in declaration order, to match marginal().
        std::vector<std::string> ordered;
        std::vector<const VarDecl*> decls;
        for (const auto& v : program.vars) {
            if (std::find(primed_.begin(), primed_.end(), v.name) != primed_.end()) {
                ordered.push_back(v.name);
                decls.push_back(&v);
            }
        }
        primed_ = std::move(ordered);
        primed_window_ = window_of(decls);
        std::vector<const VarDecl*> all;
        for (const auto& v : program.vars) all.push_back(&v);
        pre_window_ = window_of(all);
    }

    std::size_t prestates() const { return pre_window_.count; }

    PrestateResult check(std::size_t index) const {
        PrestateResult r;
        try {
            const ProgramState pre = make_state(pre_window_.at(index), options_.initial_time);
            const EvalResult run = interp_.run(impl_, Distribution::point(interp_.schema(), pre));
            r.infinite_mass = run.infinite_mass;
            r.nondeterministic = run.nondeterministic;
            if (spec_.kind == SpecKind::Bool) {
                check_bool(pre, run.dist, r);
            } else {
                check_dist(pre, run.dist, r);
            }
        } catch (...) {
            r.error = std::current_exception();
        }
        return r;
    }

private:
    double spec_value(const ProgramState& pre, const Schema& post_schema, const ProgramState& post) const {
        const Schema& pre_schema = interp_.schema();
        const Value v = evaluate(spec_.body, [&](const VarRef& ref) {
            return ref.primed ? lookup_in(post_schema, post, ref.name) : lookup_in(pre_schema, pre, ref.name);
        });
        if (spec_.kind == SpecKind::Bool) return v.as_bool() ? 1.0 : 0.0;
        return v.as_real();
    }

    void fail(PrestateResult& r, const ProgramState& pre, const Schema& post_schema, ProgramState post,
              double expected, double actual) const {
        if (r.failures.size() >= options_.max_counterexamples) return;
        std::string text;
        if (spec_.kind == SpecKind::Bool) {
            text = fmt::format("{} -> {} (p={:.10g}) violates the specification",
                               describe_state(interp_.schema(), pre), describe_state(post_schema, post, true), actual);
        } else {
            text = fmt::format("{} -> {}: specification gives {:.10g}, program gives {:.10g}",
                               describe_state(interp_.schema(), pre), describe_state(post_schema, post, true),
                               expected, actual);
        }
        r.failures.push_back(Counterexample{pre, std::move(post), expected, actual, std::move(text)});
    }

    void check_bool(const ProgramState& pre, const Distribution& dist, PrestateResult& r) const {
        const Schema& schema = dist.schema();
        dist.for_each([&](const ProgramState& post, double p) {
            if (!post.time.is_infinite()) {
                ++r.pairs;
                if (spec_value(pre, schema, post) != 1.0) {
                    r.max_error = std::max(r.max_error, p);
                    fail(r, pre, schema, post, 0.0, p);
                }
                return;
            }
            // Nontermination: the final values are arbitrary.
            ProgramState any = post;
            for (std::size_t c = 0; c < primed_window_.count; ++c) {
                const auto values = primed_window_.at(c);
                for (std::size_t i = 0; i < primed_.size(); ++i) {
                    any.values[static_cast<std::size_t>(schema.index_of(primed_[i]))] = values[i];
                }
                ++r.pairs;
                if (spec_value(pre, schema, any) != 1.0) {
                    r.max_error = std::max(r.max_error, p);
                    fail(r, pre, schema, any, 0.0, p);
                    break;
                }
            }
        });
    }

    void check_dist(const ProgramState& pre, const Distribution& dist, PrestateResult& r) const {
        std::vector<std::string> keep = primed_;
        if (uses_time_) keep.emplace_back(kTimeVar);
        const Distribution m = marginal(dist, keep);
        const Schema& schema = m.schema();

        std::vector<Time> times;
        if (uses_time_) {
            m.for_each([&](const ProgramState& s, double) {
                if (std::find(times.begin(), times.end(), s.time) == times.end()) times.push_back(s.time);
            });
            std::sort(times.begin(), times.end());
        } else {
            times.push_back(Time{});
        }

        auto compare = [&](const ProgramState& post, double actual) {
            ++r.pairs;
            const double expected = spec_value(pre, schema, post);
            const double err = std::abs(expected - actual);
            r.max_error = std::max(r.max_error, err);
            if (!(err <= options_.tol)) fail(r, pre, schema, post, expected, actual);
        };
        m.for_each([&](const ProgramState& post, double p) { compare(post, p); });
        for (const Time& t : times) {
            for (std::size_t c = 0; c < primed_window_.count; ++c) {
                ProgramState post{primed_window_.at(c), std::nullopt, t};
                const double actual = m.probability_of(post);
                if (actual > 0.0) continue;  // already compared
                compare(post, 0.0);
            }
        }
    }

    Interpreter interp_;
    const Spec& spec_;
    const Stmt& impl_;
    RefinementOptions options_;
    std::vector<std::string> primed_;
    bool uses_time_ = false;
    Window primed_window_;
    Window pre_window_;
};

RefinementReport run_check(const Program& program, const Spec& spec, const Stmt& impl,
                           const RefinementOptions& options) {
    if (!(options.tol > 0.0)) throw DomainError("tolerance must be positive");
    const Checker checker(program, spec, impl, options);
    const std::size_t n = checker.prestates();
    std::vector<PrestateResult> results(n);

#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < n; ++i) results[i] = checker.check(i);

    RefinementReport report;
    report.kind = spec.kind;
    report.prestates_checked = n;
    report.window = describe_window(program);
    bool nondeterministic = false;
    for (auto& r : results) {
        if (r.error) std::rethrow_exception(r.error);
        report.pairs_checked += r.pairs;
        report.max_abs_error = std::max(report.max_abs_error, r.max_error);
        report.max_infinite_mass = std::max(report.max_infinite_mass, r.infinite_mass);
        nondeterministic = nondeterministic || r.nondeterministic;
        if (!r.failures.empty()) report.holds = false;
        for (auto& c : r.failures) {
            if (report.counterexamples.size() >= options.max_counterexamples) break;
            report.counterexamples.push_back(std::move(c));
        }
    }
    report.notes.push_back(fmt::format("checked over the window {} with t = {}", report.window, options.initial_time));
    if (program.qreg) {
        report.notes.push_back(fmt::format(
            "quantum states are restricted to those reachable from {} := zero({}) through the program's operators",
            program.qreg->name, program.qreg->n_qubits));
    }
    if (report.max_infinite_mass > kReportEps) {
        report.notes.push_back(fmt::format("up to {:.10g} of the mass did not terminate within fuel {} (t' = inf)",
                                           report.max_infinite_mass, options.eval.fuel));
    }
    if (nondeterministic) {
        report.notes.push_back("a boolean specification ran as a statement; only supports were compared");
    }
    return report;
}

const Spec& own_spec(const Program& program) {
    if (!program.spec) throw ValidationError("program has no spec block");
    return *program.spec;
}

}  // namespace

RefinementReport check_refinement(const Program& program, const Spec& spec, const Stmt& impl,
                                  const RefinementOptions& options) {
    return run_check(program, spec, impl, options);
}

RefinementReport check_refinement(const Program& program, const RefinementOptions& options) {
    return run_check(program, own_spec(program), program.main, options);
}

RefinementReport check_timed_refinement(const Program& program, const Spec& spec, const Stmt& impl,
                                        const RefinementOptions& options) {
    // Calls in the main body are entry points, not recursive calls.
    for (const auto& d : program.definitions) check_ticked(d.body);
    return run_check(program, spec, impl, options);
}

RefinementReport check_timed_refinement(const Program& program, const RefinementOptions& options) {
    return check_timed_refinement(program, own_spec(program), program.main, options);
}

}  // namespace qpp
