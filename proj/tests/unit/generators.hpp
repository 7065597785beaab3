#pragma once

#include <random>
#include <string>
#include <vector>

#include "qpp/expr.hpp"
#include "qpp/program.hpp"

namespace qpp::testing {

using B = BinaryOp;

// Random statements over x and y whose values stay in 0,..9.
class StmtGen {
public:
    explicit StmtGen(std::uint64_t seed) : rng_(seed) {}

    std::string pick_var(const std::vector<std::string>& vars) { return vars[rng_() % vars.size()]; }
    std::int64_t small(std::int64_t n) { return static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(n)); }

    Expr value_expr(const std::vector<std::string>& vars, bool allow_rand) {
        Expr e = ex::bin(B::Add, ex::bin(B::Mul, ex::lit(small(4)), ex::var(pick_var(vars))), ex::lit(small(9)));
        if (vars.size() > 1 && small(2) == 0) e = ex::bin(B::Add, e, ex::var(pick_var(vars)));
        if (allow_rand && small(3) == 0) e = ex::bin(B::Add, e, ex::rand(ex::lit(1 + small(3))));
        return ex::bin(B::Mod, e, ex::lit(9));
    }

    Stmt stmt(const std::vector<std::string>& vars, int depth, bool allow_rand = true) {
        const auto choice = small(depth > 0 ? 7 : 3);
        switch (choice) {
            case 0:
                return st::ok();
            case 1:
            case 2:
                return st::assign(pick_var(vars), value_expr(vars, allow_rand));
            case 3:
                return st::seq(stmt(vars, depth - 1, allow_rand), stmt(vars, depth - 1, allow_rand));
            case 4:
                return st::if_(ex::bin(B::Lt, ex::var(pick_var(vars)), ex::lit(small(9))), stmt(vars, depth - 1, allow_rand),
                               stmt(vars, depth - 1, allow_rand));
            case 5:
                if (allow_rand) {
                    const double probs[] = {0.25, 0.5, 1.0 / 3.0, 1.0};
                    return st::prob_if(ex::real(probs[small(4)]), stmt(vars, depth - 1, allow_rand),
                                       stmt(vars, depth - 1, allow_rand));
                }
                return st::ok();
            default:
                return st::seq(st::tick(), stmt(vars, depth - 1, allow_rand));
        }
    }

private:
    std::mt19937_64 rng_;
};

// Seeded generator of well-formed programs for the print/parse round trip.
class ProgramGen {
public:
    explicit ProgramGen(std::uint64_t seed) : rng_(seed) {}

    Program program() {
        Program p;
        const char* pool[] = {"x", "y", "count", "r2"};
        const int n_int = 1 + pick(3);
        for (int i = 0; i < n_int; ++i) {
            const std::int64_t lo = pick(9) - 4;
            p.vars.push_back(VarDecl{pool[i], VarDecl::Type::Int, lo, lo + 1 + pick(12)});
            ints_.push_back(pool[i]);
        }
        if (pick(2) == 0) {
            p.vars.push_back(VarDecl{"flag", VarDecl::Type::Bool, 0, 2});
            bools_.push_back("flag");
        }
        if (pick(2) == 0) {
            qubits_ = 1 + pick(3);
            p.qreg = QRegDecl{pick(2) == 0 ? "psi" : "reg", qubits_};
            std::vector<std::uint8_t> table(std::size_t{1} << qubits_);
            for (auto& b : table) b = static_cast<std::uint8_t>(pick(2));
            p.oracles.push_back(OracleDecl{"f", table});
        }
        const int n_defs = pick(3);
        for (int i = 0; i < n_defs; ++i) defs_.push_back(i == 0 ? "P" : "Loop");
        for (const auto& d : defs_) p.definitions.push_back(Definition{d, stmt(3)});
        p.main = stmt(4);
        if (pick(3) != 0) p.spec = Spec{pick(2) == 0 ? SpecKind::Bool : SpecKind::Dist, expr(3, true, true, false)};
        return p;
    }

    Expr expr(int depth, bool primes, bool time, bool rand) {
        if (depth == 0 || pick(4) == 0) return leaf(primes, time);
        switch (pick(rand ? 6 : 5)) {
            case 0:
                return ex::neg(expr(depth - 1, primes, time, rand));
            case 1:
                return ex::lnot(expr(depth - 1, primes, time, rand));
            case 2:
            case 3: {
                const B ops[] = {B::Add, B::Sub, B::Mul, B::Div, B::IntDiv, B::Mod, B::Pow, B::Eq,
                                 B::Ne,  B::Lt,  B::Le,  B::Gt,  B::Ge,     B::And, B::Or,  B::Implies};
                return ex::bin(ops[pick(16)], expr(depth - 1, primes, time, rand), expr(depth - 1, primes, time, rand));
            }
            case 4: {
                const std::pair<const char*, int> fns[] = {{"sin", 1},  {"arcsin", 1}, {"sqrt", 1}, {"abs", 1},
                                                           {"floor", 1}, {"max", 2},    {"binom", 2}};
                const auto& [name, arity] = fns[pick(7)];
                std::vector<Expr> args;
                for (int i = 0; i < arity; ++i) args.push_back(expr(depth - 1, primes, time, rand));
                return ex::call(name, std::move(args));
            }
            default:
                return ex::rand(ex::lit(1 + pick(5)));
        }
    }

    Stmt stmt(int depth) {
        const int kinds = depth == 0 ? 4 : 10;
        switch (pick(kinds)) {
            case 0:
                return st::ok();
            case 1:
                return st::tick();
            case 2:
                return st::assign(ints_[pick(static_cast<int>(ints_.size()))], expr(2, false, false, true));
            case 3:
                if (!defs_.empty()) return st::call(defs_[pick(static_cast<int>(defs_.size()))]);
                return st::ok();
            case 4:
                return st::if_(expr(2, false, false, false), stmt(depth - 1), stmt(depth - 1));
            case 5:
                return st::prob_if(expr(1, false, false, false), stmt(depth - 1), stmt(depth - 1));
            case 6:
            case 7:
                return st::seq(stmt(depth - 1), stmt(depth - 1));
            case 8:
                return st::spec(pick(2) == 0 ? SpecKind::Bool : SpecKind::Dist, expr(2, true, false, false));
            default:
                return quantum();
        }
    }

private:
    int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }

    Expr leaf(bool primes, bool time) {
        switch (pick(8)) {
            case 0:
                return ex::lit(pick(2000) - 1000);
            case 1: {
                const double reals[] = {0.5, 2.25, 0.001, 1e-12, 123456.75, 3.0, -0.125};
                return ex::real(reals[pick(7)]);
            }
            case 2:
                return ex::boolean(pick(2) == 0);
            case 3:
                return time ? ex::inf() : ex::lit(pick(5));
            case 4:
                if (time) return pick(2) == 0 ? ex::var("t") : ex::primed("t");
                [[fallthrough]];
            default: {
                std::vector<std::string> names = ints_;
                names.insert(names.end(), bools_.begin(), bools_.end());
                const auto& name = names[pick(static_cast<int>(names.size()))];
                return primes && pick(2) == 0 ? ex::primed(name) : ex::var(name);
            }
        }
    }

    Stmt quantum() {
        if (qubits_ == 0) return st::ok();
        switch (pick(5)) {
            case 0:
                return st::qinit(qubits_);
            case 1:
                return st::apply_h();
            case 2:
                return st::apply_invmean();
            case 3:
                return st::apply_oracle("f");
            default:
                return st::measure(ints_[pick(static_cast<int>(ints_.size()))]);
        }
    }

    std::mt19937_64 rng_;
    std::vector<std::string> ints_;
    std::vector<std::string> bools_;
    std::vector<std::string> defs_;
    int qubits_ = 0;
};

}  // namespace qpp::testing
