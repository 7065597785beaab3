#include "qpp/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "qpp/algorithms.hpp"
#include "qpp/errors.hpp"
#include "qpp/parser.hpp"
#include "qpp/refine.hpp"

namespace qpp {

std::string format_probability(double p) { return fmt::format("{:.10g}", p); }

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (row.size() > width.size()) width.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += row[i];
            if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
        }
        out += line + '\n';
    }
    return out;
}

namespace {

using ordered_json = nlohmann::ordered_json;

enum class Format { Table, Json };

struct Config {
    Format format = Format::Table;
    std::uint64_t fuel = kDefaultFuel;
    double tol = kRefineTol;
    std::string file;
    std::vector<std::string> sets;
    int n = 1;
    std::uint64_t k = 0;
    std::int64_t x1 = -1;
    std::int64_t x = 0;
    std::uint64_t max_k = 0;
    std::uint64_t seed = 1;
    std::uint64_t shots = 1000;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(fmt::format("cannot read '{}'", path));
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string format_amplitude(Amplitude a) {
    if (std::abs(a.imag()) <= 1e-12) return format_probability(a.real());
    if (std::abs(a.real()) <= 1e-12) return format_probability(a.imag()) + "i";
    return fmt::format("({}{:+.10g}i)", format_probability(a.real()), a.imag());
}

std::string format_ket(const QuantumState& psi) {
    std::string out;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        Amplitude a = psi[i];
        if (std::abs(a) <= 1e-12) continue;
        std::string label = psi.n_qubits() == 0 ? "" : fmt::format("{:0{}b}", i, psi.n_qubits());
        if (out.empty()) {
            out = format_amplitude(a);
        } else if (std::abs(a.imag()) <= 1e-12 && a.real() < 0) {
            out += " - " + format_amplitude(-a);
        } else {
            out += " + " + format_amplitude(a);
        }
        out += "|" + label + ">";
    }
    return out.empty() ? "0" : out;
}

std::string format_value(const Schema& schema, std::size_t i, std::int64_t v) {
    if (schema.is_bool(i)) return v != 0 ? "true" : "false";
    return fmt::format("{}", v);
}

std::string format_time(const Time& t) { return t.is_infinite() ? "inf" : fmt::format("{}", t.ticks()); }

std::string distribution_table(const Distribution& d) {
    const Schema& schema = d.schema();
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header;
    for (const auto& v : schema.vars) header.push_back(v + "'");
    if (schema.has_quantum()) header.push_back(schema.qreg + "'");
    if (schema.has_time) header.push_back("t'");
    header.push_back("p");
    rows.push_back(std::move(header));
    d.for_each([&](const ProgramState& s, double p) {
        std::vector<std::string> row;
        for (std::size_t i = 0; i < s.values.size(); ++i) row.push_back(format_value(schema, i, s.values[i]));
        if (schema.has_quantum()) row.push_back(s.quantum ? format_ket(*s.quantum) : "-");
        if (schema.has_time) row.push_back(format_time(s.time));
        row.push_back(format_probability(p));
        rows.push_back(std::move(row));
    });
    return render_table(rows);
}

// --set name=value, defaulting to the bottom of each window
ProgramState initial_state(const Program& p, const std::vector<std::string>& sets) {
    std::vector<std::int64_t> values;
    for (const auto& v : p.vars) values.push_back(v.lo);
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ValidationError(fmt::format("--set expects name=value, got '{}'", s));
        const std::string name = s.substr(0, eq);
        const std::string text = s.substr(eq + 1);
        std::size_t i = 0;
        while (i < p.vars.size() && p.vars[i].name != name) ++i;
        if (i == p.vars.size()) throw ValidationError(fmt::format("--set: unknown variable '{}'", name));
        if (p.vars[i].type == VarDecl::Type::Bool) {
            if (text != "true" && text != "false") throw ValidationError(fmt::format("--set: '{}' is boolean", name));
            values[i] = text == "true" ? 1 : 0;
        } else {
            try {
                std::size_t used = 0;
                values[i] = std::stoll(text, &used);
                if (used != text.size()) throw std::invalid_argument(text);
            } catch (const std::logic_error&) {
                throw ValidationError(fmt::format("--set: '{}' is not an integer", text));
            }
        }
    }
    return make_state(std::move(values));
}

bool mentions_time(const Expr& e) {
    for (const auto& v : referenced_vars(e)) {
        if (v.name == kTimeVar) return true;
    }
    return false;
}

void print_reports(const std::vector<AlgorithmReport>& reports, const Config& c, std::ostream& out) {
    if (c.format == Format::Json) {
        for (const auto& r : reports) out << to_json(r) << '\n';
        return;
    }
    std::vector<std::vector<std::string>> rows{{"algorithm", "n", "cases", "max_abs_error", "oracle_calls", "pass"}};
    for (const auto& r : reports) {
        rows.push_back({r.algorithm, fmt::format("{}", r.n), fmt::format("{}", r.cases_checked),
                        fmt::format("{:.3e}", r.max_abs_error), fmt::format("{}", r.oracle_calls),
                        r.pass ? "yes" : "no"});
    }
    out << render_table(rows);
}

int cmd_dist(const Config& c, std::ostream& out, std::ostream& err) {
    const Program p = parse_program(read_file(c.file));
    const Distribution init = Distribution::point(schema_of(p), initial_state(p, c.sets));
    const EvalResult r = eval(p, init, EvalOptions{c.fuel});
    if (c.format == Format::Json) {
        out << to_jsonl(r.dist);
    } else {
        out << distribution_table(r.dist);
    }
    if (r.nonterminating()) {
        err << fmt::format("note: {} of the mass did not terminate within fuel {} (t' = inf)\n",
                           format_probability(r.infinite_mass), c.fuel);
    }
    if (r.nondeterministic) err << "note: a boolean specification ran as a statement; only the support is meaningful\n";
    return kExitOk;
}

int cmd_refine(const Config& c, std::ostream& out) {
    const Program p = parse_program(read_file(c.file));
    if (!p.spec) throw ValidationError(fmt::format("'{}' has no spec block", c.file));
    RefinementOptions opts;
    opts.eval.fuel = c.fuel;
    opts.tol = c.tol;
    const bool timed = mentions_time(p.spec->body);
    const RefinementReport r = timed ? check_timed_refinement(p, opts) : check_refinement(p, opts);
    if (c.format == Format::Json) {
        ordered_json j;
        j["holds"] = r.holds;
        j["kind"] = r.kind == SpecKind::Bool ? "bool" : "dist";
        j["timed"] = timed;
        j["window"] = r.window;
        j["prestates_checked"] = r.prestates_checked;
        j["pairs_checked"] = r.pairs_checked;
        j["max_abs_error"] = r.max_abs_error;
        j["max_infinite_mass"] = r.max_infinite_mass;
        j["notes"] = r.notes;
        j["counterexamples"] = ordered_json::array();
        for (const auto& ce : r.counterexamples) j["counterexamples"].push_back(ce.description);
        out << j.dump() << '\n';
    } else {
        out << fmt::format("{}: {} refinement over {}\n", r.holds ? "holds" : "fails", timed ? "timed" : "untimed",
                           r.window);
        out << fmt::format("prestates checked: {}\npairs checked: {}\n", r.prestates_checked, r.pairs_checked);
        for (const auto& n : r.notes) out << "note: " << n << '\n';
        for (const auto& ce : r.counterexamples) out << "counterexample: " << ce.description << '\n';
    }
    return r.holds ? kExitOk : kExitRefinementFails;
}

int cmd_demo_dj(const Config& c, std::ostream& out) {
    check_qubit_count(c.n);
    const std::vector<AlgorithmReport> reports{deutsch_jozsa_quantum_sweep(c.n), deutsch_jozsa_classical_sweep(c.n)};
    print_reports(reports, c, out);
    const bool pass = reports[0].pass && reports[1].pass;
    return pass ? kExitOk : kExitRefinementFails;
}

int cmd_demo_grover(const Config& c, std::ostream& out) {
    check_qubit_count(c.n);
    const std::uint64_t size = std::uint64_t{1} << c.n;
    const GroverAnalysis g(size);
    const auto x1 = static_cast<std::size_t>(c.x1 < 0 ? 0 : c.x1);
    const GroverRun run = grover_run(OracleFunction::point(c.n, x1), c.k);
    double other_min = 1.0;
    double other_max = 0.0;
    for (std::size_t r = 0; r < size; ++r) {
        if (r == x1) continue;
        const double p = run.dist.probability_of(ProgramState{{static_cast<std::int64_t>(r)}, std::nullopt, Time::finite(c.k)});
        other_min = std::min(other_min, p);
        other_max = std::max(other_max, p);
    }
    const double err = std::max({std::abs(run.p_solution - g.p_success(c.k)), std::abs(other_min - g.p_other(c.k)),
                                 std::abs(other_max - g.p_other(c.k))});
    AlgorithmReport report{"grover", c.n, static_cast<std::size_t>(size), err, run.oracle_calls,
                           err <= c.tol && run.oracle_calls == c.k};
    if (c.format == Format::Json) {
        out << to_json(report) << '\n';
    } else {
        out << fmt::format("N = {}, x1 = {}, k = {}, oracle calls = {}\n", size, x1, c.k, run.oracle_calls);
        out << render_table({{"quantity", "simulated", "closed form"},
                             {"P(r'=x1)", format_probability(run.p_solution), format_probability(g.p_success(c.k))},
                             {"P(r'=r), r # x1, min", format_probability(other_min), format_probability(g.p_other(c.k))},
                             {"P(r'=r), r # x1, max", format_probability(other_max), format_probability(g.p_other(c.k))}});
        const GroverOptimum opt = grover_optimal_iterations(size);
        out << fmt::format("best k = {} (P = {}); ceil(pi sqrt(N) / 4) = {} (P = {})\n", opt.k_opt,
                           format_probability(opt.p_success), opt.k_approx, format_probability(opt.p_approx));
    }
    return report.pass ? kExitOk : kExitRefinementFails;
}

int cmd_demo_walk(const Config& c, std::ostream& out) {
    if (c.x < 0) throw DomainError("--x must be >= 0");
    const auto max_k = c.max_k > 0 ? c.max_k : 4 * static_cast<std::uint64_t>(c.x) + 16;
    const std::uint64_t fuel = std::max({c.fuel, 4 * static_cast<std::uint64_t>(c.x) + 64, max_k + 1});
    const AlgorithmReport report = walk_check(c.x, max_k);
    if (c.format == Format::Json) {
        out << to_json(report) << '\n';
        return report.pass ? kExitOk : kExitRefinementFails;
    }
    const WalkRun run = probabilistic_walk(c.x, fuel);
    const std::vector<std::string> keep{"t"};
    const Distribution times = marginal(run.dist, keep);
    std::vector<std::vector<std::string>> rows{{"t'-t", "evaluated", "binom(k-1,x-1)/2^k"}};
    for (std::uint64_t k = 0; k <= max_k; ++k) {
        const double got = times.probability_of(ProgramState{{}, std::nullopt, Time::finite(k)});
        const double want = walk_probability(c.x, k);
        if (got == 0.0 && want == 0.0) continue;
        rows.push_back({fmt::format("{}", k), format_probability(got), format_probability(want)});
    }
    out << render_table(rows);
    const double mean = expectation(run.dist, [](const ProgramState& s) {
        return s.time.is_infinite() ? 0.0 : static_cast<double>(s.time.ticks());
    });
    out << fmt::format("mean t'-t = {} (2x = {})\n", format_probability(mean), 2 * c.x);
    print_reports({report}, c, out);
    return report.pass ? kExitOk : kExitRefinementFails;
}

int cmd_demo_mixed(const Config& c, std::ostream& out, std::ostream& err) {
    const MixedStateReport r = mixed_state_demos();
    if (c.format == Format::Json) {
        for (const auto& check : r.checks) {
            ordered_json j;
            j["check"] = check.name;
            j["cases_checked"] = check.cases;
            j["distance"] = check.distance;
            j["pass"] = check.passed;
            out << j.dump() << '\n';
        }
    } else {
        std::vector<std::vector<std::string>> rows{{"check", "cases", "distance", "pass"}};
        for (const auto& check : r.checks) {
            rows.push_back({check.name, fmt::format("{}", check.cases), fmt::format("{:.3e}", check.distance),
                            check.passed ? "yes" : "no"});
        }
        out << render_table(rows);
    }
    for (const auto& check : r.checks) {
        if (!check.passed) err << check.name << ":\n" << check.detail;
    }
    return r.passed() ? kExitOk : kExitRefinementFails;
}

// Seeded draws from the exact final distribution.
int cmd_sample(const Config& c, std::ostream& out) {
    const Program p = parse_program(read_file(c.file));
    const Distribution init = Distribution::point(schema_of(p), initial_state(p, c.sets));
    const EvalResult r = eval(p, init, EvalOptions{c.fuel});
    const auto entries = r.dist.entries();
    std::vector<double> weights;
    for (const auto& e : entries) weights.push_back(e.probability);
    std::mt19937_64 rng(c.seed);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    std::vector<std::uint64_t> counts(entries.size(), 0);
    for (std::uint64_t i = 0; i < c.shots; ++i) ++counts[pick(rng)];

    Distribution observed(r.dist.schema());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (counts[i] > 0) {
            observed.add(entries[i].state, static_cast<double>(counts[i]) / static_cast<double>(c.shots));
        }
    }
    if (c.format == Format::Json) {
        out << to_jsonl(observed);
    } else {
        out << fmt::format("{} shots, seed {}\n", c.shots, c.seed);
        out << distribution_table(observed);
    }
    return kExitOk;
}

std::uint64_t default_fuel() {
    const char* env = std::getenv("QPP_FUEL");
    if (env == nullptr) return kDefaultFuel;
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(env, env + std::strlen(env), v);
    if (ec != std::errc{} || *end != '\0' || v == 0) throw ValidationError(fmt::format("QPP_FUEL='{}' is not a positive integer", env));
    return v;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact probabilistic and quantum program semantics", "qpp"};
    app.require_subcommand(1);
    Config c;
    try {
        c.fuel = default_fuel();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    std::string format = "table";

    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));
        sub->add_option("--fuel", c.fuel, "maximum nested calls (env QPP_FUEL)")->check(CLI::PositiveNumber);
        sub->add_option("--tol", c.tol, "tolerance for distribution comparisons")->check(CLI::PositiveNumber);
    };

    auto* dist = app.add_subcommand("dist", "print the final distribution of a program");
    dist->add_option("file", c.file, ".qpp file")->required();
    dist->add_option("--set", c.sets, "initial value name=value (default: bottom of the window)");
    common(dist);

    auto* refine = app.add_subcommand("refine", "check that the spec block is refined by main");
    refine->add_option("file", c.file, ".qpp file")->required();
    common(refine);

    auto* sample = app.add_subcommand("sample", "seeded Monte Carlo draws from the final distribution");
    sample->add_option("file", c.file, ".qpp file")->required();
    sample->add_option("--set", c.sets, "initial value name=value");
    sample->add_option("--seed", c.seed, "random seed");
    sample->add_option("--shots", c.shots, "number of draws")->check(CLI::PositiveNumber);
    common(sample);

    auto* demo = app.add_subcommand("demo", "worked examples");
    demo->require_subcommand(1);
    auto* dj = demo->add_subcommand("dj", "Deutsch-Jozsa over every constant and balanced oracle");
    dj->add_option("--n", c.n, "qubits")->required()->check(CLI::Range(1, 62));
    common(dj);
    auto* grover = demo->add_subcommand("grover", "Grover search against its closed form");
    grover->add_option("--n", c.n, "qubits")->required()->check(CLI::Range(1, 62));
    grover->add_option("--k", c.k, "iterations")->required();
    grover->add_option("--x1", c.x1, "solution position (default 0)");
    common(grover);
    auto* walk = demo->add_subcommand("walk", "probabilistic countdown against the negative binomial");
    walk->add_option("--x", c.x, "start value")->required();
    walk->add_option("--max-k", c.max_k, "largest elapsed time shown");
    common(walk);
    auto* mixed = demo->add_subcommand("mixed", "mixed-state identities");
    common(mixed);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    c.format = format == "json" ? Format::Json : Format::Table;

    try {
        if (dist->parsed()) return cmd_dist(c, out, err);
        if (refine->parsed()) return cmd_refine(c, out);
        if (sample->parsed()) return cmd_sample(c, out);
        if (dj->parsed()) return cmd_demo_dj(c, out);
        if (grover->parsed()) {
            if (c.x1 >= (std::int64_t{1} << c.n)) throw DomainError("--x1 must lie in 0,..2^n");
            return cmd_demo_grover(c, out);
        }
        if (walk->parsed()) return cmd_demo_walk(c, out);
        if (mixed->parsed()) return cmd_demo_mixed(c, out, err);
    } catch (const ParseError& e) {
        err << (c.file.empty() ? "" : c.file + ":") << e.what() << '\n';
        return kExitUsage;
    } catch (const CapacityError& e) {
        err << "capacity exceeded: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace qpp
