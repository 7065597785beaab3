#include "qpp/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "qpp/errors.hpp"

namespace qpp {

namespace {

std::vector<std::int64_t> grid_key(const std::optional<QuantumState>& q) {
    std::vector<std::int64_t> grid;
    if (!q) return grid;
    grid.reserve(2 * q->dim());
    for (const auto& a : q->amplitudes()) {
        grid.push_back(std::llround(a.real() / kQuantumKeyTol));
        grid.push_back(std::llround(a.imag() / kQuantumKeyTol));
    }
    return grid;
}

bool same_quantum(const std::optional<QuantumState>& a, const std::optional<QuantumState>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    if (a->n_qubits() != b->n_qubits()) return false;
    return max_abs_difference(a->amplitudes(), b->amplitudes()) <= kQuantumKeyTol;
}

}  // namespace

int Schema::index_of(const std::string& name) const {
    const auto it = std::find(vars.begin(), vars.end(), name);
    return it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
}

Distribution Distribution::point(Schema schema, ProgramState state) {
    Distribution d(std::move(schema));
    d.add(std::move(state), 1.0);
    return d;
}

double Distribution::total() const {
    double sum = 0.0;
    for_each([&](const ProgramState&, double p) { sum += p; });
    return sum;
}

void Distribution::add(ProgramState state, double probability) {
    if (probability < 0.0 || !std::isfinite(probability)) {
        throw DomainError(fmt::format("invalid probability {}", probability));
    }
    if (probability == 0.0) return;
    if (state.values.size() != schema_.vars.size()) throw DomainError("state does not match distribution schema");
    if (state.quantum.has_value() && !schema_.has_quantum()) throw DomainError("quantum state in a classical distribution");
    const KeyView view{state.values, state.time};
    auto at = buckets_.lower_bound(view);
    if (at == buckets_.end() || KeyLess{}(view, at->first)) at = buckets_.emplace_hint(at, Key{state.values, state.time}, std::vector<Item>{});
    auto& bucket = at->second;
    for (auto& item : bucket) {
        if (!same_quantum(item.state.quantum, state.quantum)) continue;
        const double merged = item.probability + probability;
        if (item.state.quantum) {
            const auto& a = item.state.quantum->amplitudes();
            const auto& b = state.quantum->amplitudes();
            if (max_abs_difference(a, b) > 0.0) {
                std::vector<Amplitude> avg(a.size());
                for (std::size_t i = 0; i < a.size(); ++i) {
                    avg[i] = (item.probability * a[i] + probability * b[i]) / merged;
                }
                item.state.quantum = QuantumState::from_amplitudes(std::move(avg));
            }
        }
        item.probability = merged;
        return;
    }
    auto grid = grid_key(state.quantum);
    const auto pos = std::lower_bound(bucket.begin(), bucket.end(), grid,
                                      [](const Item& it, const std::vector<std::int64_t>& g) { return it.grid < g; });
    bucket.insert(pos, Item{std::move(state), std::move(grid), probability});
    ++size_;
}

void Distribution::add_all(const Distribution& other, double scale) {
    other.for_each([&](const ProgramState& s, double p) { add(s, p * scale); });
}

double Distribution::prune(double eps) {
    double removed = 0.0;
    for (auto it = buckets_.begin(); it != buckets_.end();) {
        auto& items = it->second;
        auto keep_end = items.begin();
        for (auto j = items.begin(); j != items.end(); ++j) {
            if (j->probability > eps) {
                if (keep_end != j) *keep_end = std::move(*j);
                ++keep_end;
            } else {
                removed += j->probability;
            }
        }
        size_ -= static_cast<std::size_t>(items.end() - keep_end);
        items.erase(keep_end, items.end());
        it = items.empty() ? buckets_.erase(it) : std::next(it);
    }
    return removed;
}

std::vector<Distribution::Entry> Distribution::entries() const {
    std::vector<Entry> out;
    out.reserve(size_);
    for_each([&](const ProgramState& s, double p) { out.push_back({s, p}); });
    return out;
}

double Distribution::probability_of(const ProgramState& state) const {
    const auto it = buckets_.find(KeyView{state.values, state.time});
    if (it == buckets_.end()) return 0.0;
    for (const auto& item : it->second) {
        if (same_quantum(item.state.quantum, state.quantum)) return item.probability;
    }
    return 0.0;
}

Distribution marginal(const Distribution& d, std::span<const std::string> keep) {
    const Schema& in = d.schema();
    for (const auto& name : keep) {
        if (in.index_of(name) < 0 && name != in.qreg && !(name == "t" && in.has_time)) {
            throw ValidationError(fmt::format("cannot keep unknown variable '{}'", name));
        }
    }
    auto kept = [&](const std::string& name) { return std::find(keep.begin(), keep.end(), name) != keep.end(); };
    Schema out;
    std::vector<std::size_t> picks;
    for (std::size_t i = 0; i < in.vars.size(); ++i) {
        if (!kept(in.vars[i])) continue;
        picks.push_back(i);
        out.vars.push_back(in.vars[i]);
        out.boolean.push_back(in.is_bool(i));
    }
    if (in.has_quantum() && kept(in.qreg)) out.qreg = in.qreg;
    out.has_time = in.has_time && kept("t");

    Distribution result(out);
    d.for_each([&](const ProgramState& s, double p) {
        ProgramState r;
        r.values.reserve(picks.size());
        for (const auto i : picks) r.values.push_back(s.values[i]);
        if (out.has_quantum()) r.quantum = s.quantum;
        if (out.has_time) r.time = s.time;
        result.add(std::move(r), p);
    });
    return result;
}

double expectation(const Distribution& d, const std::function<double(const ProgramState&)>& f) {
    double sum = 0.0;
    d.for_each([&](const ProgramState& s, double p) { sum += f(s) * p; });
    return sum;
}

double distance(const Distribution& a, const Distribution& b) {
    if (!(a.schema() == b.schema())) throw DomainError("comparing distributions over different variables");
    double worst = 0.0;
    a.for_each([&](const ProgramState& s, double p) { worst = std::max(worst, std::abs(p - b.probability_of(s))); });
    b.for_each([&](const ProgramState& s, double p) { worst = std::max(worst, std::abs(p - a.probability_of(s))); });
    return worst;
}

std::string to_jsonl(const Distribution& d) {
    using json = nlohmann::ordered_json;
    const Schema& schema = d.schema();
    std::string out;
    d.for_each([&](const ProgramState& s, double p) {
        json line;
        json classical = json::object();
        for (std::size_t i = 0; i < schema.vars.size(); ++i) {
            if (schema.is_bool(i)) {
                classical[schema.vars[i]] = s.values[i] != 0;
            } else {
                classical[schema.vars[i]] = s.values[i];
            }
        }
        line["classical"] = std::move(classical);
        if (s.quantum) {
            json amps = json::array();
            for (const auto& a : s.quantum->amplitudes()) amps.push_back(json::array({a.real(), a.imag()}));
            line["quantum"] = std::move(amps);
        } else {
            line["quantum"] = nullptr;
        }
        if (!schema.has_time) {
            line["time"] = nullptr;
        } else if (s.time.is_infinite()) {
            line["time"] = "inf";
        } else {
            line["time"] = s.time.ticks();
        }
        line["p"] = p;
        out += line.dump();
        out += '\n';
    });
    return out;
}

Distribution from_jsonl(const std::string& text, const Schema& schema) {
    using json = nlohmann::json;
    Distribution d(schema);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        ProgramState s;
        for (const auto& name : schema.vars) {
            const auto& v = j.at("classical").at(name);
            s.values.push_back(v.is_boolean() ? (v.get<bool>() ? 1 : 0) : v.get<std::int64_t>());
        }
        const auto& q = j.at("quantum");
        if (!q.is_null()) {
            std::vector<Amplitude> amps;
            for (const auto& pair : q) amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
            s.quantum = QuantumState::from_amplitudes(std::move(amps));
        }
        const auto& t = j.at("time");
        if (t.is_string()) {
            s.time = Time::infinite();
        } else if (!t.is_null()) {
            s.time = Time::finite(t.get<std::uint64_t>());
        }
        d.add(std::move(s), j.at("p").get<double>());
    }
    return d;
}

}  // namespace qpp
