#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpp/qstate.hpp"

namespace qpp {

/// Mass that may be lost to floating point before a distribution is
/// considered unnormalized.
inline constexpr double kMassTol = 1e-9;
/// Quantum support keys: amplitudes are compared on this grid / tolerance.
inline constexpr double kQuantumKeyTol = 1e-10;

/// Natural-number time, or infinity for nontermination. inf + k = inf and
/// inf compares above every finite time.
class Time {
public:
    constexpr Time() = default;
    static constexpr Time finite(std::uint64_t ticks) { return Time(ticks, false); }
    static constexpr Time infinite() { return Time(0, true); }

    constexpr bool is_infinite() const noexcept { return infinite_; }
    constexpr std::uint64_t ticks() const noexcept { return ticks_; }
    constexpr Time plus(std::uint64_t k) const noexcept { return infinite_ ? *this : Time(ticks_ + k, false); }

    friend constexpr bool operator==(const Time&, const Time&) = default;
    friend constexpr std::strong_ordering operator<=>(const Time& a, const Time& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
        return a.ticks_ <=> b.ticks_;
    }

private:
    constexpr Time(std::uint64_t ticks, bool inf) : ticks_(ticks), infinite_(inf) {}
    std::uint64_t ticks_ = 0;
    bool infinite_ = false;
};

/// Valuation of classical variables (in schema order), the quantum register
/// (if any) and the time variable.
struct ProgramState {
    std::vector<std::int64_t> values;
    std::optional<QuantumState> quantum;
    Time time;
};

/// Which variables a distribution ranges over.
struct Schema {
    std::vector<std::string> vars;
    std::vector<bool> boolean;  // parallel to vars; missing entries mean integer
    std::string qreg;  // empty: no quantum register
    bool has_time = true;

    bool has_quantum() const noexcept { return !qreg.empty(); }
    bool is_bool(std::size_t i) const noexcept { return i < boolean.size() && boolean[i]; }
    /// Index into ProgramState::values, or -1.
    int index_of(const std::string& name) const;
    bool operator==(const Schema&) const = default;
};

/// Finite-support (sub-)distribution over program states.
///
/// Classical values and time are matched exactly. Quantum states are matched
/// componentwise within kQuantumKeyTol; matching entries merge into their
/// probability-weighted average. Iteration order is deterministic:
/// classical values, then time, then the quantum amplitudes rounded to a
/// kQuantumKeyTol grid.
class Distribution {
public:
    struct Entry {
        ProgramState state;
        double probability;
    };

    Distribution() = default;
    explicit Distribution(Schema schema) : schema_(std::move(schema)) {}
    static Distribution point(Schema schema, ProgramState state);

    const Schema& schema() const noexcept { return schema_; }
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    double total() const;

    void add(ProgramState state, double probability);
    void add_all(const Distribution& other, double scale = 1.0);
    /// Removes entries with probability <= eps; returns the removed mass.
    double prune(double eps);

    template <class F>
    void for_each(F&& f) const {
        for (const auto& [key, items] : buckets_) {
            for (const auto& item : items) f(item.state, item.probability);
        }
    }
    std::vector<Entry> entries() const;

    /// Probability of the state equal to `state` (exact classical and time,
    /// approximate quantum match); 0 when absent.
    double probability_of(const ProgramState& state) const;

private:
    struct Key {
        std::vector<std::int64_t> values;
        Time time;
        auto operator<=>(const Key&) const = default;
    };
    // Lookup without copying the values.
    struct KeyView {
        std::span<const std::int64_t> values;
        Time time;
    };
    struct KeyLess {
        using is_transparent = void;
        static std::strong_ordering cmp(std::span<const std::int64_t> a, Time ta, std::span<const std::int64_t> b,
                                        Time tb) {
            const auto c = std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
            return c != 0 ? c : ta <=> tb;
        }
        bool operator()(const Key& a, const Key& b) const { return a < b; }
        bool operator()(const Key& a, const KeyView& b) const { return cmp(a.values, a.time, b.values, b.time) < 0; }
        bool operator()(const KeyView& a, const Key& b) const { return cmp(a.values, a.time, b.values, b.time) < 0; }
    };
    struct Item {
        ProgramState state;
        std::vector<std::int64_t> grid;
        double probability;
    };

    Schema schema_;
    std::map<Key, std::vector<Item>, KeyLess> buckets_;
    std::size_t size_ = 0;
};

/// Sums out every variable not in `keep`. The quantum register and time are
/// kept by listing their names (the register name, "t").
Distribution marginal(const Distribution& d, std::span<const std::string> keep);

/// sum over the support of f(state) * p
double expectation(const Distribution& d, const std::function<double(const ProgramState&)>& f);

/// Largest pointwise probability difference over the union of supports.
/// Schemas must match.
double distance(const Distribution& a, const Distribution& b);

/// One JSON object per line: {"classical":{...},"quantum":[[re,im],...]|null,
/// "time":int|"inf"|null,"p":float}, in the distribution's iteration order.
std::string to_jsonl(const Distribution& d);
/// Inverse of to_jsonl for a given schema.
Distribution from_jsonl(const std::string& text, const Schema& schema);

}  // namespace qpp
