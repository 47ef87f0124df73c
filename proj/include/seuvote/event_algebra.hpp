#pragma once

#include "seuvote/core_model.hpp"
#include "seuvote/event.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace seuvote {

struct EventPair {
    Event e;
    Event f;
    friend bool operator==(const EventPair&, const EventPair&) = default;
};

/// Binary choices (E_m, F_m) offered to voters plus the residual events fixed
/// to a (ga) and to b (gb).
struct Dipartition {
    std::vector<EventPair> pairs;
    Event ga;
    Event gb;

    [[nodiscard]] Event cell() const;
    [[nodiscard]] bool has_pair(const EventPair& p) const;
    /// Index of an exact ordered pair, or -1.
    [[nodiscard]] int find_pair(const EventPair& p) const;
    friend bool operator==(const Dipartition&, const Dipartition&) = default;
};

/// One dipartition per level k in [klo, khi].
struct FilterSeq {
    int klo = 1;
    int khi = 1;
    std::vector<Dipartition> levels;

    [[nodiscard]] const Dipartition& at(int k) const { return levels.at(static_cast<std::size_t>(k - klo)); }
    friend bool operator==(const FilterSeq&, const FilterSeq&) = default;
};

struct Diagnostic {
    std::string kind;
    std::string message;
    int level = -1;
    int pair = -1;
    std::vector<StateId> states;
};

using Diagnostics = std::vector<Diagnostic>;

/// Structural problems of one dipartition of the given cell.
Diagnostics check_dipartition(const Dipartition& d, Event cell, const StateSpace* names = nullptr);

/// Adjacency matrix of the relation: both states lie in one E_m union F_m.
std::vector<std::vector<bool>> dipartition_relation(const Dipartition& d, int num_states);

/// Filter conditions: connectivity of the closure of all level relations and
/// the cross-level inclusions for pairs that disappear between levels.
Diagnostics validate_filter(const FilterSeq& seq, Event cell, const StateSpace* names = nullptr);

/// Nested pair (i, j) with collection[i] strictly inside collection[j], if any.
std::optional<std::pair<int, int>> check_non_nested(const std::vector<Event>& collection);

enum class ComponentKind { Trivial, Dyadic, Rich };

struct Component {
    Event support;
    std::vector<Event> events;  // sorted
    ComponentKind kind = ComponentKind::Trivial;
    friend bool operator==(const Component& a, const Component& b) {
        return a.support == b.support && a.events == b.events && a.kind == b.kind;
    }
};

struct Decomposition {
    std::vector<Component> components;  // sorted by lowest state of the support
    friend bool operator==(const Decomposition&, const Decomposition&) = default;
    [[nodiscard]] bool richly_decomposable() const;
};

const char* to_string(ComponentKind k);

/// A decomposition with the most components. Events must be distinct and
/// nonempty. It is unique for non-nested collections. Otherwise some blocks
/// of states miss some events and may join any component equally well; they
/// all join the first component that every event meets.
Decomposition maximal_decomposition(const std::vector<Event>& collection);

/// Oracle: tries every set partition of the ground set against the
/// decomposition equations and returns every decomposition of the largest
/// size. Bounded to 5 states and 16 events.
std::vector<Decomposition> brute_force_decompositions(const std::vector<Event>& collection);

struct TopTriple {
    int first = -1, second = -1, third = -1;  // indices into the collection
    /// Orders follow (123,132,213,231,312,321) over (first, second, third).
    std::vector<Belief> beliefs;
};

struct TopTripleConfig {
    std::uint64_t budget = 10000;
    long denominator_bound = 1000;
    std::uint64_t seed = 0;
};

struct TopTripleResult {
    std::optional<TopTriple> triple;
    std::uint64_t candidates_tried = 0;
};

/// Belief over num_states states, positive on the collection's ground set and
/// zero elsewhere, ranking the triple in the given order above all other events.
bool verify_top_order(const std::vector<Event>& collection, const Belief& p, int j, int k, int l);

/// Throws std::invalid_argument unless the collection is non-nested, has at
/// least three events, and is richly decomposable.
TopTripleResult find_top_triple(const std::vector<Event>& collection, int num_states, const TopTripleConfig& config);

}  // namespace seuvote
