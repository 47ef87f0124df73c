#pragma once

#include "seuvote/factors.hpp"
#include "seuvote/mechanism.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace seuvote {

/// The finitely many ordinal facts a mechanism reads from one report: the
/// ranking of each binary outcome pair and the sign of each event comparison.
struct SignatureLayout {
    struct CellLayout {
        int cell = -1;              // index into Mechanism::cells
        Event states;
        int outcome_pair = -1;      // index into outcome_pairs, -1 for constants
        std::vector<EventPair> comparisons;
    };
    int num_states = 0;
    int num_outcomes = 0;
    std::vector<std::pair<OutcomeId, OutcomeId>> outcome_pairs;  // (lower id, higher id)
    std::vector<CellLayout> cells;

    [[nodiscard]] int pair_index(OutcomeId a, OutcomeId b) const;
};

SignatureLayout make_layout(const Mechanism& mech);

/// orientation bit j set: outcome_pairs[j].first ranks above .second.
/// patterns[c] bit i set: p(E_i) > p(F_i) for comparison i of cell c.
struct VoterType {
    std::uint32_t orientation = 0;
    std::vector<std::uint32_t> patterns;
    friend bool operator==(const VoterType&, const VoterType&) = default;
    friend auto operator<=>(const VoterType&, const VoterType&) = default;
};

/// Throws GenericityViolation if the preference ties a compared pair.
VoterType signature_of(const SignatureLayout& layout, const Preference& pref);

/// Ballots given as voter types.
class SignatureView final : public BallotView {
public:
    SignatureView(const SignatureLayout& layout, std::span<const VoterType* const> voters)
        : layout_(layout), voters_(voters) {}
    [[nodiscard]] int num_voters() const override { return static_cast<int>(voters_.size()); }
    [[nodiscard]] bool supports(int voter, OutcomeId a, OutcomeId b) const override;
    [[nodiscard]] bool prefers(int voter, Event e, Event f) const override;

private:
    const SignatureLayout& layout_;
    std::span<const VoterType* const> voters_;
};

/// Strict rows over the states of `cell` (in state order) expressing a
/// comparison pattern.
std::vector<std::vector<Rational>> pattern_rows(const SignatureLayout::CellLayout& cell, std::uint32_t pattern);

/// Row for p(e) - p(f) over the states of `cell`.
std::vector<Rational> difference_row(Event cell, Event e, Event f);

/// Every realizable voter type with a concrete representative.
class TypeCatalog {
public:
    /// Throws std::length_error if a cell has more than max_comparisons comparisons.
    explicit TypeCatalog(const SignatureLayout& layout, int max_comparisons = 16);

    [[nodiscard]] const SignatureLayout& layout() const { return layout_; }
    [[nodiscard]] int size() const { return static_cast<int>(types_.size()); }
    [[nodiscard]] const VoterType& type(int i) const { return types_.at(static_cast<std::size_t>(i)); }
    [[nodiscard]] const std::vector<VoterType>& types() const { return types_; }
    /// Index of a type, or -1 if it is not realizable.
    [[nodiscard]] int index_of(const VoterType& t) const;
    /// A concrete preference with this signature.
    [[nodiscard]] Preference realize(int i) const;
    /// Linear-extension valuation for an orientation mask.
    [[nodiscard]] Valuation valuation_for(std::uint32_t orientation) const;
    /// Cell-conditional point (indexed by full state id, zero off the cell).
    [[nodiscard]] const std::vector<Rational>& cell_point(int cell, std::uint32_t pattern) const;
    [[nodiscard]] int unrealizable_patterns() const { return unrealizable_; }
    [[nodiscard]] const std::vector<std::uint32_t>& orientations() const { return orientations_; }
    [[nodiscard]] const std::vector<std::uint32_t>& patterns(int cell) const { return patterns_.at(static_cast<std::size_t>(cell)); }

private:
    SignatureLayout layout_;
    std::vector<std::uint32_t> orientations_;
    std::vector<std::vector<std::uint32_t>> patterns_;
    std::vector<std::vector<std::vector<Rational>>> points_;  // [cell][pattern slot]
    std::vector<VoterType> types_;
    int unrealizable_ = 0;
};

/// Whether an orientation mask over the outcome pairs is acyclic.
bool orientation_acyclic(const SignatureLayout& layout, std::uint32_t orientation);

}  // namespace seuvote
