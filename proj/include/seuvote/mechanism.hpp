#pragma once

#include "seuvote/core_model.hpp"
#include "seuvote/factors.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace seuvote {

struct Cell {
    std::string name;
    Event states;
    FactorSpec factor;
    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Declared factorization: one factor per cell of a partition of the states.
struct Mechanism {
    StateSpace states;
    OutcomeSpace outcomes;
    FeasibilityMap feasibility;
    int n = 2;
    std::vector<Cell> cells;

    [[nodiscard]] int num_states() const { return states.size(); }
    friend bool operator==(const Mechanism&, const Mechanism&) = default;
};

using OutcomeSets = std::vector<std::vector<OutcomeId>>;

Diagnostics validate_mechanism(const Mechanism& mech);

struct Evaluation {
    Act act;
    std::vector<int> sections;  // a-supporters per cell, -1 for constant cells
};

Act evaluate_mechanism(const Mechanism& mech, const BallotView& ballots);
Act evaluate_mechanism(const Mechanism& mech, const Profile& profile);
Evaluation evaluate_detailed(const Mechanism& mech, const Profile& profile);

OutcomeSets mechanism_range(const Mechanism& mech);

/// Majority vote between two fixed acts.
struct PairwiseMajority {
    Act f;
    Act g;
    friend bool operator==(const PairwiseMajority&, const PairwiseMajority&) = default;
};

/// Voter 0 picks their favourite act from a menu. Not anonymous; used as a
/// negative control.
struct FirstVoterDictates {
    std::vector<Act> menu;
    friend bool operator==(const FirstVoterDictates&, const FirstVoterDictates&) = default;
};

using RawRule = std::variant<PairwiseMajority, FirstVoterDictates>;

/// Social choice function outside the factor families.
struct RawMechanism {
    StateSpace states;
    OutcomeSpace outcomes;
    FeasibilityMap feasibility;
    int n = 2;
    RawRule rule;
};

Act evaluate_pairwise_majority(const PairwiseMajority& rule, const Profile& profile);
Act evaluate_raw(const RawMechanism& raw, const Profile& profile);
OutcomeSets raw_range(const RawMechanism& raw);

/// Uniform handle over both kinds of social choice function.
struct ScfHandle {
    const StateSpace* states = nullptr;
    const OutcomeSpace* outcomes = nullptr;
    const FeasibilityMap* feasibility = nullptr;
    int n = 0;
    std::function<Act(const Profile&)> evaluate;
    OutcomeSets range;
    const Mechanism* mechanism = nullptr;  // set for declared factorizations
    const RawMechanism* raw = nullptr;
};

ScfHandle handle_of(const Mechanism& mech);
ScfHandle handle_of(const RawMechanism& raw);
// The handle points into its argument.
ScfHandle handle_of(Mechanism&&) = delete;
ScfHandle handle_of(RawMechanism&&) = delete;

}  // namespace seuvote
