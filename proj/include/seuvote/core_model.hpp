#pragma once

#include "seuvote/event.hpp"
#include "seuvote/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace seuvote {

/// Raised when an evaluated comparison ties, which the model rules out.
class GenericityViolation : public std::runtime_error {
public:
    GenericityViolation(int voter, std::string what_tied)
        : std::runtime_error("genericity violation for voter " + std::to_string(voter) + ": " + what_tied),
          voter_(voter), detail_(std::move(what_tied)) {}
    [[nodiscard]] int voter() const { return voter_; }
    [[nodiscard]] const std::string& detail() const { return detail_; }

private:
    int voter_;
    std::string detail_;
};

/// Mismatched state or outcome dimensions between two objects.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Per-state outcome assignment. kUnassigned marks states outside a sub-act's domain.
struct Act {
    static constexpr OutcomeId kUnassigned = -1;
    std::vector<OutcomeId> assignment;

    Act() = default;
    explicit Act(std::vector<OutcomeId> a) : assignment(std::move(a)) {}
    static Act constant(int num_states, OutcomeId x) { return Act(std::vector<OutcomeId>(static_cast<std::size_t>(num_states), x)); }
    static Act unassigned(int num_states) { return constant(num_states, kUnassigned); }

    [[nodiscard]] int size() const { return static_cast<int>(assignment.size()); }
    [[nodiscard]] OutcomeId operator[](StateId s) const { return assignment.at(static_cast<std::size_t>(s)); }
    OutcomeId& operator[](StateId s) { return assignment.at(static_cast<std::size_t>(s)); }
    /// States where the act selects x.
    [[nodiscard]] Event where(OutcomeId x) const;
    void assign(Event e, OutcomeId x) { e.for_each([&](StateId s) { (*this)[s] = x; }); }

    friend bool operator==(const Act&, const Act&) = default;
    friend auto operator<=>(const Act&, const Act&) = default;
};

/// Available outcomes per state.
class FeasibilityMap {
public:
    FeasibilityMap() = default;
    explicit FeasibilityMap(std::vector<std::vector<OutcomeId>> per_state);
    static FeasibilityMap unconstrained(int num_states, int num_outcomes);

    [[nodiscard]] int num_states() const { return static_cast<int>(sets_.size()); }
    [[nodiscard]] const std::vector<OutcomeId>& available(StateId s) const { return sets_.at(static_cast<std::size_t>(s)); }
    [[nodiscard]] bool allows(StateId s, OutcomeId x) const;
    [[nodiscard]] bool feasible(const Act& act) const;

    friend bool operator==(const FeasibilityMap&, const FeasibilityMap&) = default;

private:
    std::vector<std::vector<OutcomeId>> sets_;  // sorted
};

/// Injective utility over outcomes with min 0 and max 1.
class Valuation {
public:
    Valuation() = default;
    /// Throws std::invalid_argument unless injective and normalized.
    explicit Valuation(std::vector<Rational> values);

    [[nodiscard]] int size() const { return static_cast<int>(values_.size()); }
    [[nodiscard]] const Rational& operator[](OutcomeId x) const { return values_.at(static_cast<std::size_t>(x)); }
    [[nodiscard]] const std::vector<Rational>& values() const { return values_; }
    [[nodiscard]] bool prefers(OutcomeId x, OutcomeId y) const { return (*this)[x] > (*this)[y]; }

    friend bool operator==(const Valuation&, const Valuation&) = default;

private:
    std::vector<Rational> values_;
};

/// Probability over states. Mass is positive on the support and zero outside;
/// full-space beliefs have support = all states.
class Belief {
public:
    Belief() = default;
    /// Throws std::invalid_argument unless masses on the support are positive,
    /// zero elsewhere, and sum to 1.
    Belief(std::vector<Rational> mass, Event support);
    /// Full-support belief.
    explicit Belief(std::vector<Rational> mass);
    static Belief uniform(int num_states);

    [[nodiscard]] int num_states() const { return static_cast<int>(mass_.size()); }
    [[nodiscard]] Event support() const { return support_; }
    [[nodiscard]] const Rational& operator[](StateId s) const { return mass_.at(static_cast<std::size_t>(s)); }
    [[nodiscard]] const std::vector<Rational>& masses() const { return mass_; }
    [[nodiscard]] Rational prob(Event e) const;
    /// Sign of p(e) - p(f).
    [[nodiscard]] int compare(Event e, Event f) const;

    friend bool operator==(const Belief&, const Belief&) = default;

private:
    std::vector<Rational> mass_;
    Event support_;
};

struct Preference {
    Valuation valuation;
    Belief belief;
    friend bool operator==(const Preference&, const Preference&) = default;
};

struct Profile {
    std::vector<Preference> voters;

    Profile() = default;
    explicit Profile(std::vector<Preference> v);
    [[nodiscard]] int size() const { return static_cast<int>(voters.size()); }
    [[nodiscard]] const Preference& operator[](int i) const { return voters.at(static_cast<std::size_t>(i)); }
    Preference& operator[](int i) { return voters.at(static_cast<std::size_t>(i)); }
    friend bool operator==(const Profile&, const Profile&) = default;
};

using VoterSet = std::vector<int>;

struct Supporters {
    VoterSet of_a;
    VoterSet of_b;
};

enum class Tri { False, True, Inconclusive };

Rational expected_utility(const Act& act, const Preference& pref);

/// Belief renormalized to f; the result has support f.
Belief conditional_belief(const Belief& belief, Event f);

/// Joins sub-acts whose events partition a space of num_states states.
Act concat(std::span<const std::pair<Event, Act>> subacts, int num_states);

Supporters supporters(const Profile& profile, OutcomeId a, OutcomeId b);

/// Number of voters in s whose belief puts more mass on e than on f.
int eta(const Profile& profile, std::span<const int> s, Event e, Event f);

/// Belief with total theta on a and 1 - theta on its complement, keeping
/// both conditionals.
Belief theta_mix(const Belief& belief, Event a, const Rational& theta);

/// A-lexicographic test; exhaustive when |X|^|Omega| <= budget, otherwise a
/// sufficient bound that may come back inconclusive.
Tri is_lexicographic(const Preference& pref, Event a, std::uint64_t budget);

inline constexpr int kDefaultSubsetBound = 20;

/// True iff every gap between distinct sub-events of c exceeds the mass outside c.
bool is_dominant(const Belief& belief, Event c, int max_bits = kDefaultSubsetBound);

/// C-dominant belief whose conditionals on c and on its complement are the
/// given ones. Both inputs are beliefs over the same state space.
Belief make_dominant(int num_states, Event c, const Belief& on_c, const Belief& off_c,
                     int max_bits = kDefaultSubsetBound);

OutcomeId tau_top(const Valuation& valuation, std::span<const OutcomeId> options);

struct EventComparison {
    int voter;
    Event e;
    Event f;
};
struct OutcomeComparison {
    int voter;
    OutcomeId x;
    OutcomeId y;
};

struct GenericityReport {
    struct Violation {
        int voter;
        std::string kind;  // "event", "outcome", "belief-injectivity"
        Event e, f;
        OutcomeId x = -1, y = -1;
    };
    std::vector<Violation> violations;
    [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Reports every listed comparison that ties. full_bound > 0 also checks
/// subset-sum injectivity of each belief when the space has at most that many states.
GenericityReport check_genericity(const Profile& profile, std::span<const EventComparison> events,
                                  std::span<const OutcomeComparison> outcomes, int full_bound = 0);

struct ProfileConfig {
    int n = 2;
    int num_states = 2;
    int num_outcomes = 2;
    long denominator_bound = 1000;
    std::uint64_t seed = 0;
    int resample_budget = 1000;
};

/// Seeded random profile, resampled until every listed comparison is strict
/// (voter fields in the comparison lists are ignored; every voter is checked).
Profile gen_profile(const ProfileConfig& config, std::span<const EventComparison> events = {},
                    std::span<const OutcomeComparison> outcomes = {});

class Rng;
Valuation random_valuation(Rng& rng, int num_outcomes, long denominator_bound);
Belief random_belief(Rng& rng, int num_states, long denominator_bound);
Belief random_belief_on(Rng& rng, int num_states, Event support, long denominator_bound);

}  // namespace seuvote
