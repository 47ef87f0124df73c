#pragma once

#include "seuvote/core_model.hpp"
#include "seuvote/event_algebra.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace seuvote {

/// Monotone 0/1 function of (a-votes, b-votes). Either "1 iff sum >= threshold"
/// or an explicit grid indexed [m_a][m_b].
class HTable {
public:
    static HTable threshold(int s) { HTable h; h.threshold_ = s; return h; }
    static HTable table(std::vector<std::vector<int>> grid) { HTable h; h.grid_ = std::move(grid); return h; }

    [[nodiscard]] bool is_threshold() const { return threshold_.has_value(); }
    [[nodiscard]] int threshold_value() const { return *threshold_; }
    [[nodiscard]] const std::vector<std::vector<int>>& grid() const { return grid_; }
    /// Throws std::out_of_range outside an explicit grid.
    [[nodiscard]] int operator()(int ma, int mb) const;
    [[nodiscard]] bool defined_at(int ma, int mb) const;

    friend bool operator==(const HTable&, const HTable&) = default;

private:
    std::optional<int> threshold_;
    std::vector<std::vector<int>> grid_;
};

struct Quota {
    int ttilde = 1;  // a-supporter votes needed to put a on F
    int that = 1;    // b-supporter votes needed to put a on F
    friend bool operator==(const Quota&, const Quota&) = default;
};

struct ConstantFactor {
    OutcomeId c = 0;
    friend bool operator==(const ConstantFactor&, const ConstantFactor&) = default;
};
struct SimpleFactor {
    OutcomeId a = 0, b = 1;
    int kbar = 1;
    friend bool operator==(const SimpleFactor&, const SimpleFactor&) = default;
};
struct QuasiDictatorialFactor {
    OutcomeId a = 0, b = 1;
    std::vector<Event> menu;
    friend bool operator==(const QuasiDictatorialFactor&, const QuasiDictatorialFactor&) = default;
};
struct DyadicFactor {
    OutcomeId a = 0, b = 1;
    Event e, f;
    int klo = 1, khi = 1;
    HTable h = HTable::threshold(1);
    friend bool operator==(const DyadicFactor&, const DyadicFactor&) = default;
};
struct FilteringFactor {
    OutcomeId a = 0, b = 1;
    FilterSeq filter;
    std::vector<std::vector<Quota>> quotas;  // [k - klo][m]

    [[nodiscard]] const Quota& quota(int k, int m) const {
        return quotas.at(static_cast<std::size_t>(k - filter.klo)).at(static_cast<std::size_t>(m));
    }
    friend bool operator==(const FilteringFactor&, const FilteringFactor&) = default;
};

using FactorSpec = std::variant<ConstantFactor, SimpleFactor, QuasiDictatorialFactor, DyadicFactor, FilteringFactor>;

const char* factor_kind(const FactorSpec& f);
/// (a, b) of a binary factor; nullopt for constants.
std::optional<std::pair<OutcomeId, OutcomeId>> binary_outcomes(const FactorSpec& f);

/// Read-only view of the reported preferences that a factor consults.
class BallotView {
public:
    virtual ~BallotView() = default;
    [[nodiscard]] virtual int num_voters() const = 0;
    /// Whether voter i ranks a above b.
    [[nodiscard]] virtual bool supports(int voter, OutcomeId a, OutcomeId b) const = 0;
    /// Whether voter i puts more probability on e than on f; throws
    /// GenericityViolation on a tie.
    [[nodiscard]] virtual bool prefers(int voter, Event e, Event f) const = 0;
};

/// View over concrete rational preferences.
class ProfileView final : public BallotView {
public:
    explicit ProfileView(const Profile& profile) : profile_(profile) {}
    [[nodiscard]] int num_voters() const override { return profile_.size(); }
    [[nodiscard]] bool supports(int voter, OutcomeId a, OutcomeId b) const override;
    [[nodiscard]] bool prefers(int voter, Event e, Event f) const override;

private:
    const Profile& profile_;
};

Diagnostics validate_factor(const FactorSpec& factor, Event cell, int n, const FeasibilityMap& feasibility,
                            const StateSpace* names = nullptr);

struct IsoViolation {
    int level = 0;       // k
    int pair_lo = -1;    // m at level k
    int pair_hi = -1;    // m' at level k+1
    std::string rule;    // "intersection" or "persisting-pair"
    std::string quota;   // which quota is off
    std::string message;
};

/// Empty when the quotas meet both iso-filtering rules.
std::vector<IsoViolation> is_iso_filtering(const FilteringFactor& factor, const StateSpace* names = nullptr);

/// Sub-act on `cell` (other states unassigned) over num_states states.
Act evaluate_factor(const FactorSpec& factor, Event cell, int num_states, const BallotView& ballots);
Act evaluate_factor(const FactorSpec& factor, Event cell, const Profile& profile);

/// Per-state reachable outcomes, indexed by state (empty off the cell).
std::vector<std::vector<OutcomeId>> factor_range(const FactorSpec& factor, Event cell, int num_states, int n);

/// Event comparisons a factor may evaluate, in a fixed order.
std::vector<EventPair> factor_comparisons(const FactorSpec& factor);

}  // namespace seuvote
