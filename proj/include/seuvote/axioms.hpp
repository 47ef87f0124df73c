#pragma once

#include "seuvote/mechanism.hpp"
#include "seuvote/signature.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace seuvote {

enum class Verdict { Pass, Fail, ExhaustedBudget };
const char* to_string(Verdict v);

struct ManipulationWitness {
    Profile profile;
    int deviator = 0;
    Preference misreport;
    Rational truthful_eu;
    Rational deviated_eu;
    Act truthful_act;
    Act deviated_act;
};

struct RangeUnanimityWitness {
    Profile profile;
    Act target;    // every voter's range-top act
    Act selected;  // what the mechanism chose instead
};

struct AnonymityWitness {
    Profile profile;
    int first = 0;
    int second = 1;
    Act original;
    Act swapped;
};

/// Profiles drawn from the seed, each generic for the social choice function.
std::vector<Profile> draw_profiles(const ScfHandle& scf, int count, std::uint64_t seed, long denominator_bound = 1000);

struct AnonymityResult {
    Verdict verdict = Verdict::Pass;
    std::uint64_t checks = 0;
    std::optional<AnonymityWitness> witness;
};

AnonymityResult check_anonymity(const ScfHandle& scf, const std::vector<Profile>& profiles);

struct RangeUnanimityResult {
    Verdict verdict = Verdict::Pass;
    std::uint64_t constructed = 0;
    std::uint64_t sampled = 0;
    std::uint64_t sampled_with_top = 0;
    std::optional<RangeUnanimityWitness> witness;
};

/// Per-voter act picking the favourite range outcome in each state.
Act range_top(const OutcomeSets& range, const Valuation& v);

/// Builds `trials` profiles sharing a range-top act (alternating near-uniform
/// common beliefs and independent ones), then `trials` generic sampled profiles.
RangeUnanimityResult check_range_unanimity(const ScfHandle& scf, int trials, std::uint64_t seed);

struct AchievableAct {
    Act act;
    int type = -1;  // catalog index of a report reaching it
    Preference report;
};

struct AchievableSet {
    std::vector<AchievableAct> acts;  // sorted by act
    int unrealizable_signatures = 0;
};

AchievableSet achievable_acts(const Mechanism& mech, const TypeCatalog& catalog, const Profile& profile, int deviator);

struct SearchStats {
    std::uint64_t profiles = 0;
    std::uint64_t evaluations = 0;
    std::uint64_t lp_solves = 0;
    std::uint64_t work = 0;
    long double estimated_work = 0;
};

struct SearchResult {
    Verdict verdict = Verdict::Pass;
    std::string mode;
    SearchStats stats;
    std::optional<ManipulationWitness> witness;
};

struct SampledSearchConfig {
    int profiles = 500;
    std::uint64_t seed = 0;
    std::uint64_t budget = 0;
    long denominator_bound = 1000;
};

SearchResult search_manipulation_sampled(const ScfHandle& scf, const SampledSearchConfig& config);

/// Restricts an exhaustive search to deviations of a given shape.
struct DeviationQuery {
    /// Deviator truly ranks first above second in this cell's pair.
    std::optional<std::pair<OutcomeId, OutcomeId>> truthful_ranks;
    /// Reported ranking of the pair.
    std::optional<std::pair<OutcomeId, OutcomeId>> misreport_ranks;
    /// Extra strict constraints p(e) > p(f) on the deviator's true belief;
    /// each pair must lie inside one cell.
    std::vector<EventPair> truthful_belief;
};

struct ExhaustiveSearchConfig {
    std::uint64_t budget = 0;
    int jobs = 1;
    std::optional<DeviationQuery> query;
};

/// Enumerates every multiset of the other voters' types and every
/// (true type, reported type) pair for the deviator. Stops at the first
/// witness in (multiset, true type, reported type) order.
SearchResult search_manipulation_exhaustive(const Mechanism& mech, const ExhaustiveSearchConfig& config);

struct ReplayResult {
    bool ok = false;
    std::string message;
};

ReplayResult replay(const ScfHandle& scf, const ManipulationWitness& w);
ReplayResult replay(const ScfHandle& scf, const RangeUnanimityWitness& w);
ReplayResult replay(const ScfHandle& scf, const AnonymityWitness& w);

enum class SearchMode { Sampled, Exhaustive };

struct VerifyConfig {
    std::optional<std::uint64_t> budget;
    std::optional<std::uint64_t> seed;
    int anonymity_profiles = 200;
    int range_trials = 200;
    int sp_profiles = 500;
    SearchMode mode = SearchMode::Sampled;
    int jobs = 1;
};

struct VerificationReport {
    std::uint64_t seed = 0;
    std::string mode;
    AnonymityResult anonymity;
    RangeUnanimityResult range_unanimity;
    SearchResult strategy_proofness;
    [[nodiscard]] Verdict overall() const;
};

/// Throws std::invalid_argument if budget or seed is missing.
VerificationReport verify(const ScfHandle& scf, const VerifyConfig& config);

}  // namespace seuvote
