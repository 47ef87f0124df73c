#include "oracles.hpp"
#include "seuvote/axioms.hpp"
#include "seuvote/fixtures.hpp"
#include "seuvote/mechanism.hpp"
#include "seuvote/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace seuvote;

TEST(Mechanism, FixturesValidate) {
    for (const auto& name : fixtures::mechanism_names()) EXPECT_TRUE(validate_mechanism(fixtures::mechanism(name)).empty()) << name;
}

TEST(Mechanism, PartitionProblemsAreReported) {
    Mechanism m = fixtures::reunion_phi();
    m.cells[1].states = Event{1, 2};  // w is left out
    const auto d = validate_mechanism(m);
    ASSERT_FALSE(d.empty());
    EXPECT_EQ(d.front().kind, "partition");
}

TEST(Mechanism, EvaluationMatchesConditionedOracle) {
    for (const auto& name : fixtures::mechanism_names()) {
        const Mechanism m = fixtures::mechanism(name);
        for (const auto& p : draw_profiles(handle_of(m), 200, 91)) EXPECT_EQ(evaluate_mechanism(m, p), oracle::mechanism(m, p)) << name;
    }
}

TEST(Mechanism, DetailedEvaluationReportsSections) {
    const Mechanism m = fixtures::reunion_phi_prime();
    for (const auto& p : draw_profiles(handle_of(m), 50, 4)) {
        const Evaluation e = evaluate_detailed(m, p);
        EXPECT_EQ(e.act, evaluate_mechanism(m, p));
        EXPECT_EQ(e.sections[0], -1);
        EXPECT_EQ(e.sections[1], static_cast<int>(oracle::supporters_of(p, 0, 1).size()));
        EXPECT_EQ(e.sections[2], static_cast<int>(oracle::supporters_of(p, 2, 4).size()));
    }
}

TEST(Mechanism, RangeOfReunionPhiPrime) {
    const auto r = mechanism_range(fixtures::reunion_phi_prime());
    const auto& X = fixtures::reunion_phi_prime().outcomes;
    const auto ids = [&](std::initializer_list<const char*> labels) {
        std::vector<OutcomeId> v;
        for (auto l : labels) v.push_back(X.index(l));
        std::sort(v.begin(), v.end());
        return v;
    };
    EXPECT_EQ(r[3], ids({"D"}));         // s
    EXPECT_EQ(r[0], ids({"B", "D"}));    // c
    EXPECT_EQ(r[1], ids({"M", "V"}));
    EXPECT_EQ(r[2], ids({"M", "V"}));
    EXPECT_EQ(r[4], ids({"M", "V"}));
}

TEST(Mechanism, PermutingVotersNeverChangesTheAct) {
    const Mechanism m = fixtures::example3();
    Rng rng(6);
    for (auto p : draw_profiles(handle_of(m), 60, 8)) {
        const Act base = evaluate_mechanism(m, p);
        std::shuffle(p.voters.begin(), p.voters.end(), rng.engine());
        EXPECT_EQ(evaluate_mechanism(m, p), base);
    }
}

TEST(RawRules, MajorityMatchesOracle) {
    const RawMechanism raw = fixtures::majority_fixture();
    const auto& rule = std::get<PairwiseMajority>(raw.rule);
    for (const auto& p : draw_profiles(handle_of(raw), 200, 15)) EXPECT_EQ(evaluate_raw(raw, p), oracle::majority(rule, p));
    const auto r = raw_range(raw);
    EXPECT_EQ(r[1], (std::vector<OutcomeId>{2, 3}));
}

TEST(RawRules, FirstVoterDictatesPicksTheirFavourite) {
    RawMechanism raw = fixtures::majority_fixture();
    const auto maj = std::get<PairwiseMajority>(raw.rule);
    raw.rule = FirstVoterDictates{{maj.f, maj.g}};
    for (const auto& p : draw_profiles(handle_of(raw), 50, 2)) {
        const Act want = oracle::expected_utility(maj.f, p[0]) > oracle::expected_utility(maj.g, p[0]) ? maj.f : maj.g;
        EXPECT_EQ(evaluate_raw(raw, p), want);
    }
}
