#include "oracles.hpp"
#include "seuvote/axioms.hpp"
#include "seuvote/fixtures.hpp"

#include <gtest/gtest.h>

using namespace seuvote;

namespace {

DeviationQuery example3_query(const Mechanism& m) {
    const OutcomeId a = m.outcomes.index("a"), b = m.outcomes.index("b");
    DeviationQuery q;
    q.truthful_ranks = std::pair{b, a};
    q.misreport_ranks = std::pair{a, b};
    const Event w6{m.states.index("w6")};
    q.truthful_belief.push_back({w6, Event::full(m.num_states()) - w6});
    return q;
}

}  // namespace

TEST(Profiles, DrawIsDeterministicAndGeneric) {
    const Mechanism m = fixtures::example3();
    const auto h = handle_of(m);
    const auto a = draw_profiles(h, 20, 5);
    EXPECT_EQ(a, draw_profiles(h, 20, 5));
    EXPECT_NE(a, draw_profiles(h, 20, 6));
    for (const auto& p : a) {
        EXPECT_EQ(p.size(), m.n);
        EXPECT_NO_THROW(evaluate_mechanism(m, p));
    }
}

TEST(Anonymity, DictatorshipIsCaught) {
    RawMechanism raw = fixtures::majority_fixture();
    const auto maj = std::get<PairwiseMajority>(raw.rule);
    raw.rule = FirstVoterDictates{{maj.f, maj.g}};
    const auto h = handle_of(raw);
    const auto r = check_anonymity(h, draw_profiles(h, 50, 3));
    ASSERT_EQ(r.verdict, Verdict::Fail);
    ASSERT_TRUE(r.witness);
    EXPECT_NE(r.witness->original, r.witness->swapped);
    EXPECT_TRUE(replay(h, *r.witness).ok);
}

TEST(Anonymity, FactorizedMechanismsPass) {
    for (const auto& name : fixtures::mechanism_names()) {
        const Mechanism m = fixtures::mechanism(name);
        const auto h = handle_of(m);
        EXPECT_EQ(check_anonymity(h, draw_profiles(h, 20, 8)).verdict, Verdict::Pass) << name;
    }
}

TEST(RangeUnanimity, RangeTopPicksFavourites) {
    const OutcomeSets range{{0, 1}, {2}, {1, 2}};
    const Valuation v({Rational(0), Rational(1), Rational(1, 2)});
    EXPECT_EQ(range_top(range, v), Act({1, 2, 1}));
}

TEST(RangeUnanimity, MajorityFixtureFailsWithReplayableWitness) {
    const RawMechanism raw = fixtures::majority_fixture();
    const auto h = handle_of(raw);
    const auto r = check_range_unanimity(h, 20, 1);
    ASSERT_EQ(r.verdict, Verdict::Fail);
    ASSERT_TRUE(r.witness);
    EXPECT_NE(r.witness->target, r.witness->selected);
    for (const auto& v : r.witness->profile.voters) EXPECT_EQ(range_top(h.range, v.valuation), r.witness->target);
    EXPECT_TRUE(replay(h, *r.witness).ok);
}

TEST(RangeUnanimity, ReunionMechanismsPass) {
    for (const auto& m : {fixtures::reunion_phi(), fixtures::reunion_phi_prime()}) {
        const auto r = check_range_unanimity(handle_of(m), 30, 2);
        EXPECT_EQ(r.verdict, Verdict::Pass);
        EXPECT_GT(r.constructed, 0U);
    }
}

TEST(StrategyProofness, ExampleTwoIsStrategyProof) {
    const auto r = search_manipulation_exhaustive(fixtures::example2(), {.budget = 1'000'000});
    EXPECT_EQ(r.verdict, Verdict::Pass);
    EXPECT_FALSE(r.witness);
}

TEST(StrategyProofness, ExampleTwoWithSwappedQuotasIsManipulable) {
    Mechanism m = fixtures::example2();
    auto& f = std::get<FilteringFactor>(m.cells[0].factor);
    f.quotas[1] = f.quotas[0];  // both levels (ttilde=2, that=1)
    const auto r = search_manipulation_exhaustive(m, {.budget = 1'000'000});
    ASSERT_EQ(r.verdict, Verdict::Fail);
    ASSERT_TRUE(r.witness);
    EXPECT_GT(r.witness->deviated_eu, r.witness->truthful_eu);
    EXPECT_TRUE(replay(handle_of(m), *r.witness).ok);
}

TEST(StrategyProofness, ExampleThreeQueryFindsWitness) {
    const Mechanism m = fixtures::example3();
    const auto r = search_manipulation_exhaustive(m, {.budget = 50'000'000, .query = example3_query(m)});
    ASSERT_EQ(r.verdict, Verdict::Fail);
    const auto& w = *r.witness;
    const OutcomeId a = m.outcomes.index("a"), b = m.outcomes.index("b");
    const auto& truth = w.profile[w.deviator];
    EXPECT_TRUE(truth.valuation.prefers(b, a));
    EXPECT_TRUE(w.misreport.valuation.prefers(a, b));
    EXPECT_GT(truth.belief[m.states.index("w6")], Rational(1, 2));
    EXPECT_EQ(oracle::expected_utility(w.truthful_act, truth), w.truthful_eu);
    EXPECT_EQ(oracle::expected_utility(w.deviated_act, truth), w.deviated_eu);
    EXPECT_GT(w.deviated_eu, w.truthful_eu);
    EXPECT_TRUE(replay(handle_of(m), w).ok);
}

TEST(StrategyProofness, ParallelSearchIsDeterministic) {
    const Mechanism m = fixtures::example3();
    const auto q = example3_query(m);
    const auto one = search_manipulation_exhaustive(m, {.budget = 50'000'000, .jobs = 1, .query = q});
    const auto three = search_manipulation_exhaustive(m, {.budget = 50'000'000, .jobs = 3, .query = q});
    ASSERT_TRUE(one.witness && three.witness);
    EXPECT_EQ(one.witness->profile, three.witness->profile);
    EXPECT_EQ(one.witness->misreport, three.witness->misreport);
    EXPECT_EQ(one.witness->deviator, three.witness->deviator);
}

TEST(StrategyProofness, BudgetIsReported) {
    const auto r = search_manipulation_exhaustive(fixtures::example4ii(), {.budget = 50});
    EXPECT_EQ(r.verdict, Verdict::ExhaustedBudget);
    EXPECT_FALSE(r.witness);
    EXPECT_GT(r.stats.estimated_work, 50.0L);
}

TEST(StrategyProofness, SampledSearchPassesOnReunion) {
    const Mechanism m = fixtures::reunion_phi();
    const auto r = search_manipulation_sampled(handle_of(m), {.profiles = 40, .seed = 3, .budget = 10'000'000});
    EXPECT_EQ(r.verdict, Verdict::Pass);
    EXPECT_EQ(r.stats.profiles, 40U);
}

TEST(StrategyProofness, SampledSearchFindsDictatorshipSafe) {
    // the first voter always gets their favourite, everyone else is powerless
    RawMechanism raw = fixtures::majority_fixture();
    const auto maj = std::get<PairwiseMajority>(raw.rule);
    raw.rule = FirstVoterDictates{{maj.f, maj.g}};
    const auto r = search_manipulation_sampled(handle_of(raw), {.profiles = 30, .seed = 4, .budget = 10'000'000});
    EXPECT_EQ(r.verdict, Verdict::Pass);
}

TEST(Replay, TamperedWitnessIsRejected) {
    const Mechanism m = fixtures::example3();
    auto w = *search_manipulation_exhaustive(m, {.budget = 50'000'000, .query = example3_query(m)}).witness;
    w.deviated_eu = w.truthful_eu;
    EXPECT_FALSE(replay(handle_of(m), w).ok);
}

TEST(Verify, RequiresSeedAndBudget) {
    const Mechanism m = fixtures::reunion_phi();
    const auto h = handle_of(m);
    EXPECT_THROW(verify(h, {.budget = 10}), std::invalid_argument);
    EXPECT_THROW(verify(h, {.seed = 1}), std::invalid_argument);
}

TEST(Verify, MajorityFixtureFailsOnlyRangeUnanimity) {
    const RawMechanism raw = fixtures::majority_fixture();
    const auto h = handle_of(raw);
    const auto r = verify(h, {.budget = 50'000'000, .seed = 1, .anonymity_profiles = 30, .range_trials = 20, .sp_profiles = 30});
    EXPECT_EQ(r.anonymity.verdict, Verdict::Pass);
    EXPECT_EQ(r.range_unanimity.verdict, Verdict::Fail);
    EXPECT_EQ(r.strategy_proofness.verdict, Verdict::Pass);
    EXPECT_EQ(r.overall(), Verdict::Fail);
}
