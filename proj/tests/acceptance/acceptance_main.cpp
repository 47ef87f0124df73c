// One line per acceptance criterion. Exit status is nonzero if any fails.

#include "oracles.hpp"
#include "seuvote/axioms.hpp"
#include "seuvote/event_algebra.hpp"
#include "seuvote/factors.hpp"
#include "seuvote/fixtures.hpp"
#include "seuvote/json_io.hpp"
#include "seuvote/rng.hpp"
#include "seuvote/specfmt.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace seuvote;

namespace {

// time limits in seconds
constexpr double kLimitFilters = 1.0;
constexpr double kLimitIso = 1.0;
constexpr double kLimitExampleThree = 60.0;
constexpr double kLimitSweep = 60.0;
constexpr double kLimitReunion = 120.0;
constexpr double kLimitMajority = 10.0;
constexpr double kLimitTopTriples = 30.0;

constexpr std::uint64_t kSearchBudget = 50'000'000;
constexpr std::uint64_t kTopTripleBudget = 10'000;
constexpr int kFuzzCases = 10'000;

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> problems;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            problems.push_back(what);
        }
    }
};

int failures = 0;

void run(int number, const char* title, double limit, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit > 0) out.require(secs < limit, "took " + std::to_string(secs) + " s");
    if (!out.pass) ++failures;
    std::printf("criterion %d %s: %s (%.2f s) %s\n", number, title, out.pass ? "PASS" : "FAIL", secs, out.detail.c_str());
    for (const auto& p : out.problems) std::printf("    %s\n", p.c_str());
    std::fflush(stdout);
}

const NamedFilter& named(const FilterDocument& doc, const std::string& name) {
    for (const auto& f : doc.filters)
        if (f.name == name) return f;
    throw std::invalid_argument("no filter " + name);
}

bool contains(const std::vector<StateId>& v, StateId s) { return std::find(v.begin(), v.end(), s) != v.end(); }

void filters(Outcome& out) {
    const FilterDocument doc = fixtures::example1_filters();
    const auto& S = doc.states;
    const Event cell = Event::full(S.size());

    out.require(validate_filter(named(doc, "c1-c2-c3").filter, cell).empty(), "c1-c2-c3 rejected");

    const auto two = validate_filter(named(doc, "c1-c2").filter, cell);
    out.require(!two.empty() && two.front().kind == "disconnected", "c1-c2 not rejected as disconnected");
    if (!two.empty())
        out.require(contains(two.front().states, S.index("w1")) || contains(two.front().states, S.index("w7")),
                    "disconnected pair names neither w1 nor w7");

    const auto bar = validate_filter(named(doc, "c1-c2-c3bar").filter, cell, &S);
    const auto& level2 = named(doc, "c1-c2-c3bar").filter.at(2);
    out.require(bar.size() == 1 && bar.front().kind == "inclusion", "c1-c2-c3bar not rejected by a single inclusion failure");
    if (!bar.empty()) {
        const auto& d = bar.front();
        const bool cites_pair = d.level == 2 && d.pair >= 0 &&
                                level2.pairs[static_cast<std::size_t>(d.pair)] == EventPair{Event{S.index("w2")}, Event{S.index("w3")}};
        out.require(cites_pair, "inclusion failure does not cite the (w2,w3) pair of level 2");
        out.require(d.states == std::vector<StateId>{S.index("w3")}, "inclusion failure does not name w3 outside Ga of level 3");
        out.detail = d.message;
    }
}

void iso(Outcome& out) {
    const Mechanism m3 = fixtures::example3();
    const auto& f3 = std::get<FilteringFactor>(m3.cells.front().factor);
    const auto v = is_iso_filtering(f3, &m3.states);
    out.require(!v.empty(), "example 3 accepted");
    if (!v.empty()) {
        const auto& first = v.front();
        out.require(first.level == 1, "first violation not at levels (1,2)");
        const auto& pairs2 = f3.filter.at(2).pairs;
        const bool involves_w1 = first.pair_hi >= 0 && first.pair_hi < static_cast<int>(pairs2.size()) &&
                                 pairs2[static_cast<std::size_t>(first.pair_hi)].f == Event{m3.states.index("w1")};
        out.require(involves_w1, "violation does not involve F={w1} at level 2");
        out.detail = first.message;
    }
    const Mechanism m4 = fixtures::example4ii();
    out.require(is_iso_filtering(std::get<FilteringFactor>(m4.cells.front().factor)).empty(), "example 4-(ii) rejected");
}

void example_three(Outcome& out) {
    const Mechanism m = fixtures::example3();
    const auto h = handle_of(m);
    const OutcomeId a = m.outcomes.index("a"), b = m.outcomes.index("b");
    const StateId w6 = m.states.index("w6");
    DeviationQuery q;
    q.truthful_ranks = std::pair{b, a};
    q.misreport_ranks = std::pair{a, b};
    q.truthful_belief.push_back({Event::singleton(w6), Event::full(m.num_states()) - Event::singleton(w6)});

    const auto r = search_manipulation_exhaustive(m, {.budget = kSearchBudget, .jobs = 1, .query = q});
    out.require(m.n == 10 && m.num_states() == 7, "fixture is not n=10 over 7 states");
    out.require(r.verdict == Verdict::Fail && r.witness.has_value(), std::string("verdict ") + to_string(r.verdict));
    if (!r.witness) return;
    const auto& w = *r.witness;
    const auto& truth = w.profile[w.deviator];
    out.require(truth.valuation.prefers(b, a), "deviator is not a b-supporter");
    out.require(truth.belief[w6] > Rational(1, 2), "deviator has p(w6) <= 1/2");
    out.require(w.misreport.valuation.prefers(a, b), "misreport does not rank a over b");
    out.require(w.deviated_eu > w.truthful_eu, "no strict gain");
    out.require(oracle::expected_utility(w.truthful_act, truth) == w.truthful_eu &&
                    oracle::expected_utility(w.deviated_act, truth) == w.deviated_eu,
                "utilities disagree with the oracle");
    out.require(oracle::mechanism(m, w.profile) == w.truthful_act, "truthful act disagrees with the oracle");
    Profile deviated = w.profile;
    deviated[w.deviator] = w.misreport;
    out.require(oracle::mechanism(m, deviated) == w.deviated_act, "deviated act disagrees with the oracle");

    const auto j = io::to_json(w, m.states, m.outcomes);
    const auto back = io::manipulation_witness_from(io::json::parse(j.dump()), m.states, m.outcomes);
    out.require(io::to_json(back, m.states, m.outcomes).dump() == j.dump(), "JSON round trip changes the witness");
    const auto rep = replay(h, back);
    out.require(rep.ok, "replay: " + rep.message);

    std::ostringstream d;
    d << "deviator " << w.deviator << ", p(w6)=" << truth.belief[w6] << ", EU " << w.truthful_eu << " -> " << w.deviated_eu
      << ", work " << r.stats.work;
    out.detail = d.str();
}

Event relabel(Event e, const std::array<int, 3>& perm) {
    Event out;
    e.for_each([&](StateId s) { out.insert(perm[static_cast<std::size_t>(s)]); });
    return out;
}

void sweep(Outcome& out) {
    const Mechanism base = fixtures::example2();
    const int n = base.n;
    std::array<int, 3> perm{0, 1, 2};
    int cases = 0, iso_count = 0, disagreements = 0, exhausted = 0;
    do {
        for (int t1 = 1; t1 <= 2; ++t1)
            for (int h1 = 1; h1 <= n; ++h1)
                for (int t2 = 1; t2 <= 3; ++t2)
                    for (int h2 = 1; h2 <= n - 1; ++h2) {
                        Mechanism m = base;
                        auto& f = std::get<FilteringFactor>(m.cells.front().factor);
                        for (auto& level : f.filter.levels) {
                            for (auto& p : level.pairs) p = {relabel(p.e, perm), relabel(p.f, perm)};
                            level.ga = relabel(level.ga, perm);
                            level.gb = relabel(level.gb, perm);
                        }
                        f.quotas = {{{t1, h1}}, {{t2, h2}}};
                        const bool is_iso = is_iso_filtering(f).empty();
                        const auto r = search_manipulation_exhaustive(m, {.budget = kSearchBudget});
                        ++cases;
                        iso_count += is_iso ? 1 : 0;
                        if (r.verdict == Verdict::ExhaustedBudget) ++exhausted;
                        const bool sp = r.verdict == Verdict::Pass;
                        if (sp != is_iso || r.verdict == Verdict::ExhaustedBudget) {
                            ++disagreements;
                            if (disagreements <= 5)
                                out.require(false, "perm " + std::to_string(perm[0]) + std::to_string(perm[1]) + std::to_string(perm[2]) +
                                                       " quotas (" + std::to_string(t1) + "," + std::to_string(h1) + ")(" +
                                                       std::to_string(t2) + "," + std::to_string(h2) + "): iso=" +
                                                       (is_iso ? "yes" : "no") + " search=" + to_string(r.verdict));
                        }
                    }
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
    out.require(exhausted == 0, std::to_string(exhausted) + " searches ran out of budget");
    out.require(iso_count > 0 && iso_count < cases, "sweep does not contain both classes");
    out.detail = std::to_string(cases) + " cases, " + std::to_string(iso_count) + " iso";
}

void reunion(Outcome& out) {
    std::ostringstream d;
    for (const auto& [label, m] : {std::pair{"phi", fixtures::reunion_phi()}, std::pair{"phi'", fixtures::reunion_phi_prime()}}) {
        const auto h = handle_of(m);
        VerifyConfig cfg;
        cfg.budget = kSearchBudget;
        cfg.seed = 2024;
        cfg.anonymity_profiles = 200;
        cfg.range_trials = 200;
        cfg.sp_profiles = 500;
        const auto r = verify(h, cfg);
        const std::uint64_t transpositions = static_cast<std::uint64_t>(m.n) * static_cast<std::uint64_t>(m.n - 1) / 2;
        out.require(r.anonymity.verdict == Verdict::Pass, std::string(label) + " anonymity " + to_string(r.anonymity.verdict));
        out.require(r.anonymity.checks == 200 * transpositions, std::string(label) + " anonymity checked " + std::to_string(r.anonymity.checks));
        out.require(r.range_unanimity.verdict == Verdict::Pass, std::string(label) + " range-unanimity " + to_string(r.range_unanimity.verdict));
        out.require(r.range_unanimity.constructed == 200, std::string(label) + " constructed " + std::to_string(r.range_unanimity.constructed));
        out.require(r.strategy_proofness.verdict == Verdict::Pass, std::string(label) + " strategy-proofness " + to_string(r.strategy_proofness.verdict));
        out.require(r.strategy_proofness.stats.profiles == 500, std::string(label) + " sampled " + std::to_string(r.strategy_proofness.stats.profiles));
        d << label << ": " << r.anonymity.checks << " swaps, " << r.range_unanimity.constructed << "+" << r.range_unanimity.sampled
          << " range profiles, " << r.strategy_proofness.stats.evaluations << " deviations; ";
    }
    out.detail = d.str();
}

void majority(Outcome& out) {
    const RawMechanism raw = fixtures::majority_fixture();
    const auto h = handle_of(raw);
    VerifyConfig cfg;
    cfg.budget = kSearchBudget;
    cfg.seed = 6;
    const auto r = verify(h, cfg);
    out.require(r.anonymity.verdict == Verdict::Pass, std::string("anonymity ") + to_string(r.anonymity.verdict));
    out.require(r.range_unanimity.verdict == Verdict::Fail && r.range_unanimity.witness.has_value(),
                std::string("range-unanimity ") + to_string(r.range_unanimity.verdict));
    if (!r.range_unanimity.witness) return;
    const auto& w = *r.range_unanimity.witness;
    const OutcomeId c = raw.outcomes.index("c");
    const StateId w2 = raw.states.index("w2"), w3 = raw.states.index("w3");
    for (const auto& v : w.profile.voters) {
        out.require(v.valuation[c] >= Rational(9, 10), "a voter values c below 9/10");
        Rational gap = v.belief[w2] - v.belief[w3];
        if (gap < 0) gap = -gap;
        out.require(gap <= Rational(1, 10), "a voter has |p(w2) - p(w3)| > 1/10");
        out.require(range_top(h.range, v.valuation) == w.target, "a voter's range-top differs from the target");
    }
    out.require(w.selected != w.target, "selected act equals the target");
    out.require(replay(h, w).ok, "witness does not replay");
    std::ostringstream d;
    d << "target";
    for (int s = 0; s < w.target.size(); ++s) d << ' ' << raw.outcomes.label(w.target[s]);
    d << ", selected";
    for (int s = 0; s < w.selected.size(); ++s) d << ' ' << raw.outcomes.label(w.selected[s]);
    out.detail = d.str();
}

// Library result must be one of the oracle's maximal decompositions; when the
// oracle finds a single one they must coincide.
struct DecompositionTally {
    long cases = 0, ties = 0, bad = 0;
};

void compare_decomposition(const std::vector<Event>& c, DecompositionTally& t, Outcome& out) {
    const auto all = brute_force_decompositions(c);
    const auto mine = maximal_decomposition(c);
    ++t.cases;
    if (all.size() > 1) ++t.ties;
    const bool ok = std::find(all.begin(), all.end(), mine) != all.end() && !(check_non_nested(c) == std::nullopt && all.size() != 1);
    if (!ok) {
        ++t.bad;
        if (t.bad <= 5) {
            std::string s = "mismatch on";
            for (Event e : c) s += " " + std::to_string(e.bits());
            out.require(false, s);
        }
    }
}

void decomposition(Outcome& out) {
    DecompositionTally three, four, five;
    for (std::uint32_t family = 1; family < (1U << 7); ++family) {
        std::vector<Event> c;
        for (std::uint32_t e = 1; e <= 7; ++e)
            if ((family >> (e - 1)) & 1U) c.emplace_back(e);
        compare_decomposition(c, three, out);
    }
    for (std::uint32_t family = 1; family < (1U << 15); ++family) {
        std::vector<Event> c;
        for (std::uint32_t e = 1; e <= 15; ++e)
            if ((family >> (e - 1)) & 1U) c.emplace_back(e);
        compare_decomposition(c, four, out);
    }
    Rng rng(7);
    for (int i = 0; i < 3000; ++i) {
        std::set<std::uint32_t> bits;
        const auto k = static_cast<std::size_t>(rng.uniform(1, 16));
        while (bits.size() < k) bits.insert(static_cast<std::uint32_t>(rng.uniform(1, 31)));
        std::vector<Event> c;
        for (auto b : bits) c.emplace_back(b);
        compare_decomposition(c, five, out);
    }
    out.require(three.cases == 127, "3-state family count " + std::to_string(three.cases));
    out.require(three.bad + four.bad + five.bad == 0, std::to_string(three.bad + four.bad + five.bad) + " disagreements");
    std::ostringstream d;
    d << "3 states: " << three.cases << " collections (" << three.ties << " nested ties); 4 states: " << four.cases << " ("
      << four.ties << "); 5 states sampled: " << five.cases << " (" << five.ties << ")";
    out.detail = d.str();
}

std::vector<Event> rich_collection(Rng& rng, int k) {
    for (;;) {
        const int states = static_cast<int>(rng.uniform(3, 5));
        std::set<std::uint32_t> bits;
        while (static_cast<int>(bits.size()) < k) bits.insert(static_cast<std::uint32_t>(rng.uniform(1, (1L << states) - 1)));
        std::vector<Event> c;
        for (auto b : bits) c.emplace_back(b);
        if (check_non_nested(c)) continue;
        if (!maximal_decomposition(c).richly_decomposable()) continue;
        return c;
    }
}

void top_triples(Outcome& out) {
    Rng rng(13);
    int found = 0;
    for (int i = 0; i < 10; ++i) {
        const int k = 3 + i % 3;
        const auto c = rich_collection(rng, k);
        const auto r = find_top_triple(c, 5, {.budget = kTopTripleBudget, .denominator_bound = 1000, .seed = Rng::derive(13, static_cast<std::uint64_t>(i))});
        if (!r.triple) {
            out.require(false, "collection " + std::to_string(i) + ": no triple after " + std::to_string(r.candidates_tried) + " candidates");
            continue;
        }
        const auto& t = *r.triple;
        const int idx[3] = {t.first, t.second, t.third};
        const int orders[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        bool all = t.beliefs.size() == 6;
        for (std::size_t o = 0; all && o < 6; ++o)
            all = oracle::top_order(c, t.beliefs[o], idx[orders[o][0]], idx[orders[o][1]], idx[orders[o][2]]);
        out.require(all, "collection " + std::to_string(i) + ": a belief fails its ordering");
        out.require(r.candidates_tried <= kTopTripleBudget, "budget exceeded");
        found += all ? 1 : 0;
    }
    out.detail = std::to_string(found) + "/10 collections";
}

int count_lines(std::string_view s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')) + 1; }

struct SyntheticError {
    std::string text;
    SourceLocation where;
};

void parser(Outcome& out) {
    for (const auto& name : fixtures::mechanism_names()) {
        const Mechanism m = fixtures::mechanism(name);
        const auto text = serialize(m);
        const auto r = parse_spec(text);
        out.require(r.ok() && r.document->mechanism == m && serialize(r.document->mechanism) == text, name + " does not round-trip");
        const auto shipped = parse_spec(fixtures::spec_text(name));
        out.require(shipped.ok() && shipped.document->mechanism == m, name + " text does not parse to the fixture");
    }
    const auto filters = fixtures::example1_filters();
    const auto ftext = serialize(filters);
    const auto fr = parse_filters(ftext);
    out.require(fr.ok() && serialize(*fr.document) == ftext, "filter document does not round-trip");

    // mutation fuzz over every fixture text
    std::vector<std::string> seeds;
    for (const auto& name : fixtures::mechanism_names()) seeds.emplace_back(fixtures::spec_text(name));
    const std::string alphabet = "{}()[],;|:=# \n\tabcw0123456789-_.";
    Rng rng(9);
    int crashes = 0, stray = 0, accepted = 0;
    for (int i = 0; i < kFuzzCases; ++i) {
        std::string s = seeds[static_cast<std::size_t>(i) % seeds.size()];
        const int edits = static_cast<int>(rng.uniform(1, 8));
        for (int e = 0; e < edits && !s.empty(); ++e) {
            const auto pos = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(s.size()) - 1));
            const char ch = alphabet[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(alphabet.size()) - 1))];
            switch (rng.uniform(0, 3)) {
                case 0: s.erase(pos, 1); break;
                case 1: s.insert(pos, 1, ch); break;
                case 2: s[pos] = ch; break;
                default: s.erase(pos, static_cast<std::size_t>(rng.uniform(1, 40)));
            }
        }
        try {
            const auto r = parse_spec(s);
            const int lines = count_lines(s);
            for (const auto& err : r.errors)
                if (err.where.line < 1 || err.where.line > lines || err.where.column < 1) ++stray;
            if (r.ok()) {
                ++accepted;
                (void)validate_mechanism(r.document->mechanism);
            } else if (r.errors.empty()) {
                ++stray;
            }
        } catch (...) {
            ++crashes;
        }
    }
    out.require(crashes == 0, std::to_string(crashes) + " fuzz inputs threw");
    out.require(stray == 0, std::to_string(stray) + " fuzz errors unlocated or out of range");

    const std::string head = "states: x y\noutcomes: a b\nvoters: 3\n";
    const std::vector<SyntheticError> synthetic{
        {"states: x y\noutcomes: a b\nvoters: three\ncell C: x y\nfactor C: constant c=a\n", {3, 9}},
        {head + "cell C: x y\nfactor C: constant c=q\n", {5, 22}},
        {head + "cell C: x y\nfactor C: simple a=a b=b kbar=\n", {5, 31}},
        {head + "cell C: x y\nfactor C: wobble a=a\n", {5, 11}},
        {head + "cell C: x y\nfactor D: constant c=a\n", {5, 8}},
        {head + "cell C: x y\nfactor C: dyadic a=a b=b E={x F={y} klo=1 khi=2 H=threshold(2)\n", {5, 31}},
        {head + "cell C: x y\nfactor C: filtering a=a b=b klo=1 khi=1\n  level 1: pairs=({x},{y} Ga={} Gb={} quotas=(ttilde=1,that=1)\n", {6, 27}},
        {head + "cell C: x y\nfactor C: quasidict a=a b=b menu={x}|\n", {5, 38}},
        {"states: x y\noutcomes a b\n", {2, 10}},
        {head + "cell C x y\n", {4, 8}},
    };
    int located = 0;
    for (std::size_t i = 0; i < synthetic.size(); ++i) {
        const auto r = parse_spec(synthetic[i].text);
        const bool ok = !r.ok() && !r.errors.empty() && r.errors.front().where == synthetic[i].where;
        located += ok ? 1 : 0;
        if (!ok) {
            std::string got = r.errors.empty() ? std::string("no error") : r.errors.front().message();
            out.require(false, "synthetic error " + std::to_string(i) + " expected at " + std::to_string(synthetic[i].where.line) + ":" +
                                   std::to_string(synthetic[i].where.column) + ", got " + got);
        }
    }
    out.detail = std::to_string(kFuzzCases) + " fuzz cases (" + std::to_string(accepted) + " still valid), " + std::to_string(located) + "/" +
                 std::to_string(synthetic.size()) + " synthetic errors located";
}

}  // namespace

int main() {
    run(1, "filter classification", kLimitFilters, filters);
    run(2, "iso-filtering classification", kLimitIso, iso);
    run(3, "manipulation witness", kLimitExampleThree, example_three);
    run(4, "quota sweep", kLimitSweep, sweep);
    run(5, "reunion mechanisms satisfy the axioms", kLimitReunion, reunion);
    run(6, "majority fixture", kLimitMajority, majority);
    run(7, "decomposition oracle", 0, decomposition);
    run(8, "top triples", kLimitTopTriples, top_triples);
    run(9, "parser", 0, parser);
    std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "PASS" : "FAIL", failures);
    return failures == 0 ? 0 : 1;
}
