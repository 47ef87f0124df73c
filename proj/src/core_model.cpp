#include "seuvote/core_model.hpp"

#include "seuvote/rng.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace seuvote {

Event Act::where(OutcomeId x) const {
    Event e;
    for (int s = 0; s < size(); ++s)
        if (assignment[static_cast<std::size_t>(s)] == x) e.insert(s);
    return e;
}

FeasibilityMap::FeasibilityMap(std::vector<std::vector<OutcomeId>> per_state) : sets_(std::move(per_state)) {
    for (auto& set : sets_) {
        if (set.empty()) throw std::invalid_argument("feasibility set must be nonempty");
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
    }
}

FeasibilityMap FeasibilityMap::unconstrained(int num_states, int num_outcomes) {
    std::vector<OutcomeId> all(static_cast<std::size_t>(num_outcomes));
    std::iota(all.begin(), all.end(), 0);
    return FeasibilityMap(std::vector<std::vector<OutcomeId>>(static_cast<std::size_t>(num_states), all));
}

bool FeasibilityMap::allows(StateId s, OutcomeId x) const {
    const auto& set = available(s);
    return std::binary_search(set.begin(), set.end(), x);
}

bool FeasibilityMap::feasible(const Act& act) const {
    if (act.size() != num_states()) return false;
    for (int s = 0; s < num_states(); ++s)
        if (!allows(s, act[s])) return false;
    return true;
}

Valuation::Valuation(std::vector<Rational> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw std::invalid_argument("valuation needs at least two outcomes");
    std::vector<Rational> sorted = values_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("valuation is not injective");
    if (sorted.front() != Rational(0) || sorted.back() != Rational(1))
        throw std::invalid_argument("valuation must have min 0 and max 1");
}

Belief::Belief(std::vector<Rational> mass, Event support) : mass_(std::move(mass)), support_(support) {
    if (mass_.empty() || mass_.size() > static_cast<std::size_t>(kMaxStates))
        throw std::invalid_argument("belief dimension out of range");
    if (!support_.subset_of(Event::full(num_states())) || support_.empty())
        throw std::invalid_argument("belief support outside the state space");
    Rational total;
    for (int s = 0; s < num_states(); ++s) {
        const Rational& m = mass_[static_cast<std::size_t>(s)];
        if (support_.contains(s) ? m.sign() <= 0 : !m.is_zero())
            throw std::invalid_argument("belief mass must be positive exactly on its support");
        total += m;
    }
    if (total != Rational(1)) throw std::invalid_argument("belief masses must sum to 1, got " + total.str());
}

Belief::Belief(std::vector<Rational> mass) : Belief(mass, Event::full(static_cast<int>(mass.size()))) {}

Belief Belief::uniform(int num_states) {
    return Belief(std::vector<Rational>(static_cast<std::size_t>(num_states), Rational(1, num_states)));
}

Rational Belief::prob(Event e) const {
    Rational total;
    (e & support_).for_each([&](StateId s) { total += mass_[static_cast<std::size_t>(s)]; });
    return total;
}

int Belief::compare(Event e, Event f) const {
    // shared states cancel
    const Rational pe = prob(e - f);
    const Rational pf = prob(f - e);
    return pe < pf ? -1 : (pf < pe ? 1 : 0);
}

Profile::Profile(std::vector<Preference> v) : voters(std::move(v)) {
    if (voters.size() < 2) throw std::invalid_argument("a profile needs at least two voters");
    const int ns = voters.front().belief.num_states();
    const int no = voters.front().valuation.size();
    for (const auto& p : voters)
        if (p.belief.num_states() != ns || p.valuation.size() != no)
            throw DimensionError("voters disagree on state or outcome dimensions");
}

Rational expected_utility(const Act& act, const Preference& pref) {
    if (act.size() != pref.belief.num_states()) throw DimensionError("act and belief dimensions differ");
    Rational total;
    pref.belief.support().for_each([&](StateId s) {
        const OutcomeId x = act[s];
        if (x < 0 || x >= pref.valuation.size()) throw DimensionError("act undefined on a state with positive mass");
        total += pref.belief[s] * pref.valuation[x];
    });
    return total;
}

Belief conditional_belief(const Belief& belief, Event f) {
    if (f.empty()) throw std::invalid_argument("conditioning on an empty event");
    if (!f.subset_of(Event::full(belief.num_states()))) throw DimensionError("event outside the state space");
    const Rational pf = belief.prob(f);
    if (pf.is_zero()) throw std::invalid_argument("conditioning on a null event");
    std::vector<Rational> mass(static_cast<std::size_t>(belief.num_states()));
    const Event support = f & belief.support();
    support.for_each([&](StateId s) { mass[static_cast<std::size_t>(s)] = belief[s] / pf; });
    return Belief(std::move(mass), support);
}

Act concat(std::span<const std::pair<Event, Act>> subacts, int num_states) {
    Act out = Act::unassigned(num_states);
    Event covered;
    for (const auto& [event, sub] : subacts) {
        if (event.intersects(covered)) throw std::invalid_argument("concat: events overlap");
        if (sub.size() != num_states) throw DimensionError("concat: sub-act dimension mismatch");
        event.for_each([&](StateId s) {
            if (sub[s] == Act::kUnassigned) throw std::invalid_argument("concat: sub-act undefined on its event");
            out[s] = sub[s];
        });
        covered |= event;
    }
    if (covered != Event::full(num_states)) throw std::invalid_argument("concat: events do not cover the space");
    return out;
}

Supporters supporters(const Profile& profile, OutcomeId a, OutcomeId b) {
    if (a == b) throw std::invalid_argument("supporters: outcomes must differ");
    Supporters out;
    for (int i = 0; i < profile.size(); ++i) {
        const auto& v = profile[i].valuation;
        if (v[a] == v[b]) throw GenericityViolation(i, "valuation ties two outcomes");
        (v[a] > v[b] ? out.of_a : out.of_b).push_back(i);
    }
    return out;
}

int eta(const Profile& profile, std::span<const int> s, Event e, Event f) {
    int count = 0;
    for (int i : s) {
        const int c = profile[i].belief.compare(e, f);
        if (c == 0) throw GenericityViolation(i, "belief ties " + format_event(e) + " and " + format_event(f));
        if (c > 0) ++count;
    }
    return count;
}

Belief theta_mix(const Belief& belief, Event a, const Rational& theta) {
    const Event all = Event::full(belief.num_states());
    if (a.empty() || a == all || !a.subset_of(all)) throw std::invalid_argument("theta_mix: event must be nonempty and proper");
    if (theta <= Rational(0) || theta >= Rational(1)) throw std::invalid_argument("theta_mix: theta must lie in (0,1)");
    const Rational pa = belief.prob(a);
    const Rational pna = belief.prob(all - a);
    if (pa.is_zero() || pna.is_zero()) throw std::invalid_argument("theta_mix: belief must charge both sides");
    std::vector<Rational> mass(static_cast<std::size_t>(belief.num_states()));
    Event support;
    for (int s = 0; s < belief.num_states(); ++s) {
        if (belief[s].is_zero()) continue;
        mass[static_cast<std::size_t>(s)] = a.contains(s) ? theta * belief[s] / pa : (Rational(1) - theta) * belief[s] / pna;
        support.insert(s);
    }
    return Belief(std::move(mass), support);
}

namespace {

// Sorted subset sums of the masses over c.
std::vector<Rational> subset_sums(const Belief& belief, Event c, int max_bits) {
    if (c.size() > max_bits) throw std::length_error("subset enumeration over " + std::to_string(c.size()) + " states exceeds the bound");
    std::vector<Rational> sums{Rational(0)};
    c.for_each([&](StateId s) {
        const std::size_t n = sums.size();
        for (std::size_t i = 0; i < n; ++i) sums.push_back(sums[i] + belief[s]);
    });
    std::sort(sums.begin(), sums.end());
    return sums;
}

// Smallest gap between distinct subset sums; zero when two subsets tie.
Rational min_gap(const std::vector<Rational>& sorted) {
    Rational best = sorted.back() - sorted.front() + Rational(1);
    for (std::size_t i = 1; i < sorted.size(); ++i) best = std::min(best, sorted[i] - sorted[i - 1]);
    return best;
}

mpz_class lcm_of_denominators(const std::vector<Rational>& xs) {
    mpz_class l = 1;
    for (const auto& x : xs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.denominator().get_mpz_t());
    return l;
}

}  // namespace

Tri is_lexicographic(const Preference& pref, Event a, std::uint64_t budget) {
    if (a.empty()) throw std::invalid_argument("is_lexicographic: empty event");
    const Belief& p = pref.belief;
    const Event rest = Event::full(p.num_states()) - a;
    if ((rest & p.support()).empty()) return Tri::True;
    // Outside a, two acts can differ by at most p(rest) (values span [0,1]),
    // and that extreme is attained, so the test reduces to comparing the
    // smallest positive a-restricted gap against p(rest).
    const Rational outside = p.prob(rest);
    const int nx = pref.valuation.size();
    const Event live = a & p.support();
    double work = 1;
    for (int i = 0; i < live.size(); ++i) work *= nx;
    if (work <= static_cast<double>(budget)) {
        std::vector<Rational> sums{Rational(0)};
        live.for_each([&](StateId s) {
            std::vector<Rational> next;
            next.reserve(sums.size() * static_cast<std::size_t>(nx));
            for (const auto& base : sums)
                for (OutcomeId x = 0; x < nx; ++x) next.push_back(base + p[s] * pref.valuation[x]);
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            sums = std::move(next);
        });
        if (sums.size() < 2) return Tri::True;
        return min_gap(sums) > outside ? Tri::True : Tri::False;
    }
    std::vector<Rational> terms;
    live.for_each([&](StateId s) {
        for (OutcomeId x = 0; x < nx; ++x) terms.push_back(p[s] * pref.valuation[x]);
    });
    const Rational lower_bound(mpq_class(mpz_class(1), lcm_of_denominators(terms)));
    return lower_bound > outside ? Tri::True : Tri::Inconclusive;
}

bool is_dominant(const Belief& belief, Event c, int max_bits) {
    if (c.empty()) throw std::invalid_argument("is_dominant: empty event");
    const Rational outside = belief.prob(Event::full(belief.num_states()) - c);
    const auto sums = subset_sums(belief, c, max_bits);
    return min_gap(sums) > outside;
}

Belief make_dominant(int num_states, Event c, const Belief& on_c, const Belief& off_c, int max_bits) {
    const Event all = Event::full(num_states);
    if (c.empty() || !c.subset_of(all)) throw std::invalid_argument("make_dominant: bad event");
    const Belief inside = conditional_belief(on_c, c);
    if (inside.support() != c) throw std::invalid_argument("make_dominant: conditional on c must charge every state of c");
    if (c == all) return inside;
    const Rational gap = min_gap(subset_sums(inside, c, max_bits));
    if (gap.is_zero()) throw std::invalid_argument("make_dominant: conditional on c has tied sub-events");
    const Belief outside = conditional_belief(off_c, all - c);
    if (outside.support() != all - c) throw std::invalid_argument("make_dominant: conditional off c must charge every state");
    // need theta * gap > 1 - theta, i.e. theta > 1 / (1 + gap); take the midpoint to 1
    const Rational threshold = Rational(1) / (Rational(1) + gap);
    const Rational theta = (threshold + Rational(1)) / Rational(2);
    std::vector<Rational> mass(static_cast<std::size_t>(num_states));
    for (int s = 0; s < num_states; ++s)
        mass[static_cast<std::size_t>(s)] = c.contains(s) ? theta * inside[s] : (Rational(1) - theta) * outside[s];
    return Belief(std::move(mass));
}

OutcomeId tau_top(const Valuation& valuation, std::span<const OutcomeId> options) {
    if (options.empty()) throw std::invalid_argument("tau_top: empty option set");
    OutcomeId best = options.front();
    for (OutcomeId x : options.subspan(1))
        if (valuation[x] > valuation[best]) best = x;
    return best;
}

GenericityReport check_genericity(const Profile& profile, std::span<const EventComparison> events,
                                  std::span<const OutcomeComparison> outcomes, int full_bound) {
    GenericityReport report;
    for (const auto& c : events)
        if (profile[c.voter].belief.compare(c.e, c.f) == 0)
            report.violations.push_back({c.voter, "event", c.e, c.f});
    for (const auto& c : outcomes)
        if (profile[c.voter].valuation[c.x] == profile[c.voter].valuation[c.y])
            report.violations.push_back({c.voter, "outcome", {}, {}, c.x, c.y});
    if (full_bound > 0) {
        for (int i = 0; i < profile.size(); ++i) {
            const Belief& p = profile[i].belief;
            if (p.num_states() > full_bound) continue;
            const Event support = p.support();
            const int m = support.size();
            const auto members = support.members();
            std::vector<std::pair<Rational, std::uint32_t>> sums;
            sums.reserve(std::size_t{1} << m);
            for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
                Event e;
                for (int j = 0; j < m; ++j)
                    if ((mask >> j) & 1U) e.insert(members[static_cast<std::size_t>(j)]);
                sums.emplace_back(p.prob(e), e.bits());
            }
            std::sort(sums.begin(), sums.end());
            for (std::size_t j = 1; j < sums.size(); ++j)
                if (sums[j].first == sums[j - 1].first)
                    report.violations.push_back({i, "belief-injectivity", Event(sums[j - 1].second), Event(sums[j].second)});
        }
    }
    return report;
}

Valuation random_valuation(Rng& rng, int num_outcomes, long denominator_bound) {
    if (num_outcomes < 2) throw std::invalid_argument("need at least two outcomes");
    const long d = std::max<long>(denominator_bound, num_outcomes);
    std::set<long> interior;
    while (static_cast<int>(interior.size()) < num_outcomes - 2) interior.insert(rng.uniform(1, d - 1));
    std::vector<long> numerators{0, d};
    numerators.insert(numerators.end(), interior.begin(), interior.end());
    std::shuffle(numerators.begin(), numerators.end(), rng.engine());
    std::vector<Rational> values;
    values.reserve(numerators.size());
    for (long num : numerators) values.emplace_back(num, d);
    return Valuation(std::move(values));
}

Belief random_belief_on(Rng& rng, int num_states, Event support, long denominator_bound) {
    std::vector<long> weights(static_cast<std::size_t>(num_states), 0);
    long total = 0;
    support.for_each([&](StateId s) {
        weights[static_cast<std::size_t>(s)] = rng.uniform(1, std::max<long>(denominator_bound, 2));
        total += weights[static_cast<std::size_t>(s)];
    });
    std::vector<Rational> mass;
    mass.reserve(weights.size());
    for (long w : weights) mass.emplace_back(w, total);
    return Belief(std::move(mass), support);
}

Belief random_belief(Rng& rng, int num_states, long denominator_bound) {
    return random_belief_on(rng, num_states, Event::full(num_states), denominator_bound);
}

Profile gen_profile(const ProfileConfig& config, std::span<const EventComparison> events,
                    std::span<const OutcomeComparison> outcomes) {
    if (config.n < 2) throw std::invalid_argument("gen_profile: n must be at least 2");
    if (config.denominator_bound < static_cast<long>(config.num_states) * config.num_outcomes)
        throw std::invalid_argument("gen_profile: denominator bound must be at least |states| * |outcomes|");
    Rng rng(config.seed);
    std::vector<Preference> voters;
    for (int i = 0; i < config.n; ++i) {
        bool done = false;
        for (int attempt = 0; attempt < config.resample_budget && !done; ++attempt) {
            Preference pref{random_valuation(rng, config.num_outcomes, config.denominator_bound),
                            random_belief(rng, config.num_states, config.denominator_bound)};
            done = std::all_of(events.begin(), events.end(), [&](const EventComparison& c) { return pref.belief.compare(c.e, c.f) != 0; });
            if (done) voters.push_back(std::move(pref));
        }
        if (!done) throw std::runtime_error("gen_profile: resample budget exhausted");
    }
    (void)outcomes;  // valuations are injective by construction
    return Profile(std::move(voters));
}

}  // namespace seuvote
