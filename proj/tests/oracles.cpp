#include "oracles.hpp"

#include <algorithm>
#include <functional>

namespace oracle {

Rational mass(const Belief& b, Event e) {
    Rational total;
    for (StateId s = 0; s < b.num_states(); ++s)
        if (e.contains(s)) total = total + b[s];
    return total;
}

Rational expected_utility(const Act& act, const Preference& p) {
    Rational total;
    for (StateId s = 0; s < act.size(); ++s) total = total + p.belief[s] * p.valuation[act[s]];
    return total;
}

std::vector<int> supporters_of(const Profile& p, OutcomeId a, OutcomeId b) {
    std::vector<int> out;
    for (int i = 0; i < p.size(); ++i)
        if (p[i].valuation[a] > p[i].valuation[b]) out.push_back(i);
    return out;
}

int count_more_likely(const Profile& p, const std::vector<int>& voters, Event e, Event f) {
    int c = 0;
    for (int i : voters)
        if (mass(p[i].belief, e) > mass(p[i].belief, f)) ++c;
    return c;
}

namespace {
Act blank(const Profile& p) { return Act::unassigned(p[0].belief.num_states()); }
void put(Act& act, Event e, OutcomeId x) {
    for (StateId s = 0; s < act.size(); ++s)
        if (e.contains(s)) act[s] = x;
}
}  // namespace

Act simple(const SimpleFactor& f, Event cell, const Profile& p) {
    Act act = blank(p);
    put(act, cell, static_cast<int>(supporters_of(p, f.a, f.b).size()) >= f.kbar ? f.a : f.b);
    return act;
}

Act quasidict(const QuasiDictatorialFactor& f, Event cell, const Profile& p) {
    Act act = blank(p);
    const auto na = supporters_of(p, f.a, f.b);
    if (na.size() != 1) {
        put(act, cell, na.empty() ? f.b : f.a);
        return act;
    }
    // the lone a-supporter takes their likeliest menu event
    const Belief& b = p[na.front()].belief;
    Event best = f.menu.front();
    for (Event e : f.menu)
        if (mass(b, e) > mass(b, best)) best = e;
    put(act, cell, f.b);
    put(act, best, f.a);
    return act;
}

Act dyadic(const DyadicFactor& f, Event cell, const Profile& p) {
    Act act = blank(p);
    const auto na = supporters_of(p, f.a, f.b);
    const int k = static_cast<int>(na.size());
    if (k < f.klo || k > f.khi) {
        put(act, cell, k < f.klo ? f.b : f.a);
        return act;
    }
    std::vector<int> nb;
    for (int i = 0; i < p.size(); ++i)
        if (std::find(na.begin(), na.end(), i) == na.end()) nb.push_back(i);
    // votes for "a on E": a-supporters finding E likelier, b-supporters finding F likelier
    const int va = count_more_likely(p, na, f.e, f.f);
    const int vb = count_more_likely(p, nb, f.f, f.e);
    const bool a_on_e = f.h(va, vb) == 1;
    put(act, a_on_e ? f.e : f.f, f.a);
    put(act, a_on_e ? f.f : f.e, f.b);
    return act;
}

Act filtering(const FilteringFactor& f, Event cell, const Profile& p) {
    Act act = blank(p);
    const auto na = supporters_of(p, f.a, f.b);
    const int k = static_cast<int>(na.size());
    if (k < f.filter.klo || k > f.filter.khi) {
        put(act, cell, k < f.filter.klo ? f.b : f.a);
        return act;
    }
    std::vector<int> nb;
    for (int i = 0; i < p.size(); ++i)
        if (std::find(na.begin(), na.end(), i) == na.end()) nb.push_back(i);
    const Dipartition& d = f.filter.levels[static_cast<std::size_t>(k - f.filter.klo)];
    const auto& quotas = f.quotas[static_cast<std::size_t>(k - f.filter.klo)];
    put(act, d.ga, f.a);
    put(act, d.gb, f.b);
    for (std::size_t m = 0; m < d.pairs.size(); ++m) {
        const Event e = d.pairs[m].e, fe = d.pairs[m].f;
        // the swapped sub-act (a on F) wins on enough a-votes or b-votes for it
        const bool swap = count_more_likely(p, na, fe, e) >= quotas[m].ttilde || count_more_likely(p, nb, e, fe) >= quotas[m].that;
        put(act, swap ? fe : e, f.a);
        put(act, swap ? e : fe, f.b);
    }
    return act;
}

Act factor(const FactorSpec& f, Event cell, const Profile& p) {
    if (const auto* c = std::get_if<ConstantFactor>(&f)) {
        Act act = blank(p);
        put(act, cell, c->c);
        return act;
    }
    if (const auto* s = std::get_if<SimpleFactor>(&f)) return simple(*s, cell, p);
    if (const auto* q = std::get_if<QuasiDictatorialFactor>(&f)) return quasidict(*q, cell, p);
    if (const auto* d = std::get_if<DyadicFactor>(&f)) return dyadic(*d, cell, p);
    return filtering(std::get<FilteringFactor>(f), cell, p);
}

Act mechanism(const Mechanism& m, const Profile& p) {
    Act act = blank(p);
    for (const auto& c : m.cells) {
        // each factor sees beliefs conditioned on its cell
        std::vector<Preference> conditioned;
        for (const auto& v : p.voters) {
            std::vector<Rational> cm(static_cast<std::size_t>(v.belief.num_states()));
            const Rational total = mass(v.belief, c.states);
            for (StateId s = 0; s < v.belief.num_states(); ++s)
                if (c.states.contains(s)) cm[static_cast<std::size_t>(s)] = v.belief[s] / total;
            conditioned.push_back({v.valuation, Belief(cm, c.states)});
        }
        const Act sub = factor(c.factor, c.states, Profile(conditioned));
        for (StateId s = 0; s < act.size(); ++s)
            if (c.states.contains(s)) act[s] = sub[s];
    }
    return act;
}

Act example2_cases(const Profile& p) {
    const Event w1{0}, w2{1}, w3{2};
    const auto na = supporters_of(p, 0, 1);
    std::vector<int> nb;
    for (int i = 0; i < p.size(); ++i)
        if (std::find(na.begin(), na.end(), i) == na.end()) nb.push_back(i);
    Event on_a;
    switch (na.size()) {
        case 0: break;
        case 1: on_a = count_more_likely(p, nb, w2, w1) >= 1 ? w1 : w2; break;
        case 2: on_a = count_more_likely(p, na, w2, w3) >= 1 ? (w1 | w2) : (w1 | w3); break;
        default: on_a = w1 | w2 | w3;
    }
    Act act = Act::constant(3, 1);
    put(act, on_a, 0);
    return act;
}

bool lexicographic(const Preference& p, Event a, int num_outcomes) {
    const int ns = p.belief.num_states();
    std::vector<StateId> in, out;
    for (StateId s = 0; s < ns; ++s) (a.contains(s) ? in : out).push_back(s);
    auto all_subacts = [&](const std::vector<StateId>& states) {
        std::vector<std::vector<OutcomeId>> acts{{}};
        for (std::size_t i = 0; i < states.size(); ++i) {
            std::vector<std::vector<OutcomeId>> next;
            for (const auto& partial : acts)
                for (OutcomeId x = 0; x < num_outcomes; ++x) {
                    auto v = partial;
                    v.push_back(x);
                    next.push_back(v);
                }
            acts = std::move(next);
        }
        return acts;
    };
    const auto on_a = all_subacts(in);
    const auto off_a = all_subacts(out);
    auto join = [&](const std::vector<OutcomeId>& f, const std::vector<OutcomeId>& h) {
        Act act = Act::unassigned(ns);
        for (std::size_t i = 0; i < in.size(); ++i) act[in[i]] = f[i];
        for (std::size_t i = 0; i < out.size(); ++i) act[out[i]] = h[i];
        return act;
    };
    for (const auto& f : on_a)
        for (const auto& g : on_a) {
            if (f == g) continue;
            // f beats g on a with a common completion; must then beat g under any completions
            if (!(oracle::expected_utility(join(f, off_a.front()), p) > oracle::expected_utility(join(g, off_a.front()), p))) continue;
            for (const auto& h : off_a)
                for (const auto& h2 : off_a)
                    if (!(oracle::expected_utility(join(f, h), p) > oracle::expected_utility(join(g, h2), p))) return false;
        }
    return true;
}

bool dominant(const Belief& b, Event c) {
    Rational outside;
    for (StateId s = 0; s < b.num_states(); ++s)
        if (!c.contains(s)) outside = outside + b[s];
    const auto members = c.members();
    const std::uint32_t subsets = 1U << members.size();
    std::vector<Rational> sums(subsets);
    for (std::uint32_t m = 0; m < subsets; ++m)
        for (std::size_t i = 0; i < members.size(); ++i)
            if (m >> i & 1U) sums[m] = sums[m] + b[members[i]];
    for (std::uint32_t x = 0; x < subsets; ++x)
        for (std::uint32_t y = x + 1; y < subsets; ++y)
            if (!((sums[x] - sums[y]).abs() > outside)) return false;
    return true;
}

bool top_order(const std::vector<Event>& collection, const Belief& b, int first, int second, int third) {
    const Rational p1 = mass(b, collection[static_cast<std::size_t>(first)]);
    const Rational p2 = mass(b, collection[static_cast<std::size_t>(second)]);
    const Rational p3 = mass(b, collection[static_cast<std::size_t>(third)]);
    if (!(p1 > p2 && p2 > p3)) return false;
    for (int i = 0; i < static_cast<int>(collection.size()); ++i) {
        if (i == first || i == second || i == third) continue;
        if (!(p3 > mass(b, collection[static_cast<std::size_t>(i)]))) return false;
    }
    return true;
}

Act majority(const PairwiseMajority& rule, const Profile& p) {
    int for_f = 0;
    for (const auto& v : p.voters)
        if (oracle::expected_utility(rule.f, v) > oracle::expected_utility(rule.g, v)) ++for_f;
    return 2 * for_f > p.size() ? rule.f : rule.g;
}

}  // namespace oracle
