#include "seuvote/mechanism.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace seuvote {

Diagnostics validate_mechanism(const Mechanism& mech) {
    Diagnostics out;
    const Event all = mech.states.all();
    if (mech.outcomes.size() < 2) out.push_back({"space", "need at least two outcomes", -1, -1, {}});
    if (mech.n < 2) out.push_back({"voters", "need at least two voters", -1, -1, {}});
    if (mech.feasibility.num_states() != mech.num_states())
        out.push_back({"feasibility", "feasibility map does not match the state space", -1, -1, {}});
    Event covered;
    std::set<std::string> names;
    for (const auto& cell : mech.cells) {
        if (!names.insert(cell.name).second) out.push_back({"partition", "duplicate cell " + cell.name, -1, -1, {}});
        if (cell.states.empty()) out.push_back({"partition", "cell " + cell.name + " is empty", -1, -1, {}});
        if (!cell.states.subset_of(all)) out.push_back({"partition", "cell " + cell.name + " leaves the state space", -1, -1, {}});
        if (cell.states.intersects(covered))
            out.push_back({"partition", "cell " + cell.name + " overlaps " + mech.states.format(cell.states & covered), -1, -1, (cell.states & covered).members()});
        covered |= cell.states;
    }
    if (covered != all) out.push_back({"partition", "cells do not cover " + mech.states.format(all - covered), -1, -1, (all - covered).members()});
    if (mech.feasibility.num_states() != mech.num_states()) return out;
    for (const auto& cell : mech.cells) {
        if (auto ab = binary_outcomes(cell.factor)) {
            if (ab->first < 0 || ab->first >= mech.outcomes.size() || ab->second < 0 || ab->second >= mech.outcomes.size()) {
                out.push_back({"outcomes", "cell " + cell.name + " names an unknown outcome", -1, -1, {}});
                continue;
            }
        } else {
            const OutcomeId c = std::get<ConstantFactor>(cell.factor).c;
            if (c < 0 || c >= mech.outcomes.size()) {
                out.push_back({"outcomes", "cell " + cell.name + " names an unknown outcome", -1, -1, {}});
                continue;
            }
        }
        for (auto d : validate_factor(cell.factor, cell.states & all, mech.n, mech.feasibility, &mech.states)) {
            d.message = "cell " + cell.name + ": " + d.message;
            out.push_back(std::move(d));
        }
    }
    return out;
}

Act evaluate_mechanism(const Mechanism& mech, const BallotView& ballots) {
    if (ballots.num_voters() != mech.n) throw DimensionError("profile size differs from the mechanism's voter count");
    Act out = Act::unassigned(mech.num_states());
    for (const auto& cell : mech.cells) {
        const Act sub = evaluate_factor(cell.factor, cell.states, mech.num_states(), ballots);
        cell.states.for_each([&](StateId s) { out[s] = sub[s]; });
    }
    return out;
}

Act evaluate_mechanism(const Mechanism& mech, const Profile& profile) {
    // comparisons of events inside a cell have the same sign under the
    // cell-conditional belief, so beliefs are consulted unconditioned
    ProfileView view(profile);
    if (profile.size() > 0 && profile[0].belief.num_states() != mech.num_states())
        throw DimensionError("profile state dimension differs from the mechanism");
    return evaluate_mechanism(mech, view);
}

Evaluation evaluate_detailed(const Mechanism& mech, const Profile& profile) {
    Evaluation ev{evaluate_mechanism(mech, profile), {}};
    for (const auto& cell : mech.cells) {
        if (auto ab = binary_outcomes(cell.factor)) ev.sections.push_back(static_cast<int>(supporters(profile, ab->first, ab->second).of_a.size()));
        else ev.sections.push_back(-1);
    }
    return ev;
}

OutcomeSets mechanism_range(const Mechanism& mech) {
    OutcomeSets out(static_cast<std::size_t>(mech.num_states()));
    for (const auto& cell : mech.cells) {
        auto part = factor_range(cell.factor, cell.states, mech.num_states(), mech.n);
        cell.states.for_each([&](StateId s) { out[static_cast<std::size_t>(s)] = part[static_cast<std::size_t>(s)]; });
    }
    return out;
}

Act evaluate_pairwise_majority(const PairwiseMajority& rule, const Profile& profile) {
    int for_f = 0;
    for (int i = 0; i < profile.size(); ++i) {
        const Rational uf = expected_utility(rule.f, profile[i]);
        const Rational ug = expected_utility(rule.g, profile[i]);
        if (uf == ug) throw GenericityViolation(i, "indifferent between the two acts");
        if (uf > ug) ++for_f;
    }
    const int n = profile.size();
    if (2 * for_f > n) return rule.f;
    if (2 * (n - for_f) > n) return rule.g;
    throw GenericityViolation(-1, "majority vote splits evenly");
}

Act evaluate_raw(const RawMechanism& raw, const Profile& profile) {
    return std::visit(
        [&](const auto& rule) -> Act {
            using T = std::decay_t<decltype(rule)>;
            if constexpr (std::is_same_v<T, PairwiseMajority>) {
                return evaluate_pairwise_majority(rule, profile);
            } else {
                if (rule.menu.empty()) throw std::invalid_argument("empty menu");
                const Act* best = &rule.menu.front();
                Rational best_eu = expected_utility(*best, profile[0]);
                for (std::size_t j = 1; j < rule.menu.size(); ++j) {
                    const Rational eu = expected_utility(rule.menu[j], profile[0]);
                    if (eu == best_eu) throw GenericityViolation(0, "ties two menu acts");
                    if (eu > best_eu) { best = &rule.menu[j]; best_eu = eu; }
                }
                return *best;
            }
        },
        raw.rule);
}

OutcomeSets raw_range(const RawMechanism& raw) {
    std::vector<std::set<OutcomeId>> sets(static_cast<std::size_t>(raw.states.size()));
    auto add = [&](const Act& a) {
        for (int s = 0; s < a.size(); ++s) sets[static_cast<std::size_t>(s)].insert(a[s]);
    };
    std::visit(
        [&](const auto& rule) {
            using T = std::decay_t<decltype(rule)>;
            if constexpr (std::is_same_v<T, PairwiseMajority>) {
                add(rule.f);
                add(rule.g);
            } else {
                for (const auto& a : rule.menu) add(a);
            }
        },
        raw.rule);
    OutcomeSets out;
    for (const auto& s : sets) out.emplace_back(s.begin(), s.end());
    return out;
}

ScfHandle handle_of(const Mechanism& mech) {
    ScfHandle h;
    h.states = &mech.states;
    h.outcomes = &mech.outcomes;
    h.feasibility = &mech.feasibility;
    h.n = mech.n;
    h.evaluate = [&mech](const Profile& p) { return evaluate_mechanism(mech, p); };
    h.range = mechanism_range(mech);
    h.mechanism = &mech;
    return h;
}

ScfHandle handle_of(const RawMechanism& raw) {
    ScfHandle h;
    h.states = &raw.states;
    h.outcomes = &raw.outcomes;
    h.feasibility = &raw.feasibility;
    h.n = raw.n;
    h.evaluate = [&raw](const Profile& p) { return evaluate_raw(raw, p); };
    h.range = raw_range(raw);
    h.raw = &raw;
    return h;
}

}  // namespace seuvote
