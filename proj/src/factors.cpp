#include "seuvote/factors.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace seuvote {

int HTable::operator()(int ma, int mb) const {
    if (threshold_) return ma + mb >= *threshold_ ? 1 : 0;
    return grid_.at(static_cast<std::size_t>(ma)).at(static_cast<std::size_t>(mb));
}

bool HTable::defined_at(int ma, int mb) const {
    if (ma < 0 || mb < 0) return false;
    if (threshold_) return true;
    return static_cast<std::size_t>(ma) < grid_.size() && static_cast<std::size_t>(mb) < grid_[static_cast<std::size_t>(ma)].size();
}

const char* factor_kind(const FactorSpec& f) {
    struct Visitor {
        const char* operator()(const ConstantFactor&) const { return "constant"; }
        const char* operator()(const SimpleFactor&) const { return "simple"; }
        const char* operator()(const QuasiDictatorialFactor&) const { return "quasidict"; }
        const char* operator()(const DyadicFactor&) const { return "dyadic"; }
        const char* operator()(const FilteringFactor&) const { return "filtering"; }
    };
    return std::visit(Visitor{}, f);
}

std::optional<std::pair<OutcomeId, OutcomeId>> binary_outcomes(const FactorSpec& f) {
    return std::visit(
        [](const auto& x) -> std::optional<std::pair<OutcomeId, OutcomeId>> {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ConstantFactor>) return std::nullopt;
            else return std::make_pair(x.a, x.b);
        },
        f);
}

bool ProfileView::supports(int voter, OutcomeId a, OutcomeId b) const {
    const auto& v = profile_[voter].valuation;
    if (v[a] == v[b]) throw GenericityViolation(voter, "valuation ties the outcome pair");
    return v[a] > v[b];
}

bool ProfileView::prefers(int voter, Event e, Event f) const {
    const int c = profile_[voter].belief.compare(e, f);
    if (c == 0) throw GenericityViolation(voter, "belief ties " + format_event(e) + " and " + format_event(f));
    return c > 0;
}

namespace {

struct Reporter {
    Diagnostics& out;
    void operator()(std::string kind, std::string message) { out.push_back({std::move(kind), std::move(message), -1, -1, {}}); }
};

std::string show(Event e, const StateSpace* names) { return names ? names->format(e) : format_event(e); }

void check_outcome(Reporter& report, OutcomeId x, Event cell, const FeasibilityMap& feas, const char* role) {
    cell.for_each([&](StateId s) {
        if (s >= feas.num_states() || !feas.allows(s, x))
            report("feasibility", std::string("outcome ") + role + " is not available in state " + std::to_string(s));
    });
}

void check_pair(Reporter& report, OutcomeId a, OutcomeId b, Event cell, const FeasibilityMap& feas) {
    if (a == b) report("outcomes", "a and b must differ");
    check_outcome(report, a, cell, feas, "a");
    check_outcome(report, b, cell, feas, "b");
}

void check_h(Reporter& report, const DyadicFactor& d, int n) {
    const HTable& h = d.h;
    if (!h.is_threshold()) {
        const auto& g = h.grid();
        if (g.empty()) { report("h-table", "H table is empty"); return; }
        for (const auto& row : g) {
            if (row.size() != g.front().size()) { report("h-table", "H table rows differ in length"); return; }
            for (int v : row)
                if (v != 0 && v != 1) { report("h-table", "H table entries must be 0 or 1"); return; }
        }
        const int max_a = static_cast<int>(g.size()) - 1;
        const int max_b = static_cast<int>(g.front().size()) - 1;
        if (max_a < d.khi || max_b < n - d.klo)
            report("h-table", "H table must cover a-votes 0.." + std::to_string(d.khi) + " and b-votes 0.." + std::to_string(n - d.klo));
        for (int i = 0; i <= max_a; ++i)
            for (int j = 0; j <= max_b; ++j) {
                if ((i < max_a && h(i, j) > h(i + 1, j)) || (j < max_b && h(i, j) > h(i, j + 1))) {
                    report("h-table", "H must be non-decreasing in both arguments");
                    i = max_a + 1;
                    break;
                }
            }
        if (d.klo < d.khi) {
            bool iso = true;
            for (int i = 0; i <= max_a && iso; ++i)
                for (int j = 0; j <= max_b && iso; ++j)
                    if (i + 1 <= max_a && j >= 1 && h(i, j) != h(i + 1, j - 1)) iso = false;
            if (!iso) report("h-table", "H must have linear isoquants when klo < khi");
        }
    }
    if (h.defined_at(0, 0) && h(0, 0) != 0) report("h-table", "H(0,0) must be 0");
    for (int k = d.klo; k <= d.khi; ++k)
        if (h.defined_at(k, n - k) && h(k, n - k) != 1)
            report("h-table", "H(" + std::to_string(k) + "," + std::to_string(n - k) + ") must be 1");
}

}  // namespace

Diagnostics validate_factor(const FactorSpec& factor, Event cell, int n, const FeasibilityMap& feasibility,
                            const StateSpace* names) {
    Diagnostics out;
    Reporter report{out};
    if (cell.empty()) report("cell", "cell is empty");
    if (n < 2) report("voters", "need at least two voters");
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ConstantFactor>) {
                check_outcome(report, f.c, cell, feasibility, "c");
            } else if constexpr (std::is_same_v<T, SimpleFactor>) {
                check_pair(report, f.a, f.b, cell, feasibility);
                if (f.kbar < 1 || f.kbar > n) report("quota", "kbar must lie in 1.." + std::to_string(n));
            } else if constexpr (std::is_same_v<T, QuasiDictatorialFactor>) {
                check_pair(report, f.a, f.b, cell, feasibility);
                if (cell.size() < 3) report("cell", "quasi-dictatorial factors need at least three states");
                if (f.menu.size() < 3) report("menu", "menu needs at least three events");
                Event covered;
                std::set<Event> distinct;
                for (Event e : f.menu) {
                    if (e.empty()) report("menu", "menu contains an empty event");
                    if (!e.subset_of(cell)) report("menu", "menu event " + show(e, names) + " leaves the cell");
                    if (!distinct.insert(e).second) report("menu", "menu repeats " + show(e, names));
                    covered |= e;
                }
                if (covered != cell) report("menu", "menu does not cover the cell");
                if (distinct.size() == f.menu.size()) {
                    if (auto nested = check_non_nested(f.menu))
                        report("menu", "menu event " + show(f.menu[static_cast<std::size_t>(nested->first)], names) + " is nested in " +
                                           show(f.menu[static_cast<std::size_t>(nested->second)], names));
                }
            } else if constexpr (std::is_same_v<T, DyadicFactor>) {
                check_pair(report, f.a, f.b, cell, feasibility);
                if (f.e.empty() || f.f.empty() || f.e.intersects(f.f) || (f.e | f.f) != cell)
                    report("partition", "E and F must be nonempty and partition the cell");
                if (f.klo < 1 || f.khi > n - 1 || f.klo > f.khi)
                    report("quota", "need 1 <= klo <= khi <= " + std::to_string(n - 1));
                else
                    check_h(report, f, n);
            } else if constexpr (std::is_same_v<T, FilteringFactor>) {
                check_pair(report, f.a, f.b, cell, feasibility);
                if (n < 3) report("voters", "filtering factors need at least three voters");
                if (cell.size() < 3) report("cell", "filtering factors need at least three states");
                if (f.filter.klo < 1 || f.filter.khi > n - 1 || f.filter.klo >= f.filter.khi) {
                    report("quota", "need 1 <= klo < khi <= " + std::to_string(n - 1));
                    return;
                }
                for (auto d : validate_filter(f.filter, cell, names)) out.push_back(std::move(d));
                if (f.quotas.size() != f.filter.levels.size()) {
                    report("quota", "expected one quota list per level");
                    return;
                }
                for (int k = f.filter.klo; k <= f.filter.khi; ++k) {
                    const auto& qs = f.quotas[static_cast<std::size_t>(k - f.filter.klo)];
                    if (qs.size() != f.filter.at(k).pairs.size()) {
                        report("quota", "level " + std::to_string(k) + " needs one quota per pair");
                        continue;
                    }
                    for (std::size_t m = 0; m < qs.size(); ++m) {
                        if (qs[m].ttilde < 1 || qs[m].ttilde > k + 1)
                            report("quota", "level " + std::to_string(k) + " pair " + std::to_string(m + 1) + ": ttilde outside 1.." + std::to_string(k + 1));
                        if (qs[m].that < 1 || qs[m].that > n - k + 1)
                            report("quota", "level " + std::to_string(k) + " pair " + std::to_string(m + 1) + ": that outside 1.." + std::to_string(n - k + 1));
                    }
                }
            }
        },
        factor);
    return out;
}

std::vector<IsoViolation> is_iso_filtering(const FilteringFactor& factor, const StateSpace* names) {
    std::vector<IsoViolation> out;
    const auto& seq = factor.filter;
    for (int k = seq.klo; k < seq.khi; ++k) {
        const auto& lo = seq.at(k);
        const auto& hi = seq.at(k + 1);
        for (std::size_t m = 0; m < lo.pairs.size(); ++m) {
            for (std::size_t mp = 0; mp < hi.pairs.size(); ++mp) {
                const Event meet = lo.pairs[m].e & hi.pairs[mp].f;
                if (meet.empty()) continue;
                const std::string where = "levels (" + std::to_string(k) + "," + std::to_string(k + 1) + "): E" +
                                          std::to_string(m + 1) + " meets F" + std::to_string(mp + 1) + " in " + show(meet, names);
                const Quota& qlo = factor.quota(k, static_cast<int>(m));
                const Quota& qhi = factor.quota(k + 1, static_cast<int>(mp));
                if (qlo.that != 1)
                    out.push_back({k, static_cast<int>(m), static_cast<int>(mp), "intersection", "that@" + std::to_string(k),
                                   where + " but that at level " + std::to_string(k) + " is " + std::to_string(qlo.that)});
                if (qhi.ttilde != 1)
                    out.push_back({k, static_cast<int>(m), static_cast<int>(mp), "intersection", "ttilde@" + std::to_string(k + 1),
                                   where + " but ttilde at level " + std::to_string(k + 1) + " is " + std::to_string(qhi.ttilde)});
            }
        }
        for (std::size_t mp = 0; mp < hi.pairs.size(); ++mp) {
            const int m = lo.find_pair(hi.pairs[mp]);
            if (m < 0) continue;
            const Quota& qlo = factor.quota(k, m);
            const Quota& qhi = factor.quota(k + 1, static_cast<int>(mp));
            if (qlo.that != 1 || qlo.ttilde != 1 || qhi.that != 1 || qhi.ttilde != 1)
                out.push_back({k, m, static_cast<int>(mp), "persisting-pair", "all",
                               "pair " + std::to_string(mp + 1) + " of level " + std::to_string(k + 1) +
                                   " persists from level " + std::to_string(k) + " so all four quotas must be 1"});
        }
    }
    return out;
}

namespace {

struct Split {
    std::vector<int> of_a;
    std::vector<int> of_b;
};

Split split_voters(const BallotView& ballots, OutcomeId a, OutcomeId b) {
    Split s;
    for (int i = 0; i < ballots.num_voters(); ++i) (ballots.supports(i, a, b) ? s.of_a : s.of_b).push_back(i);
    return s;
}

int count_prefer(const BallotView& ballots, const std::vector<int>& group, Event e, Event f) {
    int c = 0;
    for (int i : group) c += ballots.prefers(i, e, f) ? 1 : 0;
    return c;
}

}  // namespace

Act evaluate_factor(const FactorSpec& factor, Event cell, int num_states, const BallotView& ballots) {
    Act act = Act::unassigned(num_states);
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ConstantFactor>) {
                act.assign(cell, f.c);
            } else {
                const Split s = split_voters(ballots, f.a, f.b);
                const int na = static_cast<int>(s.of_a.size());
                if constexpr (std::is_same_v<T, SimpleFactor>) {
                    act.assign(cell, na >= f.kbar ? f.a : f.b);
                } else if constexpr (std::is_same_v<T, QuasiDictatorialFactor>) {
                    if (na == 0) act.assign(cell, f.b);
                    else if (na >= 2) act.assign(cell, f.a);
                    else {
                        const int dictator = s.of_a.front();
                        Event best = f.menu.front();
                        for (std::size_t j = 1; j < f.menu.size(); ++j)
                            if (ballots.prefers(dictator, f.menu[j], best)) best = f.menu[j];
                        act.assign(cell, f.b);
                        act.assign(best, f.a);
                    }
                } else if constexpr (std::is_same_v<T, DyadicFactor>) {
                    if (na < f.klo) act.assign(cell, f.b);
                    else if (na > f.khi) act.assign(cell, f.a);
                    else {
                        const int votes_a = count_prefer(ballots, s.of_a, f.e, f.f);
                        const int votes_b = count_prefer(ballots, s.of_b, f.f, f.e);
                        const bool on_e = f.h(votes_a, votes_b) == 1;
                        act.assign(on_e ? f.e : f.f, f.a);
                        act.assign(on_e ? f.f : f.e, f.b);
                    }
                } else if constexpr (std::is_same_v<T, FilteringFactor>) {
                    if (na < f.filter.klo) act.assign(cell, f.b);
                    else if (na > f.filter.khi) act.assign(cell, f.a);
                    else {
                        const Dipartition& level = f.filter.at(na);
                        act.assign(level.ga, f.a);
                        act.assign(level.gb, f.b);
                        for (std::size_t m = 0; m < level.pairs.size(); ++m) {
                            const auto& p = level.pairs[m];
                            const Quota& q = f.quota(na, static_cast<int>(m));
                            const int for_f_a = count_prefer(ballots, s.of_a, p.f, p.e);
                            const int for_f_b = count_prefer(ballots, s.of_b, p.e, p.f);
                            const bool a_on_f = for_f_a >= q.ttilde || for_f_b >= q.that;
                            act.assign(a_on_f ? p.f : p.e, f.a);
                            act.assign(a_on_f ? p.e : p.f, f.b);
                        }
                    }
                }
            }
        },
        factor);
    return act;
}

Act evaluate_factor(const FactorSpec& factor, Event cell, const Profile& profile) {
    if (profile.size() == 0) throw std::invalid_argument("empty profile");
    ProfileView view(profile);
    return evaluate_factor(factor, cell, profile[0].belief.num_states(), view);
}

std::vector<std::vector<OutcomeId>> factor_range(const FactorSpec& factor, Event cell, int num_states, int n) {
    (void)n;  // both boundary sections are reachable for every valid binary factor
    std::vector<std::vector<OutcomeId>> out(static_cast<std::size_t>(num_states));
    std::vector<OutcomeId> values;
    if (auto ab = binary_outcomes(factor)) values = {std::min(ab->first, ab->second), std::max(ab->first, ab->second)};
    else values = {std::get<ConstantFactor>(factor).c};
    cell.for_each([&](StateId s) { out[static_cast<std::size_t>(s)] = values; });
    return out;
}

std::vector<EventPair> factor_comparisons(const FactorSpec& factor) {
    std::vector<EventPair> out;
    auto add = [&](Event e, Event f) {
        for (const auto& c : out)
            if ((c.e == e && c.f == f) || (c.e == f && c.f == e)) return;
        out.push_back({e, f});
    };
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, QuasiDictatorialFactor>) {
                for (std::size_t i = 0; i < f.menu.size(); ++i)
                    for (std::size_t j = i + 1; j < f.menu.size(); ++j) add(f.menu[i], f.menu[j]);
            } else if constexpr (std::is_same_v<T, DyadicFactor>) {
                add(f.e, f.f);
            } else if constexpr (std::is_same_v<T, FilteringFactor>) {
                for (const auto& level : f.filter.levels)
                    for (const auto& p : level.pairs) add(p.e, p.f);
            }
        },
        factor);
    return out;
}

}  // namespace seuvote
