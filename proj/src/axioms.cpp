#include "seuvote/axioms.hpp"

#include "seuvote/lp.hpp"
#include "seuvote/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace seuvote {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::ExhaustedBudget: return "exhausted-budget";
    }
    return "?";
}

namespace {

// Evaluates and, for declared factorizations, insists that every comparison
// in the signature layout is strict.
bool generic_for(const ScfHandle& scf, const Profile& p, const SignatureLayout* layout) {
    try {
        if (layout)
            for (const auto& v : p.voters) (void)signature_of(*layout, v);
        (void)scf.evaluate(p);
        return true;
    } catch (const GenericityViolation&) {
        return false;
    }
}

Profile swapped(const Profile& p, int i, int j) {
    Profile q = p;
    std::swap(q.voters[static_cast<std::size_t>(i)], q.voters[static_cast<std::size_t>(j)]);
    return q;
}

Profile with_report(const Profile& p, int voter, const Preference& report) {
    Profile q = p;
    q[voter] = report;
    return q;
}

}  // namespace

std::vector<Profile> draw_profiles(const ScfHandle& scf, int count, std::uint64_t seed, long denominator_bound) {
    std::optional<SignatureLayout> layout;
    if (scf.mechanism) layout = make_layout(*scf.mechanism);
    ProfileConfig cfg;
    cfg.n = scf.n;
    cfg.num_states = scf.states->size();
    cfg.num_outcomes = scf.outcomes->size();
    cfg.denominator_bound = std::max<long>(denominator_bound, static_cast<long>(cfg.num_states) * cfg.num_outcomes);
    std::vector<Profile> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        bool found = false;
        for (int attempt = 0; attempt < 200 && !found; ++attempt) {
            cfg.seed = Rng::derive(seed, static_cast<std::uint64_t>(k) * 1000 + static_cast<std::uint64_t>(attempt));
            Profile p = gen_profile(cfg);
            if (generic_for(scf, p, layout ? &*layout : nullptr)) {
                out.push_back(std::move(p));
                found = true;
            }
        }
        if (!found) throw std::runtime_error("draw_profiles: could not draw a generic profile");
    }
    return out;
}

AnonymityResult check_anonymity(const ScfHandle& scf, const std::vector<Profile>& profiles) {
    AnonymityResult r;
    for (const auto& p : profiles) {
        const Act base = scf.evaluate(p);
        for (int i = 0; i < p.size(); ++i)
            for (int j = i + 1; j < p.size(); ++j) {
                ++r.checks;
                const Act other = scf.evaluate(swapped(p, i, j));
                if (other != base) {
                    r.verdict = Verdict::Fail;
                    r.witness = AnonymityWitness{p, i, j, base, other};
                    return r;
                }
            }
    }
    return r;
}

Act range_top(const OutcomeSets& range, const Valuation& v) {
    Act a = Act::unassigned(static_cast<int>(range.size()));
    for (std::size_t s = 0; s < range.size(); ++s) a[static_cast<StateId>(s)] = tau_top(v, range[s]);
    return a;
}

namespace {

// "target above competitor" edges for an act drawn from the range.
std::vector<std::pair<OutcomeId, OutcomeId>> target_edges(const OutcomeSets& range, const Act& target) {
    std::set<std::pair<OutcomeId, OutcomeId>> edges;
    for (std::size_t s = 0; s < range.size(); ++s)
        for (OutcomeId x : range[s])
            if (x != target[static_cast<StateId>(s)]) edges.emplace(target[static_cast<StateId>(s)], x);
    return {edges.begin(), edges.end()};
}

// Random linear extension of the edges restricted to `members`, top first.
std::optional<std::vector<OutcomeId>> linear_extension(const std::vector<OutcomeId>& members,
                                                       const std::vector<std::pair<OutcomeId, OutcomeId>>& edges, Rng* rng) {
    std::map<OutcomeId, int> indegree;
    for (OutcomeId x : members) indegree[x] = 0;
    for (auto [hi, lo] : edges)
        if (indegree.count(hi) && indegree.count(lo)) ++indegree[lo];
    std::vector<OutcomeId> order;
    while (order.size() < members.size()) {
        std::vector<OutcomeId> ready;
        for (auto [x, d] : indegree)
            if (d == 0) ready.push_back(x);
        if (ready.empty()) return std::nullopt;
        const OutcomeId pick = rng ? ready[static_cast<std::size_t>(rng->uniform(0, static_cast<long>(ready.size()) - 1))] : ready.front();
        order.push_back(pick);
        indegree.erase(pick);
        for (auto [hi, lo] : edges)
            if (hi == pick && indegree.count(lo)) --indegree[lo];
    }
    return order;
}

std::vector<Act> consistent_targets(const OutcomeSets& range, std::size_t cap) {
    std::vector<Act> out;
    const int ns = static_cast<int>(range.size());
    std::vector<std::size_t> slot(range.size(), 0);
    std::vector<OutcomeId> all;
    for (const auto& r : range) all.insert(all.end(), r.begin(), r.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    for (std::size_t visited = 0; visited < 64 * cap; ++visited) {
        Act a = Act::unassigned(ns);
        for (int s = 0; s < ns; ++s) a[s] = range[static_cast<std::size_t>(s)][slot[static_cast<std::size_t>(s)]];
        if (linear_extension(all, target_edges(range, a), nullptr)) out.push_back(a);
        if (out.size() >= cap) break;
        int s = ns - 1;
        for (; s >= 0; --s) {
            if (++slot[static_cast<std::size_t>(s)] < range[static_cast<std::size_t>(s)].size()) break;
            slot[static_cast<std::size_t>(s)] = 0;
        }
        if (s < 0) break;
    }
    return out;
}

// Valuation ranking targets on top (values >= 9/10) and the rest at or below 1/10.
Valuation unanimous_valuation(Rng& rng, int num_outcomes, const Act& target, const std::vector<std::pair<OutcomeId, OutcomeId>>& edges) {
    std::set<OutcomeId> tset(target.assignment.begin(), target.assignment.end());
    std::vector<OutcomeId> tops(tset.begin(), tset.end());
    std::vector<OutcomeId> rest;
    for (OutcomeId x = 0; x < num_outcomes; ++x)
        if (!tset.count(x)) rest.push_back(x);
    auto order = linear_extension(tops, edges, &rng);
    if (!order) throw std::logic_error("inconsistent range target");
    std::shuffle(rest.begin(), rest.end(), rng.engine());
    constexpr long d = 10000;
    std::vector<Rational> values(static_cast<std::size_t>(num_outcomes));
    if (rest.empty()) {
        for (std::size_t i = 0; i < order->size(); ++i)
            values[static_cast<std::size_t>((*order)[i])] = Rational(static_cast<long>(order->size() - 1 - i), static_cast<long>(order->size() - 1));
        return Valuation(std::move(values));
    }
    auto distinct_desc = [&](std::size_t count, long lo, long hi) {
        std::set<long> picks;
        while (picks.size() < count) picks.insert(rng.uniform(lo, hi));
        return std::vector<long>(picks.rbegin(), picks.rend());
    };
    // targets: top is exactly 1, others strictly between 9/10 and 1
    auto t_nums = distinct_desc(order->size() - 1, 9 * d / 10, d - 1);
    values[static_cast<std::size_t>(order->front())] = Rational(1);
    for (std::size_t i = 1; i < order->size(); ++i) values[static_cast<std::size_t>((*order)[i])] = Rational(t_nums[i - 1], d);
    // rest: bottom is exactly 0, others in (0, 1/10]
    auto r_nums = distinct_desc(rest.size() - 1, 1, d / 10);
    for (std::size_t i = 0; i + 1 < rest.size(); ++i) values[static_cast<std::size_t>(rest[i])] = Rational(r_nums[i], d);
    values[static_cast<std::size_t>(rest.back())] = Rational(0);
    return Valuation(std::move(values));
}

Belief near_uniform_belief(Rng& rng, int num_states) {
    // weights within 1% of each other
    std::vector<long> w(static_cast<std::size_t>(num_states));
    long total = 0;
    for (auto& x : w) {
        x = 10000 + rng.uniform(-50, 50);
        total += x;
    }
    std::vector<Rational> mass;
    for (long x : w) mass.emplace_back(x, total);
    return Belief(std::move(mass));
}

}  // namespace

RangeUnanimityResult check_range_unanimity(const ScfHandle& scf, int trials, std::uint64_t seed) {
    RangeUnanimityResult r;
    std::optional<SignatureLayout> layout;
    if (scf.mechanism) layout = make_layout(*scf.mechanism);
    const auto targets = consistent_targets(scf.range, 4096);
    const int ns = scf.states->size();
    const int nx = scf.outcomes->size();
    Rng rng(Rng::derive(seed, 0));
    for (int t = 0; t < trials && !targets.empty(); ++t) {
        const Act& target = targets[static_cast<std::size_t>(t) % targets.size()];
        const auto edges = target_edges(scf.range, target);
        std::optional<Profile> profile;
        for (int attempt = 0; attempt < 100 && !profile; ++attempt) {
            std::vector<Preference> voters;
            const Belief common = near_uniform_belief(rng, ns);
            for (int i = 0; i < scf.n; ++i)
                voters.push_back({unanimous_valuation(rng, nx, target, edges), t % 2 == 0 ? common : random_belief(rng, ns, 1000)});
            Profile p(std::move(voters));
            if (generic_for(scf, p, layout ? &*layout : nullptr)) profile = std::move(p);
        }
        if (!profile) throw std::runtime_error("check_range_unanimity: could not build a generic unanimous profile");
        ++r.constructed;
        const Act selected = scf.evaluate(*profile);
        if (selected != target) {
            r.verdict = Verdict::Fail;
            r.witness = RangeUnanimityWitness{*profile, target, selected};
            return r;
        }
    }
    for (const auto& p : draw_profiles(scf, trials, Rng::derive(seed, 1))) {
        ++r.sampled;
        const Act top = range_top(scf.range, p[0].valuation);
        bool shared = true;
        for (int i = 1; i < p.size() && shared; ++i) shared = range_top(scf.range, p[i].valuation) == top;
        if (!shared) continue;
        ++r.sampled_with_top;
        const Act selected = scf.evaluate(p);
        if (selected != top) {
            r.verdict = Verdict::Fail;
            r.witness = RangeUnanimityWitness{p, top, selected};
            return r;
        }
    }
    return r;
}

AchievableSet achievable_acts(const Mechanism& mech, const TypeCatalog& catalog, const Profile& profile, int deviator) {
    const auto& layout = catalog.layout();
    std::vector<VoterType> types;
    for (const auto& v : profile.voters) types.push_back(signature_of(layout, v));
    std::vector<const VoterType*> ptrs;
    for (const auto& t : types) ptrs.push_back(&t);
    std::map<Act, int> reached;
    for (int k = 0; k < catalog.size(); ++k) {
        ptrs[static_cast<std::size_t>(deviator)] = &catalog.type(k);
        SignatureView view(layout, ptrs);
        reached.emplace(evaluate_mechanism(mech, view), k);
    }
    AchievableSet out;
    out.unrealizable_signatures = catalog.unrealizable_patterns();
    for (const auto& [act, k] : reached) out.acts.push_back({act, k, catalog.realize(k)});
    return out;
}

namespace {

ManipulationWitness make_witness(const ScfHandle& scf, Profile profile, int deviator, Preference misreport) {
    ManipulationWitness w;
    w.truthful_act = scf.evaluate(profile);
    w.deviated_act = scf.evaluate(with_report(profile, deviator, misreport));
    w.truthful_eu = expected_utility(w.truthful_act, profile[deviator]);
    w.deviated_eu = expected_utility(w.deviated_act, profile[deviator]);
    w.profile = std::move(profile);
    w.deviator = deviator;
    w.misreport = std::move(misreport);
    return w;
}

SearchResult sampled_raw(const ScfHandle& scf, const SampledSearchConfig& config) {
    SearchResult r;
    r.mode = "sampled";
    const auto profiles = draw_profiles(scf, config.profiles, Rng::derive(config.seed, 0), config.denominator_bound);
    // misreport pool: random reports from other draws
    const auto pool_profiles = draw_profiles(scf, 8, Rng::derive(config.seed, 1), config.denominator_bound);
    std::vector<Preference> pool;
    for (const auto& p : pool_profiles) pool.insert(pool.end(), p.voters.begin(), p.voters.end());
    for (const auto& p : profiles) {
        ++r.stats.profiles;
        const Act truthful = scf.evaluate(p);
        for (int i = 0; i < p.size(); ++i) {
            const Rational base = expected_utility(truthful, p[i]);
            for (const auto& report : pool) {
                if (config.budget && r.stats.work >= config.budget) {
                    r.verdict = Verdict::ExhaustedBudget;
                    return r;
                }
                ++r.stats.evaluations;
                ++r.stats.work;
                Act act;
                try {
                    act = scf.evaluate(with_report(p, i, report));
                } catch (const GenericityViolation&) {
                    continue;
                }
                if (act != truthful && expected_utility(act, p[i]) > base) {
                    r.verdict = Verdict::Fail;
                    r.witness = make_witness(scf, p, i, report);
                    return r;
                }
            }
        }
    }
    return r;
}

}  // namespace

SearchResult search_manipulation_sampled(const ScfHandle& scf, const SampledSearchConfig& config) {
    if (!scf.mechanism) return sampled_raw(scf, config);
    const Mechanism& mech = *scf.mechanism;
    SearchResult r;
    r.mode = "sampled";
    const TypeCatalog catalog(make_layout(mech));
    const auto& layout = catalog.layout();
    const auto profiles = draw_profiles(scf, config.profiles, Rng::derive(config.seed, 0), config.denominator_bound);
    r.stats.estimated_work = static_cast<long double>(config.profiles) * mech.n * catalog.size();
    for (const auto& p : profiles) {
        ++r.stats.profiles;
        std::vector<VoterType> types;
        for (const auto& v : p.voters) types.push_back(signature_of(layout, v));
        std::vector<const VoterType*> ptrs;
        for (const auto& t : types) ptrs.push_back(&t);
        const Act truthful = evaluate_mechanism(mech, SignatureView(layout, ptrs));
        for (int i = 0; i < p.size(); ++i) {
            const Rational base = expected_utility(truthful, p[i]);
            std::map<Act, bool> better;
            for (int k = 0; k < catalog.size(); ++k) {
                if (catalog.type(k) == types[static_cast<std::size_t>(i)]) continue;
                if (config.budget && r.stats.work >= config.budget) {
                    r.verdict = Verdict::ExhaustedBudget;
                    return r;
                }
                ptrs[static_cast<std::size_t>(i)] = &catalog.type(k);
                const Act act = evaluate_mechanism(mech, SignatureView(layout, ptrs));
                ++r.stats.evaluations;
                ++r.stats.work;
                if (act == truthful) continue;
                auto it = better.find(act);
                if (it == better.end()) it = better.emplace(act, expected_utility(act, p[i]) > base).first;
                if (it->second) {
                    r.verdict = Verdict::Fail;
                    r.witness = make_witness(scf, p, i, catalog.realize(k));
                    if (r.witness->deviated_act != act) throw std::logic_error("signature and concrete evaluation disagree");
                    return r;
                }
            }
            ptrs[static_cast<std::size_t>(i)] = &types[static_cast<std::size_t>(i)];
        }
    }
    return r;
}

namespace {

long double multiset_count(int types, int slots) {
    // C(types + slots - 1, slots)
    long double c = 1;
    for (int i = 1; i <= slots; ++i) c = c * (types + slots - i) / i;
    return c;
}

struct GainKey {
    int cell;
    std::uint32_t pattern;
    bool prefers_a;
    std::uint32_t before;
    std::uint32_t after;
    friend auto operator<=>(const GainKey&, const GainKey&) = default;
};

class Exhaustive {
public:
    Exhaustive(const Mechanism& mech, const ExhaustiveSearchConfig& config)
        : mech_(mech), config_(config), catalog_(make_layout(mech)), layout_(catalog_.layout()) {
        for (int k = 0; k < catalog_.size(); ++k) {
            if (admits_truthful(k)) truthful_.push_back(k);
            if (admits_misreport(k)) misreport_.push_back(k);
        }
        needed_.assign(static_cast<std::size_t>(catalog_.size()), false);
        for (int k : truthful_) needed_[static_cast<std::size_t>(k)] = true;
        for (int k : misreport_) needed_[static_cast<std::size_t>(k)] = true;
        if (config_.query)
            for (const auto& c : config_.query->truthful_belief) {
                int cell = -1;
                for (std::size_t j = 0; j < layout_.cells.size(); ++j)
                    if ((c.e | c.f).subset_of(layout_.cells[j].states)) cell = static_cast<int>(j);
                if (cell < 0) throw std::invalid_argument("query comparison must lie inside one cell");
                query_rows_[cell].push_back(difference_row(layout_.cells[static_cast<std::size_t>(cell)].states, c.e, c.f));
            }
    }

    SearchResult run() {
        SearchResult r;
        r.mode = "exhaustive";
        const int others = mech_.n - 1;
        const int t = catalog_.size();
        r.stats.estimated_work = multiset_count(t, others) * static_cast<long double>(truthful_.size() + misreport_.size());
        std::vector<int> idx(static_cast<std::size_t>(others), 0);
        bool more = true;
        const int jobs = std::max(1, config_.jobs);
        constexpr std::size_t kBlock = 64;
        while (more) {
            std::vector<std::vector<int>> block;
            while (more && block.size() < kBlock) {
                block.push_back(idx);
                more = advance(idx, t);
            }
            std::vector<std::optional<Hit>> hits(block.size());
            auto work_on = [&](int worker) {
                for (std::size_t b = static_cast<std::size_t>(worker); b < block.size(); b += static_cast<std::size_t>(jobs)) {
                    if (first_hit_.load() < b) return;
                    hits[b] = scan(block[b]);
                    if (hits[b]) {
                        std::size_t cur = first_hit_.load();
                        while (b < cur && !first_hit_.compare_exchange_weak(cur, b)) {}
                    }
                }
            };
            first_hit_ = block.size();
            if (jobs == 1) work_on(0);
            else {
                std::vector<std::thread> pool;
                for (int w = 0; w < jobs; ++w) pool.emplace_back(work_on, w);
                for (auto& th : pool) th.join();
            }
            r.stats.profiles += block.size();
            r.stats.evaluations = evaluations_.load();
            r.stats.lp_solves = lp_solves_.load();
            r.stats.work = r.stats.evaluations + r.stats.lp_solves;
            for (std::size_t b = 0; b < block.size(); ++b) {
                if (!hits[b]) continue;
                r.verdict = Verdict::Fail;
                r.witness = build_witness(block[b], *hits[b]);
                return r;
            }
            if (config_.budget && r.stats.work >= config_.budget && more) {
                r.verdict = Verdict::ExhaustedBudget;
                return r;
            }
        }
        return r;
    }

private:
    struct Hit {
        int truthful;
        int misreport;
        int cell;
        std::vector<Rational> point;  // over the cell's states
    };

    static bool advance(std::vector<int>& idx, int t) {
        int j = static_cast<int>(idx.size()) - 1;
        while (j >= 0 && idx[static_cast<std::size_t>(j)] == t - 1) --j;
        if (j < 0) return false;
        const int v = idx[static_cast<std::size_t>(j)] + 1;
        for (std::size_t i = static_cast<std::size_t>(j); i < idx.size(); ++i) idx[i] = v;
        return true;
    }

    bool ranks(int k, std::pair<OutcomeId, OutcomeId> ab) const {
        const VoterType& vt = catalog_.type(k);
        const VoterType* p = &vt;
        SignatureView view(layout_, std::span<const VoterType* const>(&p, 1));
        return view.supports(0, ab.first, ab.second);
    }

    bool admits_truthful(int k) {
        if (!config_.query) return true;
        if (config_.query->truthful_ranks && !ranks(k, *config_.query->truthful_ranks)) return false;
        return true;
    }
    bool admits_misreport(int k) const {
        if (!config_.query) return true;
        if (config_.query->misreport_ranks && !ranks(k, *config_.query->misreport_ranks)) return false;
        return true;
    }

    std::optional<Hit> scan(const std::vector<int>& others) {
        std::vector<const VoterType*> ptrs(static_cast<std::size_t>(mech_.n));
        for (std::size_t i = 0; i < others.size(); ++i) ptrs[i + 1] = &catalog_.type(others[i]);
        std::vector<std::optional<Act>> acts(static_cast<std::size_t>(catalog_.size()));
        auto act_for = [&](int k) -> const Act& {
            auto& slot = acts[static_cast<std::size_t>(k)];
            if (!slot) {
                ptrs[0] = &catalog_.type(k);
                slot = evaluate_mechanism(mech_, SignatureView(layout_, ptrs));
                ++evaluations_;
            }
            return *slot;
        };
        for (int t : truthful_) {
            const Act& before = act_for(t);
            for (int m : misreport_) {
                if (m == t) continue;
                const Act& after = act_for(m);
                if (after == before) continue;
                if (auto gain = profitable(t, before, after)) return Hit{t, m, gain->first, std::move(gain->second)};
            }
        }
        return std::nullopt;
    }

    // cell and a point on it where the deviator with type t strictly gains
    std::optional<std::pair<int, std::vector<Rational>>> profitable(int t, const Act& before, const Act& after) {
        const VoterType& vt = catalog_.type(t);
        for (std::size_t c = 0; c < layout_.cells.size(); ++c) {
            const auto& cell = layout_.cells[c];
            if (cell.outcome_pair < 0) continue;
            const auto ab = *binary_outcomes(mech_.cells[static_cast<std::size_t>(cell.cell)].factor);
            const Event a_before = before.where(ab.first) & cell.states;
            const Event a_after = after.where(ab.first) & cell.states;
            if (a_before == a_after) continue;
            const bool likes_a = ranks(t, ab);
            const GainKey key{static_cast<int>(c), vt.patterns[c], likes_a, a_before.bits(), a_after.bits()};
            std::optional<std::vector<Rational>> point;
            bool cached = false;
            {
                std::lock_guard<std::mutex> lock(cache_mutex_);
                auto it = cache_.find(key);
                if (it != cache_.end()) {
                    point = it->second;
                    cached = true;
                }
            }
            if (!cached) {
                auto rows = pattern_rows(cell, vt.patterns[c]);
                if (auto q = query_rows_.find(static_cast<int>(c)); q != query_rows_.end())
                    rows.insert(rows.end(), q->second.begin(), q->second.end());
                rows.push_back(likes_a ? difference_row(cell.states, a_after, a_before) : difference_row(cell.states, a_before, a_after));
                point = find_strict_point(cell.states.size(), rows);
                ++lp_solves_;
                std::lock_guard<std::mutex> lock(cache_mutex_);
                cache_.emplace(key, point);
            }
            if (point) return std::make_pair(static_cast<int>(c), *point);
        }
        return std::nullopt;
    }

    ManipulationWitness build_witness(const std::vector<int>& others, const Hit& hit) const {
        const ScfHandle scf = handle_of(mech_);
        std::vector<Preference> voters(static_cast<std::size_t>(mech_.n));
        for (std::size_t i = 0; i < others.size(); ++i) voters[i + 1] = catalog_.realize(others[i]);
        const VoterType& vt = catalog_.type(hit.truthful);
        const std::size_t cells = layout_.cells.size();
        for (int j = 1; j <= 256; ++j) {
            // weight 1 - 2^-j on the gaining cell, the rest shared equally
            const Rational rest_weight = cells == 1 ? Rational(0) : Rational(mpq_class(mpz_class(1), mpz_class(1) << j));
            const Rational main_weight = Rational(1) - rest_weight;
            const Rational other_weight = cells == 1 ? Rational(0) : rest_weight / Rational(static_cast<long>(cells - 1));
            std::vector<Rational> mass(static_cast<std::size_t>(layout_.num_states));
            for (std::size_t c = 0; c < cells; ++c) {
                const auto& cell = layout_.cells[c];
                if (static_cast<int>(c) == hit.cell) {
                    std::size_t s_idx = 0;
                    cell.states.for_each([&](StateId s) { mass[static_cast<std::size_t>(s)] = main_weight * hit.point[s_idx++]; });
                } else {
                    const auto& pt = catalog_.cell_point(static_cast<int>(c), vt.patterns[c]);
                    cell.states.for_each([&](StateId s) { mass[static_cast<std::size_t>(s)] = other_weight * pt[static_cast<std::size_t>(s)]; });
                }
            }
            voters[0] = Preference{catalog_.valuation_for(vt.orientation), Belief(std::move(mass))};
            ManipulationWitness w = make_witness(scf, Profile(voters), 0, catalog_.realize(hit.misreport));
            if (w.deviated_eu > w.truthful_eu) return w;
            if (cells == 1) break;
        }
        throw std::logic_error("could not realize a profitable deviation");
    }

    const Mechanism& mech_;
    ExhaustiveSearchConfig config_;
    TypeCatalog catalog_;
    const SignatureLayout& layout_;
    std::vector<int> truthful_;
    std::vector<int> misreport_;
    std::vector<bool> needed_;
    std::map<int, std::vector<std::vector<Rational>>> query_rows_;
    std::mutex cache_mutex_;
    std::map<GainKey, std::optional<std::vector<Rational>>> cache_;
    std::atomic<std::uint64_t> evaluations_{0};
    std::atomic<std::uint64_t> lp_solves_{0};
    std::atomic<std::size_t> first_hit_{0};
};

}  // namespace

SearchResult search_manipulation_exhaustive(const Mechanism& mech, const ExhaustiveSearchConfig& config) {
    if (config.budget == 0) throw std::invalid_argument("exhaustive search needs a positive budget");
    Exhaustive search(mech, config);
    return search.run();
}

ReplayResult replay(const ScfHandle& scf, const ManipulationWitness& w) {
    try {
        if (w.deviator < 0 || w.deviator >= w.profile.size()) return {false, "deviator index out of range"};
        const Act truthful = scf.evaluate(w.profile);
        if (truthful != w.truthful_act) return {false, "truthful act does not reproduce"};
        const Act deviated = scf.evaluate(with_report(w.profile, w.deviator, w.misreport));
        if (deviated != w.deviated_act) return {false, "deviated act does not reproduce"};
        const Rational before = expected_utility(truthful, w.profile[w.deviator]);
        const Rational after = expected_utility(deviated, w.profile[w.deviator]);
        if (before != w.truthful_eu || after != w.deviated_eu) return {false, "expected utilities do not reproduce"};
        if (!(after > before)) return {false, "deviation is not profitable"};
        return {true, "manipulation reproduces: " + after.str() + " > " + before.str()};
    } catch (const std::exception& e) {
        return {false, e.what()};
    }
}

ReplayResult replay(const ScfHandle& scf, const RangeUnanimityWitness& w) {
    try {
        for (int i = 0; i < w.profile.size(); ++i)
            if (range_top(scf.range, w.profile[i].valuation) != w.target) return {false, "target is not every voter's range-top act"};
        const Act selected = scf.evaluate(w.profile);
        if (selected != w.selected) return {false, "selected act does not reproduce"};
        if (selected == w.target) return {false, "mechanism selects the target"};
        return {true, "range-unanimity violation reproduces"};
    } catch (const std::exception& e) {
        return {false, e.what()};
    }
}

ReplayResult replay(const ScfHandle& scf, const AnonymityWitness& w) {
    try {
        const Act a = scf.evaluate(w.profile);
        const Act b = scf.evaluate(swapped(w.profile, w.first, w.second));
        if (a != w.original || b != w.swapped) return {false, "acts do not reproduce"};
        if (a == b) return {false, "swap does not change the act"};
        return {true, "anonymity violation reproduces"};
    } catch (const std::exception& e) {
        return {false, e.what()};
    }
}

Verdict VerificationReport::overall() const {
    const Verdict all[] = {anonymity.verdict, range_unanimity.verdict, strategy_proofness.verdict};
    for (Verdict v : all)
        if (v == Verdict::Fail) return Verdict::Fail;
    for (Verdict v : all)
        if (v == Verdict::ExhaustedBudget) return Verdict::ExhaustedBudget;
    return Verdict::Pass;
}

VerificationReport verify(const ScfHandle& scf, const VerifyConfig& config) {
    if (!config.budget) throw std::invalid_argument("verify: a budget is required");
    if (!config.seed) throw std::invalid_argument("verify: a seed is required");
    VerificationReport report;
    report.seed = *config.seed;
    report.mode = config.mode == SearchMode::Exhaustive ? "exhaustive" : "sampled";
    const auto profiles = draw_profiles(scf, config.anonymity_profiles, Rng::derive(*config.seed, 1));
    report.anonymity = check_anonymity(scf, profiles);
    report.range_unanimity = check_range_unanimity(scf, config.range_trials, Rng::derive(*config.seed, 2));
    if (config.mode == SearchMode::Exhaustive) {
        if (!scf.mechanism) throw std::invalid_argument("verify: exhaustive mode needs a declared factorization");
        report.strategy_proofness = search_manipulation_exhaustive(*scf.mechanism, {*config.budget, config.jobs, std::nullopt});
    } else {
        SampledSearchConfig sc;
        sc.profiles = config.sp_profiles;
        sc.seed = Rng::derive(*config.seed, 3);
        sc.budget = *config.budget;
        report.strategy_proofness = search_manipulation_sampled(scf, sc);
    }
    return report;
}

}  // namespace seuvote
