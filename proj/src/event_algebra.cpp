#include "seuvote/event_algebra.hpp"

#include "seuvote/lp.hpp"
#include "seuvote/rng.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace seuvote {

namespace {

std::string show(Event e, const StateSpace* names) { return names ? names->format(e) : format_event(e); }

std::string show_state(StateId s, const StateSpace* names) { return names ? names->label(s) : std::to_string(s); }

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent_[static_cast<std::size_t>(find(a))] = find(b); }

private:
    std::vector<int> parent_;
};

}  // namespace

Event Dipartition::cell() const {
    Event all = ga | gb;
    for (const auto& p : pairs) all |= p.e | p.f;
    return all;
}

int Dipartition::find_pair(const EventPair& p) const {
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (pairs[i] == p) return static_cast<int>(i);
    return -1;
}

bool Dipartition::has_pair(const EventPair& p) const { return find_pair(p) >= 0; }

Diagnostics check_dipartition(const Dipartition& d, Event cell, const StateSpace* names) {
    Diagnostics out;
    auto add = [&](std::string kind, std::string msg, int pair = -1) {
        out.push_back({std::move(kind), std::move(msg), -1, pair, {}});
    };
    if (d.pairs.empty()) add("malformed", "dipartition has no pairs");
    Event seen;
    auto claim = [&](Event e, const std::string& what, int pair) {
        if (e.intersects(seen)) add("malformed", what + " " + show(e, names) + " overlaps an earlier event", pair);
        seen |= e;
    };
    for (std::size_t m = 0; m < d.pairs.size(); ++m) {
        const int mi = static_cast<int>(m);
        if (d.pairs[m].e.empty()) add("malformed", "pair " + std::to_string(m + 1) + " has an empty first event", mi);
        if (d.pairs[m].f.empty()) add("malformed", "pair " + std::to_string(m + 1) + " has an empty second event", mi);
        claim(d.pairs[m].e, "event", mi);
        claim(d.pairs[m].f, "event", mi);
    }
    claim(d.ga, "residual Ga", -1);
    claim(d.gb, "residual Gb", -1);
    if ((d.ga | d.gb).empty()) add("malformed", "residual Ga and Gb are both empty");
    if (seen != cell) {
        if (!seen.subset_of(cell)) add("malformed", "events reach outside the cell: " + show(seen - cell, names));
        if (!cell.subset_of(seen)) add("malformed", "events do not cover " + show(cell - seen, names));
    }
    return out;
}

std::vector<std::vector<bool>> dipartition_relation(const Dipartition& d, int num_states) {
    std::vector<std::vector<bool>> rel(static_cast<std::size_t>(num_states), std::vector<bool>(static_cast<std::size_t>(num_states)));
    for (const auto& p : d.pairs) {
        const Event block = p.e | p.f;
        block.for_each([&](StateId s) { block.for_each([&](StateId t) { rel[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] = true; }); });
    }
    return rel;
}

Diagnostics validate_filter(const FilterSeq& seq, Event cell, const StateSpace* names) {
    Diagnostics out;
    if (seq.klo > seq.khi) {
        out.push_back({"malformed", "klo exceeds khi", -1, -1, {}});
        return out;
    }
    if (static_cast<int>(seq.levels.size()) != seq.khi - seq.klo + 1) {
        out.push_back({"malformed", "expected one dipartition per level", -1, -1, {}});
        return out;
    }
    for (int k = seq.klo; k <= seq.khi; ++k) {
        for (auto d : check_dipartition(seq.at(k), cell, names)) {
            d.level = k;
            d.message = "level " + std::to_string(k) + ": " + d.message;
            out.push_back(std::move(d));
        }
    }
    if (!out.empty()) return out;

    UnionFind uf(kMaxStates);
    for (const auto& level : seq.levels)
        for (const auto& p : level.pairs) {
            const Event block = p.e | p.f;
            const StateId root = block.lowest();
            block.for_each([&](StateId s) { uf.unite(s, root); });
        }
    const StateId anchor = cell.lowest();
    for (StateId s : cell.members()) {
        if (uf.find(s) != uf.find(anchor)) {
            out.push_back({"disconnected",
                           "states " + show_state(anchor, names) + " and " + show_state(s, names) +
                               " are not connected by the closure of the level relations",
                           -1, -1, {anchor, s}});
            break;
        }
    }

    for (int k = seq.klo; k < seq.khi; ++k) {
        const Dipartition& lo = seq.at(k);
        const Dipartition& hi = seq.at(k + 1);
        for (std::size_t m = 0; m < lo.pairs.size(); ++m) {
            const auto& p = lo.pairs[m];
            if (!hi.has_pair(p) && !p.f.subset_of(hi.ga)) {
                out.push_back({"inclusion",
                               "pair (" + show(p.e, names) + "," + show(p.f, names) + ") at level " + std::to_string(k) +
                                   " is dropped at level " + std::to_string(k + 1) + " but " + show(p.f - hi.ga, names) +
                                   " is not in Ga of level " + std::to_string(k + 1),
                               k, static_cast<int>(m), (p.f - hi.ga).members()});
            }
        }
        for (std::size_t m = 0; m < hi.pairs.size(); ++m) {
            const auto& p = hi.pairs[m];
            if (!lo.has_pair(p) && !p.e.subset_of(lo.gb)) {
                out.push_back({"inclusion",
                               "pair (" + show(p.e, names) + "," + show(p.f, names) + ") at level " + std::to_string(k + 1) +
                                   " is new relative to level " + std::to_string(k) + " but " + show(p.e - lo.gb, names) +
                                   " is not in Gb of level " + std::to_string(k),
                               k + 1, static_cast<int>(m), (p.e - lo.gb).members()});
            }
        }
    }
    return out;
}

std::optional<std::pair<int, int>> check_non_nested(const std::vector<Event>& collection) {
    for (std::size_t i = 0; i < collection.size(); ++i)
        for (std::size_t j = 0; j < collection.size(); ++j)
            if (i != j && collection[i].subset_of(collection[j]))
                return std::make_pair(static_cast<int>(i), static_cast<int>(j));
    return std::nullopt;
}

const char* to_string(ComponentKind k) {
    switch (k) {
        case ComponentKind::Trivial: return "trivial";
        case ComponentKind::Dyadic: return "dyadic";
        case ComponentKind::Rich: return "rich";
    }
    return "?";
}

bool Decomposition::richly_decomposable() const {
    return std::any_of(components.begin(), components.end(), [](const Component& c) { return c.kind == ComponentKind::Rich; });
}

namespace {

void require_proper_collection(const std::vector<Event>& collection) {
    if (collection.empty()) throw std::invalid_argument("decomposition of an empty collection");
    std::set<Event> seen;
    for (Event e : collection) {
        if (e.empty()) throw std::invalid_argument("collection contains the empty event");
        if (!seen.insert(e).second) throw std::invalid_argument("collection contains a duplicate event");
    }
}

std::vector<Event> project(const std::vector<Event>& collection, Event block) {
    std::vector<Event> out;
    out.reserve(collection.size());
    for (Event e : collection) out.push_back(e & block);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Component make_component(const std::vector<Event>& collection, Event support) {
    Component c;
    c.support = support;
    c.events = project(collection, support);
    c.kind = c.events.size() == 1 ? ComponentKind::Trivial : (c.events.size() == 2 ? ComponentKind::Dyadic : ComponentKind::Rich);
    return c;
}

Decomposition assemble(const std::vector<Event>& collection, std::vector<Event> supports) {
    std::sort(supports.begin(), supports.end(), [](Event a, Event b) { return a.lowest() < b.lowest(); });
    Decomposition d;
    for (Event s : supports) d.components.push_back(make_component(collection, s));
    return d;
}

// Every subset of `block` as a list, indexed by a mask over its members.
Event subset_from_mask(const std::vector<StateId>& members, std::uint32_t mask) {
    Event e;
    for (std::size_t j = 0; j < members.size(); ++j)
        if ((mask >> j) & 1U) e.insert(members[j]);
    return e;
}

void split(const std::vector<Event>& collection, Event block, std::vector<Event>& out) {
    const auto whole = project(collection, block);
    const auto members = block.members();
    const int size = static_cast<int>(members.size());
    if (size > 24) throw std::length_error("decomposition block too large");
    // subsets T containing the lowest member, smallest first
    std::vector<std::uint32_t> masks;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << size) - 1; mask += 2) masks.push_back(mask);
    std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
    for (std::uint32_t mask : masks) {
        const Event t = subset_from_mask(members, mask);
        const Event rest = block - t;
        const auto pt = project(collection, t);
        const auto pr = project(collection, rest);
        if (pt.size() * pr.size() != whole.size()) continue;
        split(collection, t, out);
        split(collection, rest, out);
        return;
    }
    out.push_back(block);
}

}  // namespace

Decomposition maximal_decomposition(const std::vector<Event>& collection) {
    require_proper_collection(collection);
    Event ground;
    for (Event e : collection) ground |= e;
    // Finest product split first, where a block may project some events to
    // the empty set. Such optional blocks cannot stand alone, and a maximal
    // decomposition pairs each with exactly one mandatory block; which one is
    // a free choice, so all of them go to the first mandatory block.
    std::vector<Event> blocks;
    split(collection, ground, blocks);
    std::sort(blocks.begin(), blocks.end(), [](Event a, Event b) { return a.lowest() < b.lowest(); });
    std::vector<Event> supports;
    Event optional;
    for (Event b : blocks) {
        if (project(collection, b).front().empty())
            optional |= b;
        else
            supports.push_back(b);
    }
    supports.front() |= optional;  // some block is mandatory since no event is empty
    return assemble(collection, std::move(supports));
}

std::vector<Decomposition> brute_force_decompositions(const std::vector<Event>& collection) {
    require_proper_collection(collection);
    Event ground;
    for (Event e : collection) ground |= e;
    const auto members = ground.members();
    const int n = static_cast<int>(members.size());
    if (n > 5 || collection.size() > 16) throw std::length_error("brute-force decomposition is bounded to 5 states and 16 events");
    const std::set<Event> target(collection.begin(), collection.end());

    std::vector<int> rgs(static_cast<std::size_t>(n), 0);  // restricted growth string
    std::vector<Decomposition> best;
    std::size_t best_size = 0;
    for (;;) {
        const int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        std::vector<Event> supports(static_cast<std::size_t>(blocks));
        for (int j = 0; j < n; ++j) supports[static_cast<std::size_t>(rgs[static_cast<std::size_t>(j)])].insert(members[static_cast<std::size_t>(j)]);
        std::vector<std::vector<Event>> comps;
        bool ok = true;
        for (Event s : supports) {
            std::set<Event> proj;
            for (Event e : collection) proj.insert(e & s);
            if (proj.count(Event{}) > 0) ok = false;  // components exclude the empty event
            comps.emplace_back(proj.begin(), proj.end());
        }
        // cross-component disjointness
        for (std::size_t a = 0; ok && a < comps.size(); ++a)
            for (std::size_t b = a + 1; ok && b < comps.size(); ++b)
                for (Event x : comps[a])
                    for (Event y : comps[b])
                        if (x.intersects(y)) ok = false;
        if (ok) {
            std::set<Event> product{Event{}};
            for (const auto& comp : comps) {
                std::set<Event> next;
                for (Event base : product)
                    for (Event x : comp) next.insert(base | x);
                product = std::move(next);
            }
            if (product == target && supports.size() >= best_size) {
                if (supports.size() > best_size) best.clear();
                best_size = supports.size();
                best.push_back(assemble(collection, supports));
            }
        }
        // next restricted growth string
        int j = n - 1;
        while (j > 0) {
            int prefix_max = 0;
            for (int i = 0; i < j; ++i) prefix_max = std::max(prefix_max, rgs[static_cast<std::size_t>(i)]);
            if (rgs[static_cast<std::size_t>(j)] <= prefix_max) break;
            rgs[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j <= 0) break;
        ++rgs[static_cast<std::size_t>(j)];
    }
    return best;
}

bool verify_top_order(const std::vector<Event>& collection, const Belief& p, int j, int k, int l) {
    const Rational pj = p.prob(collection[static_cast<std::size_t>(j)]);
    const Rational pk = p.prob(collection[static_cast<std::size_t>(k)]);
    const Rational pl = p.prob(collection[static_cast<std::size_t>(l)]);
    if (!(pj > pk && pk > pl)) return false;
    for (int i = 0; i < static_cast<int>(collection.size()); ++i) {
        if (i == j || i == k || i == l) continue;
        if (!(pl > p.prob(collection[static_cast<std::size_t>(i)]))) return false;
    }
    return true;
}

namespace {

constexpr std::array<std::array<int, 3>, 6> kOrders{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

std::optional<Belief> solve_top_order(const std::vector<Event>& collection, int num_states, Event ground, int j, int k, int l) {
    const auto members = ground.members();
    auto indicator = [&](Event e) {
        std::vector<Rational> row(members.size());
        for (std::size_t s = 0; s < members.size(); ++s)
            if (e.contains(members[s])) row[s] = Rational(1);
        return row;
    };
    auto diff = [&](Event a, Event b) {
        auto ra = indicator(a);
        const auto rb = indicator(b);
        for (std::size_t s = 0; s < ra.size(); ++s) ra[s] -= rb[s];
        return ra;
    };
    const auto& c = collection;
    std::vector<StrictRow> rows{diff(c[static_cast<std::size_t>(j)], c[static_cast<std::size_t>(k)]),
                                diff(c[static_cast<std::size_t>(k)], c[static_cast<std::size_t>(l)])};
    for (int i = 0; i < static_cast<int>(c.size()); ++i)
        if (i != j && i != k && i != l) rows.push_back(diff(c[static_cast<std::size_t>(l)], c[static_cast<std::size_t>(i)]));
    auto x = find_strict_point(static_cast<int>(members.size()), rows);
    if (!x) return std::nullopt;
    std::vector<Rational> mass(static_cast<std::size_t>(num_states));
    for (std::size_t s = 0; s < members.size(); ++s) mass[static_cast<std::size_t>(members[s])] = (*x)[s];
    return Belief(std::move(mass), ground);
}

}  // namespace

TopTripleResult find_top_triple(const std::vector<Event>& collection, int num_states, const TopTripleConfig& config) {
    if (collection.size() < 3) throw std::invalid_argument("find_top_triple: need at least three events");
    if (check_non_nested(collection)) throw std::invalid_argument("find_top_triple: collection is nested");
    if (!maximal_decomposition(collection).richly_decomposable())
        throw std::invalid_argument("find_top_triple: collection is not richly decomposable");
    Event ground;
    for (Event e : collection) ground |= e;
    if (!ground.subset_of(Event::full(num_states))) throw DimensionError("find_top_triple: events outside the state space");

    const int size = static_cast<int>(collection.size());
    // found[{j,k,l}] for ordered triples
    std::map<std::array<int, 3>, Belief> found;
    TopTripleResult result;
    Rng rng(config.seed);

    auto record = [&](const Belief& p) {
        std::vector<std::pair<Rational, int>> ranked;
        for (int i = 0; i < size; ++i) ranked.emplace_back(p.prob(collection[static_cast<std::size_t>(i)]), i);
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        const std::array<int, 3> key{ranked[0].second, ranked[1].second, ranked[2].second};
        if (verify_top_order(collection, p, key[0], key[1], key[2])) found.emplace(key, p);
    };
    auto complete_for = [&](std::array<int, 3> base) {
        std::sort(base.begin(), base.end());
        for (const auto& o : kOrders)
            if (!found.count({base[static_cast<std::size_t>(o[0])], base[static_cast<std::size_t>(o[1])], base[static_cast<std::size_t>(o[2])]})) return false;
        return true;
    };
    auto finish = [&](std::array<int, 3> base) {
        std::sort(base.begin(), base.end());
        TopTriple t{base[0], base[1], base[2], {}};
        for (const auto& o : kOrders)
            t.beliefs.push_back(found.at({base[static_cast<std::size_t>(o[0])], base[static_cast<std::size_t>(o[1])], base[static_cast<std::size_t>(o[2])]}));
        result.triple = std::move(t);
    };

    // random and dominant-mixed candidates
    const std::uint64_t random_phase = config.budget / 2;
    for (; result.candidates_tried < random_phase; ++result.candidates_tried) {
        Belief p = random_belief_on(rng, num_states, ground, config.denominator_bound);
        if (result.candidates_tried % 2 == 1) {
            const Event target = collection[static_cast<std::size_t>(rng.uniform(0, size - 1))];
            const Event within = target & ground;
            if (within != ground) {
                // push mass onto one event so it dominates the ranking
                const long d = std::max<long>(config.denominator_bound, 4);
                const Rational theta(rng.uniform(d / 2 + 1, d - 1), d);
                const Belief full_p = conditional_belief(p, ground);
                std::vector<Rational> mass(static_cast<std::size_t>(num_states));
                const Rational pin = full_p.prob(within), pout = full_p.prob(ground - within);
                ground.for_each([&](StateId s) {
                    mass[static_cast<std::size_t>(s)] = within.contains(s) ? theta * full_p[s] / pin : (Rational(1) - theta) * full_p[s] / pout;
                });
                p = Belief(std::move(mass), ground);
            }
        }
        record(p);
        for (const auto& [key, belief] : found) {
            (void)belief;
            if (complete_for(key)) {
                ++result.candidates_tried;
                finish(key);
                return result;
            }
        }
    }

    // exact fill for each unordered triple, most-covered first
    std::vector<std::pair<int, std::array<int, 3>>> triples;
    for (int a = 0; a < size; ++a)
        for (int b = a + 1; b < size; ++b)
            for (int c = b + 1; c < size; ++c) {
                int covered = 0;
                for (const auto& o : kOrders) {
                    const std::array<int, 3> base{a, b, c};
                    covered += static_cast<int>(found.count({base[static_cast<std::size_t>(o[0])], base[static_cast<std::size_t>(o[1])], base[static_cast<std::size_t>(o[2])]}));
                }
                triples.push_back({-covered, {a, b, c}});
            }
    std::stable_sort(triples.begin(), triples.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [neg, base] : triples) {
        (void)neg;
        bool ok = true;
        for (const auto& o : kOrders) {
            const std::array<int, 3> key{base[static_cast<std::size_t>(o[0])], base[static_cast<std::size_t>(o[1])], base[static_cast<std::size_t>(o[2])]};
            if (found.count(key)) continue;
            if (result.candidates_tried >= config.budget) return result;
            ++result.candidates_tried;
            auto p = solve_top_order(collection, num_states, ground, key[0], key[1], key[2]);
            if (!p) { ok = false; break; }
            found.emplace(key, *p);
        }
        if (ok) {
            finish(base);
            return result;
        }
    }
    return result;
}

}  // namespace seuvote
