#include "seuvote/fixtures.hpp"

#include <stdexcept>

namespace seuvote::fixtures {

namespace {

constexpr std::string_view kReunionPhi = R"(states: c r o s w
outcomes: B D M P V
feasible c: B M P V
feasible r: M V
feasible o: M V
feasible s: B D M P V
feasible w: M V
voters: 10
cell C1: c s
cell C2: r o w
factor C1: dyadic a=B b=P E={c} F={s} klo=4 khi=6 H=threshold(6)
factor C2: quasidict a=M b=V menu={r}|{o}|{w}
)";

// D is added to the cloudy-day options so the simple factor over {B, D} is feasible.
constexpr std::string_view kReunionPhiPrime = R"(states: c r o s w
outcomes: B D M P V
feasible c: B D M P V
feasible r: M V
feasible o: M V
feasible s: B D M P V
feasible w: M V
voters: 10
cell C1: s
cell C2: c
cell C3: r o w
factor C1: constant c=D
factor C2: simple a=B b=D kbar=4
factor C3: filtering a=M b=V klo=4 khi=5
  level 4: pairs=({r},{o}) Ga={} Gb={w} quotas=(ttilde=5,that=1)
  level 5: pairs=({w},{r}) Ga={o} Gb={} quotas=(ttilde=1,that=6)
)";

constexpr std::string_view kExample2 = R"(states: w1 w2 w3
outcomes: a b
feasible w1: a b
feasible w2: a b
feasible w3: a b
voters: 3
cell C: w1 w2 w3
factor C: filtering a=a b=b klo=1 khi=2
  level 1: pairs=({w2},{w1}) Ga={} Gb={w3} quotas=(ttilde=2,that=1)
  level 2: pairs=({w3},{w2}) Ga={w1} Gb={} quotas=(ttilde=1,that=2)
)";

constexpr std::string_view kExample3 = R"(states: w1 w2 w3 w4 w5 w6 w7
outcomes: a b
feasible w1: a b
feasible w2: a b
feasible w3: a b
feasible w4: a b
feasible w5: a b
feasible w6: a b
feasible w7: a b
voters: 10
cell C: w1 w2 w3 w4 w5 w6 w7
factor C: filtering a=a b=b klo=1 khi=3
  level 1: pairs=({w1,w2,w3},{w4}) Ga={} Gb={w5,w6,w7} quotas=(ttilde=1,that=2)
  level 2: pairs=({w6},{w1});({w5},{w2}) Ga={w3,w4} Gb={w7} quotas=(ttilde=1,that=2);(ttilde=1,that=2)
  level 3: pairs=({w7},{w5,w6}) Ga={w1,w2,w3,w4} Gb={} quotas=(ttilde=1,that=2)
)";

constexpr std::string_view kExample4ii = R"(states: w1 w2 w3 w4 w5 w6 w7
outcomes: a b
feasible w1: a b
feasible w2: a b
feasible w3: a b
feasible w4: a b
feasible w5: a b
feasible w6: a b
feasible w7: a b
voters: 10
cell C: w1 w2 w3 w4 w5 w6 w7
factor C: filtering a=a b=b klo=1 khi=3
  level 1: pairs=({w1,w2,w3},{w4}) Ga={} Gb={w5,w6,w7} quotas=(ttilde=1,that=1)
  level 2: pairs=({w6},{w1});({w5},{w2}) Ga={w3,w4} Gb={w7} quotas=(ttilde=1,that=1);(ttilde=1,that=1)
  level 3: pairs=({w7},{w5,w6}) Ga={w1,w2,w3,w4} Gb={} quotas=(ttilde=1,that=1)
)";

constexpr std::string_view kExample1Filters = R"(states: w1 w2 w3 w4 w5 w6 w7
filter c1-c2-c3: klo=1 khi=3
  level 1: pairs=({w1},{w4});({w2},{w3}) Ga={} Gb={w5,w6,w7}
  level 2: pairs=({w5,w6},{w1});({w2},{w3}) Ga={w4} Gb={w7}
  level 3: pairs=({w7},{w2,w5}) Ga={w1,w3,w4,w6} Gb={}
filter c1-c2: klo=1 khi=2
  level 1: pairs=({w1},{w4});({w2},{w3}) Ga={} Gb={w5,w6,w7}
  level 2: pairs=({w5,w6},{w1});({w2},{w3}) Ga={w4} Gb={w7}
filter c1-c2-c3bar: klo=1 khi=3
  level 1: pairs=({w1},{w4});({w2},{w3}) Ga={} Gb={w5,w6,w7}
  level 2: pairs=({w5,w6},{w1});({w2},{w3}) Ga={w4} Gb={w7}
  level 3: pairs=({w7},{w3,w5}) Ga={w1,w2,w4,w6} Gb={}
)";

struct Named {
    std::string_view name;
    std::string_view text;
};

constexpr Named kSpecs[] = {
    {"reunion-phi", kReunionPhi},
    {"reunion-phi-prime", kReunionPhiPrime},
    {"example2", kExample2},
    {"example3", kExample3},
    {"example4ii", kExample4ii},
};

Mechanism parse_or_throw(std::string_view text) {
    auto r = parse_spec(text);
    if (!r.ok()) throw std::logic_error("built-in fixture does not parse: " + r.errors.front().message());
    return std::move(r.document->mechanism);
}

}  // namespace

std::string_view spec_text(std::string_view name) {
    for (const auto& s : kSpecs)
        if (s.name == name) return s.text;
    throw std::invalid_argument("unknown fixture '" + std::string(name) + "'");
}

const std::vector<std::string>& mechanism_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& s : kSpecs) v.emplace_back(s.name);
        return v;
    }();
    return names;
}

Mechanism mechanism(std::string_view name) { return parse_or_throw(spec_text(name)); }

Mechanism reunion_phi() { return mechanism("reunion-phi"); }
Mechanism reunion_phi_prime() { return mechanism("reunion-phi-prime"); }
Mechanism example2() { return mechanism("example2"); }
Mechanism example3() { return mechanism("example3"); }
Mechanism example4ii() { return mechanism("example4ii"); }

RawMechanism majority_fixture() {
    RawMechanism m;
    m.states = StateSpace({"w1", "w2", "w3"});
    m.outcomes = OutcomeSpace({"a", "b", "c", "d"});
    m.feasibility = FeasibilityMap({{0, 1}, {0, 2, 3}, {0, 2, 3}});
    m.n = 5;
    Act f = Act::unassigned(3), g = Act::unassigned(3);
    f[0] = 0, f[1] = 2, f[2] = 3;
    g[0] = 1, g[1] = 3, g[2] = 2;
    m.rule = PairwiseMajority{f, g};
    return m;
}

std::string_view example1_filter_text() { return kExample1Filters; }

FilterDocument example1_filters() {
    auto r = parse_filters(kExample1Filters);
    if (!r.ok()) throw std::logic_error("built-in filter fixture does not parse: " + r.errors.front().message());
    return std::move(*r.document);
}

}  // namespace seuvote::fixtures
