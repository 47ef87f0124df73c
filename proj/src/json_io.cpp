#include "seuvote/json_io.hpp"

#include <stdexcept>

namespace seuvote::io {

json to_json(const Rational& r) { return r.str(); }

Rational rational_from(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw std::invalid_argument("expected a rational such as \"3/4\"");
}

json to_json(const Act& act, const StateSpace& states, const OutcomeSpace& outcomes) {
    json j = json::object();
    for (StateId s = 0; s < act.size(); ++s)
        if (act[s] != Act::kUnassigned) j[states.label(s)] = outcomes.label(act[s]);
    return j;
}

Act act_from(const json& j, const StateSpace& states, const OutcomeSpace& outcomes) {
    Act act = Act::unassigned(states.size());
    for (const auto& [k, v] : j.items()) act[states.index(k)] = outcomes.index(v.get<std::string>());
    return act;
}

json to_json(const Preference& p, const StateSpace& states, const OutcomeSpace& outcomes) {
    json v = json::object(), b = json::object();
    for (OutcomeId x = 0; x < outcomes.size(); ++x) v[outcomes.label(x)] = to_json(p.valuation[x]);
    for (StateId s = 0; s < states.size(); ++s) b[states.label(s)] = to_json(p.belief[s]);
    return {{"valuation", v}, {"belief", b}};
}

Preference preference_from(const json& j, const StateSpace& states, const OutcomeSpace& outcomes) {
    std::vector<Rational> values(static_cast<std::size_t>(outcomes.size()));
    std::vector<bool> seen_x(values.size(), false);
    for (const auto& [k, v] : j.at("valuation").items()) {
        const auto x = static_cast<std::size_t>(outcomes.index(k));
        values[x] = rational_from(v);
        seen_x[x] = true;
    }
    for (std::size_t x = 0; x < values.size(); ++x)
        if (!seen_x[x]) throw std::invalid_argument("valuation misses outcome '" + outcomes.label(static_cast<int>(x)) + "'");
    std::vector<Rational> mass(static_cast<std::size_t>(states.size()));
    Event support;
    for (const auto& [k, v] : j.at("belief").items()) {
        const StateId s = states.index(k);
        mass[static_cast<std::size_t>(s)] = rational_from(v);
        if (mass[static_cast<std::size_t>(s)].sign() != 0) support.insert(s);
    }
    return {Valuation(std::move(values)), Belief(std::move(mass), support)};
}

json to_json(const Profile& p, const StateSpace& states, const OutcomeSpace& outcomes) {
    json voters = json::array();
    for (const auto& v : p.voters) voters.push_back(to_json(v, states, outcomes));
    return {{"n", p.size()}, {"states", states.labels()}, {"outcomes", outcomes.labels()}, {"voters", voters}};
}

Profile profile_from(const json& j, const StateSpace& states, const OutcomeSpace& outcomes) {
    if (j.contains("states") && j.at("states").get<std::vector<std::string>>() != states.labels())
        throw std::invalid_argument("profile states do not match the mechanism");
    if (j.contains("outcomes") && j.at("outcomes").get<std::vector<std::string>>() != outcomes.labels())
        throw std::invalid_argument("profile outcomes do not match the mechanism");
    std::vector<Preference> voters;
    for (const auto& v : j.at("voters")) voters.push_back(preference_from(v, states, outcomes));
    if (j.contains("n") && j.at("n").get<int>() != static_cast<int>(voters.size()))
        throw std::invalid_argument("\"n\" does not match the number of voters");
    return Profile(std::move(voters));
}

json to_json(const Evaluation& e, const Mechanism& mech) {
    json sections = json::object();
    for (std::size_t c = 0; c < mech.cells.size(); ++c)
        sections[mech.cells[c].name] = e.sections[c] < 0 ? json(nullptr) : json(e.sections[c]);
    return {{"act", to_json(e.act, mech.states, mech.outcomes)}, {"sections", sections}};
}

json to_json(const ManipulationWitness& w, const StateSpace& states, const OutcomeSpace& outcomes) {
    return {{"kind", "manipulation"},
            {"profile", to_json(w.profile, states, outcomes)},
            {"deviator", w.deviator},
            {"misreport", to_json(w.misreport, states, outcomes)},
            {"truthful_act", to_json(w.truthful_act, states, outcomes)},
            {"deviated_act", to_json(w.deviated_act, states, outcomes)},
            {"truthful_eu", to_json(w.truthful_eu)},
            {"deviated_eu", to_json(w.deviated_eu)}};
}

json to_json(const RangeUnanimityWitness& w, const StateSpace& states, const OutcomeSpace& outcomes) {
    return {{"kind", "range-unanimity"},
            {"profile", to_json(w.profile, states, outcomes)},
            {"target", to_json(w.target, states, outcomes)},
            {"selected", to_json(w.selected, states, outcomes)}};
}

json to_json(const AnonymityWitness& w, const StateSpace& states, const OutcomeSpace& outcomes) {
    return {{"kind", "anonymity"},
            {"profile", to_json(w.profile, states, outcomes)},
            {"first", w.first},
            {"second", w.second},
            {"original", to_json(w.original, states, outcomes)},
            {"swapped", to_json(w.swapped, states, outcomes)}};
}

ManipulationWitness manipulation_witness_from(const json& j, const StateSpace& states, const OutcomeSpace& outcomes) {
    ManipulationWitness w;
    w.profile = profile_from(j.at("profile"), states, outcomes);
    w.deviator = j.at("deviator").get<int>();
    w.misreport = preference_from(j.at("misreport"), states, outcomes);
    w.truthful_act = act_from(j.at("truthful_act"), states, outcomes);
    w.deviated_act = act_from(j.at("deviated_act"), states, outcomes);
    w.truthful_eu = rational_from(j.at("truthful_eu"));
    w.deviated_eu = rational_from(j.at("deviated_eu"));
    return w;
}

RangeUnanimityWitness range_witness_from(const json& j, const StateSpace& states, const OutcomeSpace& outcomes) {
    return {profile_from(j.at("profile"), states, outcomes), act_from(j.at("target"), states, outcomes),
            act_from(j.at("selected"), states, outcomes)};
}

AnonymityWitness anonymity_witness_from(const json& j, const StateSpace& states, const OutcomeSpace& outcomes) {
    return {profile_from(j.at("profile"), states, outcomes), j.at("first").get<int>(), j.at("second").get<int>(),
            act_from(j.at("original"), states, outcomes), act_from(j.at("swapped"), states, outcomes)};
}

json to_json(const SearchResult& r, const StateSpace& states, const OutcomeSpace& outcomes) {
    return {{"verdict", to_string(r.verdict)},
            {"mode", r.mode},
            {"stats",
             {{"profiles", r.stats.profiles},
              {"evaluations", r.stats.evaluations},
              {"lp_solves", r.stats.lp_solves},
              {"work", r.stats.work},
              {"estimated_work", static_cast<double>(r.stats.estimated_work)}}},
            {"witness", r.witness ? to_json(*r.witness, states, outcomes) : json(nullptr)}};
}

json to_json(const VerificationReport& r, const StateSpace& states, const OutcomeSpace& outcomes) {
    const auto& a = r.anonymity;
    const auto& u = r.range_unanimity;
    return {{"verdict", to_string(r.overall())},
            {"seed", r.seed},
            {"mode", r.mode},
            {"anonymity",
             {{"verdict", to_string(a.verdict)},
              {"checks", a.checks},
              {"witness", a.witness ? to_json(*a.witness, states, outcomes) : json(nullptr)}}},
            {"range_unanimity",
             {{"verdict", to_string(u.verdict)},
              {"constructed", u.constructed},
              {"sampled", u.sampled},
              {"sampled_with_top", u.sampled_with_top},
              {"witness", u.witness ? to_json(*u.witness, states, outcomes) : json(nullptr)}}},
            {"strategy_proofness", to_json(r.strategy_proofness, states, outcomes)}};
}

namespace {
json labels_of(const std::vector<StateId>& ids, const StateSpace* states) {
    json out = json::array();
    for (StateId s : ids) out.push_back(states ? json(states->label(s)) : json(s));
    return out;
}
json event_labels(Event e, const StateSpace& states) { return labels_of(e.members(), &states); }
}  // namespace

json to_json(const Diagnostics& d, const StateSpace* states) {
    json out = json::array();
    for (const auto& x : d) {
        json item = {{"kind", x.kind}, {"message", x.message}};
        if (x.level >= 0) item["level"] = x.level;
        if (x.pair >= 0) item["pair"] = x.pair;
        if (!x.states.empty()) item["states"] = labels_of(x.states, states);
        out.push_back(std::move(item));
    }
    return out;
}

json to_json(const std::vector<IsoViolation>& v) {
    json out = json::array();
    for (const auto& x : v)
        out.push_back({{"level", x.level},
                       {"pair_lo", x.pair_lo},
                       {"pair_hi", x.pair_hi},
                       {"rule", x.rule},
                       {"quota", x.quota},
                       {"message", x.message}});
    return out;
}

EventsFile events_from(const json& j) {
    EventsFile f{StateSpace(j.at("states").get<std::vector<std::string>>()), {}};
    for (const auto& e : j.at("events")) {
        Event ev;
        for (const auto& s : e) ev.insert(f.states.index(s.get<std::string>()));
        f.events.push_back(ev);
    }
    return f;
}

json to_json(const Decomposition& d, const StateSpace& states) {
    json comps = json::array();
    for (const auto& c : d.components) {
        json events = json::array();
        for (Event e : c.events) events.push_back(event_labels(e, states));
        comps.push_back({{"support", event_labels(c.support, states)}, {"kind", to_string(c.kind)}, {"events", events}});
    }
    return {{"components", comps}, {"richly_decomposable", d.richly_decomposable()}};
}

}  // namespace seuvote::io
