#pragma once

#include "seuvote/axioms.hpp"
#include "seuvote/event_algebra.hpp"
#include "seuvote/mechanism.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace seuvote::io {

using nlohmann::json;

// Rationals travel as "num/den" strings; integers are accepted on input.
json to_json(const Rational& r);
Rational rational_from(const json& j);

json to_json(const Act& act, const StateSpace& states, const OutcomeSpace& outcomes);
json to_json(const Preference& p, const StateSpace& states, const OutcomeSpace& outcomes);
json to_json(const Profile& p, const StateSpace& states, const OutcomeSpace& outcomes);

/// {"voters": [{"valuation": {outcome: r}, "belief": {state: r}}, ...]};
/// the optional "states"/"outcomes" lists must match the mechanism's labels.
Profile profile_from(const json& j, const StateSpace& states, const OutcomeSpace& outcomes);
Preference preference_from(const json& j, const StateSpace& states, const OutcomeSpace& outcomes);
Act act_from(const json& j, const StateSpace& states, const OutcomeSpace& outcomes);

json to_json(const Evaluation& e, const Mechanism& mech);

json to_json(const ManipulationWitness& w, const StateSpace& states, const OutcomeSpace& outcomes);
json to_json(const RangeUnanimityWitness& w, const StateSpace& states, const OutcomeSpace& outcomes);
json to_json(const AnonymityWitness& w, const StateSpace& states, const OutcomeSpace& outcomes);
ManipulationWitness manipulation_witness_from(const json& j, const StateSpace& states, const OutcomeSpace& outcomes);
RangeUnanimityWitness range_witness_from(const json& j, const StateSpace& states, const OutcomeSpace& outcomes);
AnonymityWitness anonymity_witness_from(const json& j, const StateSpace& states, const OutcomeSpace& outcomes);

json to_json(const SearchResult& r, const StateSpace& states, const OutcomeSpace& outcomes);
json to_json(const VerificationReport& r, const StateSpace& states, const OutcomeSpace& outcomes);

json to_json(const Diagnostics& d, const StateSpace* states);
json to_json(const std::vector<IsoViolation>& v);

struct EventsFile {
    StateSpace states;
    std::vector<Event> events;
};
/// {"states": [...], "events": [[label, ...], ...]}
EventsFile events_from(const json& j);
json to_json(const Decomposition& d, const StateSpace& states);

}  // namespace seuvote::io
