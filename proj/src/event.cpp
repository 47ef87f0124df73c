#include "seuvote/event.hpp"

namespace seuvote {

std::string StateSpace::format(Event e) const {
    std::string out = "{";
    bool first = true;
    e.for_each([&](StateId s) {
        if (!first) out += ',';
        out += label(s);
        first = false;
    });
    return out + "}";
}

std::string format_event(Event e) {
    std::string out = "{";
    bool first = true;
    e.for_each([&](StateId s) {
        if (!first) out += ',';
        out += std::to_string(s);
        first = false;
    });
    return out + "}";
}

}  // namespace seuvote
