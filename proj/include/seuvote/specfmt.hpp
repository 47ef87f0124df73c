#pragma once

#include "seuvote/mechanism.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seuvote {

struct SourceLocation {
    int line = 1;
    int column = 1;
    friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

struct ParseError {
    SourceLocation where;
    std::string expected;
    std::string found;

    [[nodiscard]] std::string message() const;
};

struct SpecDocument {
    Mechanism mechanism;
    std::map<std::string, SourceLocation> cell_locations;
    std::map<std::string, SourceLocation> factor_locations;
};

struct ParseResult {
    std::optional<SpecDocument> document;
    std::vector<ParseError> errors;
    [[nodiscard]] bool ok() const { return document.has_value(); }
};

/// Parses a mechanism document. Never throws on malformed input; structural
/// checks beyond the grammar are left to validate_mechanism.
ParseResult parse_spec(std::string_view text);

/// Canonical text: states, outcomes, one feasible line per state, voters,
/// cells, then factors in cell order.
std::string serialize(const Mechanism& mech);

struct NamedFilter {
    std::string name;
    FilterSeq filter;
    SourceLocation where;
};

/// `states:` header followed by `filter NAME: klo=.. khi=.. level ..` blocks.
struct FilterDocument {
    StateSpace states;
    std::vector<NamedFilter> filters;
};

struct FilterParseResult {
    std::optional<FilterDocument> document;
    std::vector<ParseError> errors;
    [[nodiscard]] bool ok() const { return document.has_value(); }
};

FilterParseResult parse_filters(std::string_view text);
std::string serialize(const FilterDocument& doc);

}  // namespace seuvote
