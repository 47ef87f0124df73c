#pragma once

#include "seuvote/mechanism.hpp"
#include "seuvote/specfmt.hpp"

#include <string>
#include <string_view>
#include <vector>

// Worked examples shipped with the library so demos and acceptance runs need
// no files. The same texts live under fixtures/ in the source tree.
namespace seuvote::fixtures {

/// Canonical .scf text of a named mechanism fixture; throws on unknown names.
std::string_view spec_text(std::string_view name);
/// Names accepted by spec_text/mechanism, in a fixed order.
const std::vector<std::string>& mechanism_names();
Mechanism mechanism(std::string_view name);

Mechanism reunion_phi();
Mechanism reunion_phi_prime();
Mechanism example2();
Mechanism example3();
Mechanism example4ii();

/// Majority vote between (a,c,d) and (b,d,c): anonymous and strategy-proof,
/// not range-unanimous.
RawMechanism majority_fixture();

/// Candidate filters over w1..w7: "c1-c2-c3" (valid), "c1-c2" (disconnected),
/// "c1-c2-c3bar" (inclusion failure).
std::string_view example1_filter_text();
FilterDocument example1_filters();

}  // namespace seuvote::fixtures
