#pragma once

#include "cct/requirements.hpp"
#include "cct/sim/scenario.hpp"

#include <string>
#include <vector>

namespace cct::sim {

// The three performance check groups, each probing one requirement.
enum class GroupId { R1, R2, R3 };

std::string to_string(GroupId g);

struct GroupScenario {
    GroupId group;
    ScenarioSpec scenario;
};

// The fixed six-scenario evaluation matrix for a requirement set: each
// group at a short (20 ms) and a long (100 ms) RTT over the user's uplink.
// R1 scenarios add four Cubic cross flows (contended path), R2 runs on an
// idle path, R3 injects random loss at 1.2x the profile's loss threshold
// so the fallback regime is decisively engaged.  Scenario seeds are left
// at zero; the evaluator derives them per candidate.
std::vector<GroupScenario> standard_matrix(const RequirementSet& reqs);

} // namespace cct::sim
