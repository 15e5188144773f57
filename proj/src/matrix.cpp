#include "cct/sim/matrix.hpp"

#include <algorithm>

namespace cct::sim {

std::string to_string(GroupId g) {
    switch (g) {
        case GroupId::R1: return "r1";
        case GroupId::R2: return "r2";
        case GroupId::R3: return "r3";
    }
    return "r1";
}

std::vector<GroupScenario> standard_matrix(const RequirementSet& reqs) {
    std::vector<GroupScenario> out;
    const double rtts[2] = {20.0, 100.0};
    const char* rtt_tag[2] = {"short", "long"};
    for (GroupId g : {GroupId::R1, GroupId::R2, GroupId::R3}) {
        for (int i = 0; i < 2; ++i) {
            ScenarioSpec sc;
            sc.id = to_string(g) + "-" + rtt_tag[i];
            sc.bottleneck_mbps = reqs.home.upload_mbps;
            sc.rtt_ms = rtts[i];
            sc.queue_capacity_pkts = 0; // auto: one BDP
            sc.competing_flows = g == GroupId::R1 ? 4 : 0;
            sc.cross_cca = cca::CcaId::CUBIC;
            sc.random_loss_rate =
                g == GroupId::R3 ? std::min(1.2 * reqs.r3_loss_threshold, 0.5) : 0.0;
            sc.duration_s = 30.0;
            sc.warmup_s = 5.0;
            sc.seed = 0;
            out.push_back({g, sc});
        }
    }
    return out;
}

} // namespace cct::sim
