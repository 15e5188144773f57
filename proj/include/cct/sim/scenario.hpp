#pragma once

#include "cct/cca/profile.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cct::sim {

// One dumbbell experiment: N senders share a droptail bottleneck.
struct ScenarioSpec {
    std::string id = "adhoc";      // stable name, feeds seed derivation and reports
    double bottleneck_mbps = 10.0;
    double rtt_ms = 20.0;          // two-way propagation, queueing excluded
    int queue_capacity_pkts = 0;   // 0 = auto: one bandwidth-delay product
    int competing_flows = 0;       // cross traffic appended after the subject flows
    cca::CcaId cross_cca = cca::CcaId::CUBIC;
    double random_loss_rate = 0.0; // i.i.d. per packet, applied past the bottleneck
    double duration_s = 30.0;
    double warmup_s = 5.0;         // excluded from measurement
    uint64_t seed = 1;
};

int default_queue_capacity(double bottleneck_mbps, double rtt_ms);

struct FlowSetup {
    cca::CcaId id = cca::CcaId::CUBIC;
    std::optional<cca::ControlProfile> profile; // customized wrapper when set
};

struct FlowStats {
    double mean_throughput_mbps = 0.0; // unique payload delivered over the window
    double loss_rate = 0.0;            // lost transmissions / total transmissions
    uint64_t delivered_bytes = 0;
    double rtt_mean_ms = 0.0;
    uint32_t rto_events = 0;           // retransmission timeouts fired (whole run)
    uint32_t md_events = 0;            // multiplicative decreases taken (whole run)
};

// Runs the scenario to completion; deterministic for identical inputs.
// `flows` lists the subject flows; scenario.competing_flows cross-traffic
// senders are appended internally.  Stats come back in subject order
// followed by cross traffic.
std::vector<FlowStats> run_scenario(const ScenarioSpec& sc, const std::vector<FlowSetup>& flows);

// Jain fairness index (sum x)^2 / (n * sum x^2); 1.0 for degenerate input.
double jain_index(const std::vector<double>& xs);

std::string scenario_to_text(const ScenarioSpec& sc);

} // namespace cct::sim
