#pragma once

#include "cct/cca/types.hpp"

#include <cstdint>
#include <string>

namespace cct::cca {

// Deliberate defects a candidate can carry; the evaluator turns each flag
// into a failure of the matching check so the repair loop has something
// real to fix.
enum FaultFlag : uint32_t {
    FAULT_NONE = 0,
    COMPILE_FAULT = 1u << 0,
    BPF_FAULT = 1u << 1,
    R1_FAULT = 1u << 2,
    R2_FAULT = 1u << 3,
    R3_FAULT = 1u << 4,
};

uint32_t fault_from_string(const std::string& name);
std::string faults_to_string(uint32_t flags);

// Everything that distinguishes a customized CCA from its base: which base
// it wraps, the throughput band it must hold, and the loss level at which
// the floor disengages.
struct ControlProfile {
    CcaId base_cca = CcaId::CUBIC;
    double min_rate_mbps = 0.0;   // floor the window must sustain
    double max_rate_mbps = 0.0;   // ceiling the window may not exceed
    double loss_threshold = 0.05; // recent-loss fraction that disables the floor
    double boost_gain = 1.0;      // scales the floor's window target, >= 1
    double cap_margin = 1.0;      // scales the ceiling's window target, <= 1
    uint32_t fault_flags = FAULT_NONE;

    bool has_fault(FaultFlag f) const { return (fault_flags & f) != 0; }
};

std::string profile_to_text(const ControlProfile& p);
ControlProfile profile_from_text(const std::string& text);

} // namespace cct::cca
