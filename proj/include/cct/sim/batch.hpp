#pragma once

#include "cct/sim/scenario.hpp"

#include <vector>

namespace cct::sim {

struct BatchJob {
    ScenarioSpec scenario;
    std::vector<FlowSetup> flows;
};

// Runs every job and returns per-job flow stats in job order.  Jobs are
// independent and each one is internally deterministic, so the parallel
// path must produce bit-identical output to the serial one; the serial
// path is kept as the reference for asserting exactly that (and for the
// benchmark comparison).
std::vector<std::vector<FlowStats>> run_batch_serial(const std::vector<BatchJob>& jobs);
std::vector<std::vector<FlowStats>> run_batch(const std::vector<BatchJob>& jobs);

} // namespace cct::sim
