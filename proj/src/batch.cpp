#include "cct/sim/batch.hpp"

namespace cct::sim {

std::vector<std::vector<FlowStats>> run_batch_serial(const std::vector<BatchJob>& jobs) {
    std::vector<std::vector<FlowStats>> out(jobs.size());
    for (size_t i = 0; i < jobs.size(); ++i)
        out[i] = run_scenario(jobs[i].scenario, jobs[i].flows);
    return out;
}

std::vector<std::vector<FlowStats>> run_batch(const std::vector<BatchJob>& jobs) {
    std::vector<std::vector<FlowStats>> out(jobs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long i = 0; i < long(jobs.size()); ++i)
        out[size_t(i)] = run_scenario(jobs[size_t(i)].scenario, jobs[size_t(i)].flows);
    return out;
}

} // namespace cct::sim
