// Times the scenario batch runner: serial reference vs. the OpenMP path,
// on a workload shaped like one evaluation sweep (standard matrix, many
// seeds).  Also asserts the two paths agree bit for bit.

#include "cct/sim/batch.hpp"
#include "cct/sim/matrix.hpp"
#include "cct/util.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace cct;

static std::vector<sim::BatchJob> build_jobs(int sweeps) {
    RequirementSet reqs;
    reqs.r1_min_mbps = 16.0;
    reqs.r2_max_mbps = 40.0;
    reqs.r3_loss_threshold = 0.05;
    reqs.home.upload_mbps = 80.0;

    cca::ControlProfile profile;
    profile.base_cca = cca::CcaId::CUBIC;
    profile.min_rate_mbps = reqs.r1_min_mbps;
    profile.max_rate_mbps = reqs.r2_max_mbps;

    std::vector<sim::BatchJob> jobs;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (const auto& gs : sim::standard_matrix(reqs)) {
            sim::BatchJob job;
            job.scenario = gs.scenario;
            job.scenario.seed = fnv1a_mix(uint64_t(sweep) + 1, fnv1a(gs.scenario.id));
            job.flows.push_back({cca::CcaId::CUBIC, profile});
            jobs.push_back(std::move(job));
        }
    }
    return jobs;
}

template <typename F>
static double time_ms(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

int main(int argc, char** argv) {
    int sweeps = 8;
    if (argc > 1) sweeps = std::atoi(argv[1]);
    auto jobs = build_jobs(sweeps);

#ifdef _OPENMP
    std::printf("openmp: %d threads\n", omp_get_max_threads());
#else
    std::printf("openmp: not compiled in, both paths are serial\n");
#endif
    std::printf("jobs: %zu (standard matrix x %d seeds)\n", jobs.size(), sweeps);

    std::vector<std::vector<sim::FlowStats>> serial, parallel;
    double t_serial = time_ms([&] { serial = sim::run_batch_serial(jobs); });
    double t_parallel = time_ms([&] { parallel = sim::run_batch(jobs); });

    bool identical = serial.size() == parallel.size();
    for (size_t i = 0; identical && i < serial.size(); ++i) {
        identical = serial[i].size() == parallel[i].size() &&
                    std::memcmp(serial[i].data(), parallel[i].data(),
                                serial[i].size() * sizeof(sim::FlowStats)) == 0;
    }

    std::printf("serial:   %8.1f ms\n", t_serial);
    std::printf("parallel: %8.1f ms\n", t_parallel);
    std::printf("speedup:  %.2fx\n", t_serial / (t_parallel > 0 ? t_parallel : 1));
    std::printf("outputs identical: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
