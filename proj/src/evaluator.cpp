#include "cct/eval/evaluator.hpp"

#include "cct/cca/source.hpp"
#include "cct/errors.hpp"
#include "cct/util.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>

namespace cct::eval {

namespace {

std::optional<cca::ControlProfile> resolve_profile(const CandidateInput& cand,
                                                   std::string* error) {
    if (cand.profile) return cand.profile;
    try {
        return cca::extract_profile(cand.source_text);
    } catch (const ParseError& e) {
        if (error) *error = e.what();
        return std::nullopt;
    }
}

// Runs `cmd` capturing combined output; returns exit status or -1 when the
// shell itself could not run.
int run_capture(const std::string& cmd, std::string& output) {
    output.clear();
    FILE* p = popen((cmd + " 2>&1").c_str(), "r");
    if (!p) return -1;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) output.append(buf, n);
    int rc = pclose(p);
    if (rc == -1) return -1;
    return WEXITSTATUS(rc);
}

std::filesystem::path write_temp_source(const std::string& text) {
    auto dir = std::filesystem::temp_directory_path();
    auto path = dir / ("cct-candidate-" + std::to_string(fnv1a(text) & 0xffffff) + ".c");
    write_file(path.string(), text);
    return path;
}

CheckResult native_compile(const CandidateInput& cand) {
    const char* cc = std::getenv("CC");
    std::string compiler = cc && *cc ? cc : "cc";
    std::string probe;
    if (run_capture(compiler + " --version", probe) != 0)
        throw BackendUnavailable("C compiler '" + compiler + "' is not runnable");
    auto src = write_temp_source(cand.source_text);
    auto obj = src;
    obj.replace_extension(".o");
    std::string diag;
    int rc = run_capture(compiler + " -c " + src.string() + " -o " + obj.string(), diag);
    std::filesystem::remove(src);
    std::filesystem::remove(obj);
    if (rc != 0) return {false, diag};
    return {true, diag};
}

CheckResult native_bpf(const CandidateInput& cand) {
    const char* tool = std::getenv("CCT_BPF_TOOL");
    if (!tool || !*tool)
        throw BackendUnavailable("no BPF verifier tool configured (set CCT_BPF_TOOL)");
    auto src = write_temp_source(cand.source_text);
    std::string diag;
    int rc = run_capture(std::string(tool) + " " + src.string(), diag);
    std::filesystem::remove(src);
    if (rc == 127 || rc == -1)
        throw BackendUnavailable("BPF verifier tool failed to run: " + diag);
    return {rc == 0, diag};
}

uint64_t scenario_seed(const EvalOptions& opt, const std::string& scenario_id) {
    return fnv1a_mix(fnv1a_mix(opt.seed, fnv1a(opt.candidate_tag)), fnv1a(scenario_id));
}

class DirectRunner : public ScenarioRunner {
public:
    std::vector<sim::FlowStats> run(const sim::ScenarioSpec& sc,
                                    const std::vector<sim::FlowSetup>& flows) override {
        return sim::run_scenario(sc, flows);
    }
};

std::vector<sim::FlowStats> run_one(const EvalOptions& opt, const sim::ScenarioSpec& sc,
                                    const std::vector<sim::FlowSetup>& flows) {
    static DirectRunner direct;
    ScenarioRunner* r = opt.runner ? opt.runner : &direct;
    return r->run(sc, flows);
}

const char* feedback_tag(sim::GroupId g) {
    switch (g) {
        case sim::GroupId::R1: return "F3";
        case sim::GroupId::R2: return "F4";
        case sim::GroupId::R3: return "F5";
    }
    return "F3";
}

std::string group_feedback_text(sim::GroupId g, const GroupResult& res,
                                const RequirementSet& reqs) {
    std::ostringstream os;
    switch (g) {
        case sim::GroupId::R1:
            os << "minimum-throughput requirement of " << format_double(reqs.r1_min_mbps)
               << " Mbps not met on congested paths.";
            break;
        case sim::GroupId::R2:
            os << "maximum-throughput requirement of " << format_double(reqs.r2_max_mbps)
               << " Mbps exceeded on idle paths.";
            break;
        case sim::GroupId::R3:
            os << "under persistent loss above " << format_double(reqs.r3_loss_threshold * 100)
               << "% the program must shed throughput like its base CCA.";
            break;
    }
    if (!res.detail.empty()) os << " " << res.detail;
    for (const auto& m : res.scenarios) {
        os << " [" << m.scenario_id << ": measured " << format_double(m.measured_mbps)
           << " Mbps, bound " << format_double(m.bound_mbps) << " Mbps";
        if (g == sim::GroupId::R3)
            os << ", base " << format_double(m.reference_mbps) << " Mbps";
        double gap = g == sim::GroupId::R1 ? m.bound_mbps - m.measured_mbps
                                           : m.measured_mbps - m.bound_mbps;
        if (!m.passed) os << ", off by " << format_double(std::max(gap, 0.0)) << " Mbps";
        os << "]";
    }
    return os.str();
}

} // namespace

CheckResult check_compile(const CandidateInput& cand, CheckBackend backend) {
    if (backend == CheckBackend::NATIVE) return native_compile(cand);
    if (cand.source_text.empty() && !cand.profile)
        return {false, "no source and no profile; nothing to compile"};
    std::string perr;
    auto profile = resolve_profile(cand, &perr);
    if (!profile)
        return {false, perr.empty() ? "source carries no parseable profile block" : perr};
    if (profile->has_fault(cca::COMPILE_FAULT))
        return {false,
                "error: expected ';' after declaration of 'floor_segs' in cct_customize()"};
    return {true, ""};
}

CheckResult check_bpf(const CandidateInput& cand, CheckBackend backend) {
    if (backend == CheckBackend::NATIVE) return native_bpf(cand);
    std::string perr;
    auto profile = resolve_profile(cand, &perr);
    if (!profile) return {false, "no profile available for verification"};
    if (profile->has_fault(cca::BPF_FAULT))
        return {false, "verifier: back-edge in cct_customize() with unbounded trip count"};
    if (!(profile->min_rate_mbps > 0) || !std::isfinite(profile->min_rate_mbps))
        return {false, "verifier: minimum rate must be finite and positive"};
    if (!(profile->max_rate_mbps >= profile->min_rate_mbps) ||
        !std::isfinite(profile->max_rate_mbps))
        return {false, "verifier: maximum rate must be finite and at least the minimum"};
    if (!(profile->loss_threshold > 0.0 && profile->loss_threshold < 1.0))
        return {false, "verifier: loss threshold must lie in (0, 1)"};
    return {true, ""};
}

GroupResult check_perf_group(const CandidateInput& cand, sim::GroupId group,
                             const std::vector<sim::GroupScenario>& scenarios,
                             const RequirementSet& reqs, const EvalOptions& opt) {
    auto profile = resolve_profile(cand, nullptr);
    if (!profile)
        throw MissingProfile("candidate carries no control profile; "
                             "simulated evaluation needs one");

    GroupResult res;
    res.passed = true;
    for (const auto& gs : scenarios) {
        if (gs.group != group) continue;
        sim::ScenarioSpec sc = gs.scenario;
        sc.seed = scenario_seed(opt, sc.id);

        auto stats = run_one(opt, sc, {{profile->base_cca, *profile}});
        ScenarioMeasurement m;
        m.scenario_id = sc.id;
        m.measured_mbps = stats.at(0).mean_throughput_mbps;
        m.loss_rate = stats.at(0).loss_rate;
        switch (group) {
            case sim::GroupId::R1:
                m.bound_mbps = reqs.r1_min_mbps * kMinRateTolerance;
                m.passed = m.measured_mbps >= m.bound_mbps;
                break;
            case sim::GroupId::R2:
                m.bound_mbps = reqs.r2_max_mbps * kMaxRateTolerance;
                m.passed = m.measured_mbps <= m.bound_mbps;
                break;
            case sim::GroupId::R3: {
                auto base = run_one(opt, sc, {{profile->base_cca, std::nullopt}});
                m.reference_mbps = base.at(0).mean_throughput_mbps;
                m.bound_mbps = m.reference_mbps * kLossRegimeTolerance;
                m.passed = m.measured_mbps <= m.bound_mbps;
                break;
            }
        }
        if (!m.passed) res.passed = false;
        res.scenarios.push_back(m);
    }

    cca::FaultFlag fault = group == sim::GroupId::R1   ? cca::R1_FAULT
                           : group == sim::GroupId::R2 ? cca::R2_FAULT
                                                       : cca::R3_FAULT;
    if (profile->has_fault(fault)) {
        res.passed = false;
        res.detail = "injected " + cca::faults_to_string(fault) + " defect forces this failure.";
    }
    return res;
}

EvalReport score_and_feedback(const CheckResult& compile, const std::optional<CheckResult>& bpf,
                              const std::optional<std::map<sim::GroupId, GroupResult>>& groups) {
    EvalReport r;
    r.compile = compile;
    r.bpf = bpf;
    if (groups) r.perf_groups = *groups;

    if (!compile.passed) {
        r.score = 0;
        r.feedback.push_back({"F1", "compilation failed: " + compile.detail});
        return r;
    }
    r.score = 20;
    if (!bpf) return r;
    if (!bpf->passed) {
        r.feedback.push_back({"F2", "verifier rejected the program: " + bpf->detail});
        return r;
    }
    r.score = 40;
    if (!groups) return r;
    for (const auto& [g, res] : *groups)
        if (res.passed) r.score += 20;
    return r;
}

EvalReport evaluate(const CandidateInput& cand, const RequirementSet& reqs,
                    const EvalOptions& opt) {
    CheckResult compile = check_compile(cand, opt.backend);
    if (!compile.passed) return score_and_feedback(compile, std::nullopt, std::nullopt);

    CheckResult bpf = check_bpf(cand, opt.backend);
    if (!bpf.passed) return score_and_feedback(compile, bpf, std::nullopt);

    auto matrix = sim::standard_matrix(reqs);
    std::map<sim::GroupId, GroupResult> groups;
    std::string profile_error;
    try {
        for (sim::GroupId g : {sim::GroupId::R1, sim::GroupId::R2, sim::GroupId::R3})
            groups[g] = check_perf_group(cand, g, matrix, reqs, opt);
    } catch (const MissingProfile& e) {
        for (sim::GroupId g : {sim::GroupId::R1, sim::GroupId::R2, sim::GroupId::R3}) {
            GroupResult res;
            res.passed = false;
            res.detail = e.what();
            groups[g] = res;
        }
    }

    EvalReport r = score_and_feedback(compile, bpf, groups);
    for (const auto& [g, res] : groups)
        if (!res.passed)
            r.feedback.push_back({feedback_tag(g), group_feedback_text(g, res, reqs)});
    return r;
}

std::string report_to_text(const EvalReport& r) {
    std::ostringstream os;
    os << "score = " << r.score << "\n";
    os << "compile = " << (r.compile.passed ? "pass" : "fail") << "\n";
    if (!r.compile.detail.empty()) os << "compile_detail = " << r.compile.detail << "\n";
    if (r.bpf) {
        os << "bpf = " << (r.bpf->passed ? "pass" : "fail") << "\n";
        if (!r.bpf->detail.empty()) os << "bpf_detail = " << r.bpf->detail << "\n";
    }
    for (const auto& [g, res] : r.perf_groups) {
        os << "group_" << sim::to_string(g) << " = " << (res.passed ? "pass" : "fail") << "\n";
        for (const auto& m : res.scenarios) {
            os << "  " << m.scenario_id << ": measured " << format_double(m.measured_mbps)
               << " Mbps, bound " << format_double(m.bound_mbps) << " Mbps, loss "
               << format_double(m.loss_rate) << (m.passed ? " (pass)" : " (fail)") << "\n";
        }
    }
    for (const auto& f : r.feedback) os << f.tag << ": " << f.text << "\n";
    return os.str();
}

} // namespace cct::eval
