#pragma once

#include "cct/cca/profile.hpp"
#include "cct/requirements.hpp"
#include "cct/sim/matrix.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cct::eval {

enum class CheckBackend { SIMULATED, NATIVE };

// What the evaluator needs to know about a candidate: the rendered source
// and, when recoverable, its embedded control profile.
struct CandidateInput {
    std::string source_text;
    std::optional<cca::ControlProfile> profile;
};

struct CheckResult {
    bool passed = false;
    std::string detail; // diagnostics for failures, empty or note for passes
};

struct ScenarioMeasurement {
    std::string scenario_id;
    double measured_mbps = 0.0;  // candidate flow
    double bound_mbps = 0.0;     // pass bound including tolerance
    double reference_mbps = 0.0; // unmodified-base measurement (loss group only)
    double loss_rate = 0.0;
    bool passed = false;
};

struct GroupResult {
    bool passed = false;
    std::vector<ScenarioMeasurement> scenarios;
    std::string detail; // set for non-measurement failures (injected defect, ...)
};

struct FeedbackMsg {
    std::string tag; // F1 compile, F2 verifier, F3/F4/F5 per requirement group
    std::string text;
};

struct EvalReport {
    CheckResult compile;
    std::optional<CheckResult> bpf;                 // absent: never evaluated
    std::map<sim::GroupId, GroupResult> perf_groups; // empty: never evaluated
    int score = 0;                                   // 0,20,40,60,80,100
    std::vector<FeedbackMsg> feedback;
};

// Test seam: evaluation runs scenarios through this interface so tests can
// count or stub simulator invocations.
class ScenarioRunner {
public:
    virtual ~ScenarioRunner() = default;
    virtual std::vector<sim::FlowStats> run(const sim::ScenarioSpec& sc,
                                            const std::vector<sim::FlowSetup>& flows) = 0;
};

struct EvalOptions {
    CheckBackend backend = CheckBackend::SIMULATED;
    uint64_t seed = 1;                  // run seed; per-scenario seeds derive from it
    std::string candidate_tag = "c0";   // stable id feeding seed derivation
    ScenarioRunner* runner = nullptr;   // null: run the embedded simulator
};

// Pass tolerances, pinned project-wide.
inline constexpr double kMinRateTolerance = 0.95;  // floor may fall 5% short
inline constexpr double kMaxRateTolerance = 1.05;  // ceiling may overshoot 5%
inline constexpr double kLossRegimeTolerance = 1.10; // vs. unmodified base

CheckResult check_compile(const CandidateInput& cand, CheckBackend backend);
CheckResult check_bpf(const CandidateInput& cand, CheckBackend backend);

// Runs one group of the matrix for the candidate.  Throws MissingProfile
// when no profile is available (simulated evaluation requires one).
GroupResult check_perf_group(const CandidateInput& cand, sim::GroupId group,
                             const std::vector<sim::GroupScenario>& scenarios,
                             const RequirementSet& reqs, const EvalOptions& opt);

// Assembles score and feedback from executed checks; checks not reached by
// the ladder are passed as absent.
EvalReport score_and_feedback(const CheckResult& compile, const std::optional<CheckResult>& bpf,
                              const std::optional<std::map<sim::GroupId, GroupResult>>& groups);

// Full ladder with short-circuiting: compile, verifier, then the three
// performance groups over the standard matrix.
EvalReport evaluate(const CandidateInput& cand, const RequirementSet& reqs,
                    const EvalOptions& opt);

std::string report_to_text(const EvalReport& r);

} // namespace cct::eval
