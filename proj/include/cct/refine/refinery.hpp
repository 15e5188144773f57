#pragma once

#include "cct/cca/profile.hpp"
#include "cct/eval/evaluator.hpp"
#include "cct/prompt/prompt.hpp"
#include "cct/refine/chat.hpp"
#include "cct/requirements.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cct::refine {

enum class Backend { REFERENCE, LLM };

Backend backend_from_string(const std::string& name);
std::string to_string(Backend b);

struct PriceTable {
    double prompt_usd_per_mtok = 2.5;
    double completion_usd_per_mtok = 10.0;
};

struct RefinerConfig {
    Backend backend = Backend::REFERENCE;
    std::string model_id = "chat-default";
    double temperature = 0.5;
    int pool_size = 5;
    int max_iterations = 5; // total generation rounds (initial pool counts as one)
    prompt::Mode prompt_mode = prompt::Mode::COT;

    // Injected defects for loop testing: per-candidate-index flags, plus a
    // wildcard applied to every index without an explicit entry.
    std::map<int, uint32_t> fault_plan;
    uint32_t fault_plan_rest = 0;

    PriceTable prices;
    ChatTransport* transport = nullptr; // LLM backend only
    uint64_t seed = 1;
    eval::CheckBackend eval_backend = eval::CheckBackend::SIMULATED;
    eval::ScenarioRunner* runner = nullptr; // test seam passthrough

    // When set, called with every chat exchange before the loop advances.
    std::function<void(const std::string& candidate_id, int turn, const ChatRequest&,
                       const ChatResponse&)>
        exchange_sink;
};

// Validates config invariants; throws InvalidSpec on violation.
void validate(const RefinerConfig& cfg);

struct CandidateCost {
    uint64_t prompt_tokens = 0;
    uint64_t completion_tokens = 0;
    double usd = 0.0;
};

struct Candidate {
    std::string id; // "c0", "c1", ... unique within one run
    int iteration_born = 0;
    std::optional<std::string> parent_id; // set iff iteration_born > 0
    std::string source_text;
    std::optional<cca::ControlProfile> profile;
    std::optional<eval::EvalReport> report;
    CandidateCost cost;
    std::optional<std::string> contract_violation; // reply format breach, if any
    std::vector<ChatMessage> conversation;         // LLM: grows across refinements
};

struct CandidateRow {
    std::string id;
    int score = 0;
    double usd = 0.0;
};

struct IterationRow {
    std::vector<CandidateRow> candidates; // pool order
    int best_score = 0;
    double cumulative_usd = 0.0;
};

enum class RunStatus { SUCCEEDED, EXHAUSTED };

std::string to_string(RunStatus s);

struct RunHistory {
    std::vector<IterationRow> iterations;
    RunStatus status = RunStatus::EXHAUSTED;
    double total_usd = 0.0;
    std::string best_id;
};

std::string history_to_text(const RunHistory& h);
RunHistory history_from_text(const std::string& text); // throws ParseError

// Thrown when the LLM transport fails mid-run; carries whatever was
// produced before the failure so callers can persist partial artifacts.
struct RefinerUnavailable : std::runtime_error {
    RefinerUnavailable(const std::string& what, std::vector<Candidate> partial_pool,
                       RunHistory partial_history)
        : std::runtime_error(what),
          partial_pool(std::move(partial_pool)),
          partial_history(std::move(partial_history)) {}
    std::vector<Candidate> partial_pool;
    RunHistory partial_history;
};

uint32_t planned_faults(const RefinerConfig& cfg, int index);

// Produces the initial pool.  REFERENCE renders profiles straight from the
// requirements across a ladder of boost gains; LLM issues one chat request
// per slot and applies the single-code-block contract.
std::vector<Candidate> generate_pool(const prompt::Prompt& p, const RequirementSet& reqs,
                                     cca::CcaId base, const RefinerConfig& cfg);

// One refinement round over an evaluated pool: perfect candidates survive
// untouched, failing ones are regenerated from their feedback.
std::vector<Candidate> refine(const std::vector<Candidate>& pool, const prompt::Prompt& p,
                              const RequirementSet& reqs, cca::CcaId base,
                              const RefinerConfig& cfg, int iteration, int* next_id);

struct RunOutcome {
    Candidate best;
    RunHistory history;
    std::vector<Candidate> candidates; // every candidate the run produced
    prompt::Prompt prompt;
};

// Full generate -> evaluate -> refine loop; stops at the first score of
// 100 or once max_iterations generation rounds have run.
RunOutcome run_loop(const RequirementSet& reqs, cca::CcaId base, const RefinerConfig& cfg);

} // namespace cct::refine
