#include "cct/refine/refinery.hpp"

#include "cct/cca/source.hpp"
#include "cct/errors.hpp"
#include "cct/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>

namespace cct::refine {

namespace {

constexpr const char* kSystemRole =
    "You implement and refine Linux kernel congestion-control programs.";

int candidate_index(const std::string& id) {
    return std::atoi(id.c_str() + 1); // ids are "c<N>"
}

double cost_usd(const PriceTable& t, uint64_t prompt_tokens, uint64_t completion_tokens) {
    return double(prompt_tokens) * t.prompt_usd_per_mtok / 1e6 +
           double(completion_tokens) * t.completion_usd_per_mtok / 1e6;
}

ChatTransport& resolve_transport(const RefinerConfig& cfg, std::unique_ptr<ChatTransport>& owned) {
    if (cfg.transport) return *cfg.transport;
    const char* url = std::getenv("CCT_API_URL");
    if (!url || !*url)
        throw BackendUnavailable("LLM backend needs a transport; set CCT_API_URL or pass one");
    owned = std::make_unique<HttpChatTransport>(url, "CCT_API_KEY");
    return *owned;
}

// One chat turn for a candidate: send, account cost, persist, parse.
void chat_step(Candidate& cand, const RefinerConfig& cfg, ChatTransport& transport, int turn) {
    ChatRequest req;
    req.model_id = cfg.model_id;
    req.temperature = cfg.temperature;
    req.messages = cand.conversation;

    ChatResponse res = transport.complete(req);
    if (cfg.exchange_sink) cfg.exchange_sink(cand.id, turn, req, res);

    cand.cost.prompt_tokens += res.prompt_tokens;
    cand.cost.completion_tokens += res.completion_tokens;
    cand.cost.usd += cost_usd(cfg.prices, res.prompt_tokens, res.completion_tokens);
    cand.conversation.push_back({"assistant", res.text});

    auto block = extract_single_code_block(res.text);
    if (!block) {
        cand.contract_violation =
            "the reply must contain the complete source in exactly one fenced code block";
        cand.source_text.clear();
        cand.profile.reset();
        return;
    }
    cand.contract_violation.reset();
    cand.source_text = *block;
    try {
        cand.profile = cca::extract_profile(cand.source_text);
    } catch (const ParseError&) {
        cand.profile.reset();
    }
}

std::string feedback_message(const Candidate& cand) {
    std::ostringstream os;
    os << "The evaluation of your previous program reported:\n";
    if (cand.contract_violation) {
        os << "F1: " << *cand.contract_violation << "\n";
    } else if (cand.report) {
        for (const auto& f : cand.report->feedback) os << f.tag << ": " << f.text << "\n";
    }
    os << "Address every reported item and reply with the complete corrected source "
          "file in exactly one fenced code block.";
    return os.str();
}

cca::ControlProfile reference_profile(const RequirementSet& reqs, cca::CcaId base, int index,
                                      const RefinerConfig& cfg) {
    cca::ControlProfile p;
    p.base_cca = base;
    p.min_rate_mbps = reqs.r1_min_mbps;
    p.max_rate_mbps = reqs.r2_max_mbps;
    p.loss_threshold = reqs.r3_loss_threshold;
    p.boost_gain = 1.0 + 0.25 * index; // ladder: later slots push harder
    p.cap_margin = 1.0;
    p.fault_flags = planned_faults(cfg, index);
    return p;
}

Candidate make_reference_candidate(const cca::ControlProfile& p, int id, int iteration,
                                   std::optional<std::string> parent) {
    Candidate c;
    c.id = "c" + std::to_string(id);
    c.iteration_born = iteration;
    c.parent_id = std::move(parent);
    c.profile = p;
    c.source_text = cca::render_patched_source(p, cca::base_source(p.base_cca));
    return c;
}

} // namespace

Backend backend_from_string(const std::string& name) {
    std::string n = to_lower(trim(name));
    if (n == "reference") return Backend::REFERENCE;
    if (n == "llm") return Backend::LLM;
    throw ParseError("unknown refiner backend '" + name + "'");
}

std::string to_string(Backend b) { return b == Backend::REFERENCE ? "reference" : "llm"; }

std::string to_string(RunStatus s) {
    return s == RunStatus::SUCCEEDED ? "succeeded" : "exhausted";
}

void validate(const RefinerConfig& cfg) {
    if (cfg.pool_size < 1) throw InvalidSpec("pool size must be at least 1");
    if (cfg.temperature < 0.0 || cfg.temperature > 2.0)
        throw InvalidSpec("temperature must lie in [0, 2]");
    if (cfg.max_iterations < 1) throw InvalidSpec("max iterations must be at least 1");
}

uint32_t planned_faults(const RefinerConfig& cfg, int index) {
    auto it = cfg.fault_plan.find(index);
    if (it != cfg.fault_plan.end()) return it->second;
    return cfg.fault_plan_rest;
}

std::vector<Candidate> generate_pool(const prompt::Prompt& p, const RequirementSet& reqs,
                                     cca::CcaId base, const RefinerConfig& cfg) {
    std::vector<Candidate> pool;
    if (cfg.backend == Backend::REFERENCE) {
        for (int i = 0; i < cfg.pool_size; ++i)
            pool.push_back(make_reference_candidate(reference_profile(reqs, base, i, cfg), i, 0,
                                                    std::nullopt));
        return pool;
    }

    std::unique_ptr<ChatTransport> owned;
    ChatTransport& transport = resolve_transport(cfg, owned);
    for (int i = 0; i < cfg.pool_size; ++i) {
        Candidate c;
        c.id = "c" + std::to_string(i);
        c.iteration_born = 0;
        c.conversation.push_back({"system", kSystemRole});
        c.conversation.push_back({"user", p.render()});
        try {
            chat_step(c, cfg, transport, 0);
        } catch (const BackendUnavailable& e) {
            throw RefinerUnavailable(e.what(), pool, RunHistory{});
        }
        pool.push_back(std::move(c));
    }
    return pool;
}

std::vector<Candidate> refine(const std::vector<Candidate>& pool, const prompt::Prompt& p,
                              const RequirementSet& reqs, cca::CcaId base,
                              const RefinerConfig& cfg, int iteration, int* next_id) {
    (void)p;
    std::vector<Candidate> out;
    std::unique_ptr<ChatTransport> owned;
    ChatTransport* transport = nullptr;

    for (const auto& cand : pool) {
        int score = cand.report ? cand.report->score : 0;
        if (score == 100) { // elitism: a perfect candidate survives untouched
            out.push_back(cand);
            continue;
        }

        Candidate child;
        if (cfg.backend == Backend::REFERENCE) {
            cca::ControlProfile prof =
                cand.profile ? *cand.profile
                             : reference_profile(reqs, base, candidate_index(cand.id), cfg);
            if (cand.report) {
                for (const auto& f : cand.report->feedback) {
                    if (f.tag == "F1") prof.fault_flags &= ~uint32_t(cca::COMPILE_FAULT);
                    if (f.tag == "F2") prof.fault_flags &= ~uint32_t(cca::BPF_FAULT);
                    if (f.tag == "F3") {
                        prof.fault_flags &= ~uint32_t(cca::R1_FAULT);
                        prof.boost_gain *= 1.25;
                    }
                    if (f.tag == "F4") {
                        prof.fault_flags &= ~uint32_t(cca::R2_FAULT);
                        prof.cap_margin *= 0.9;
                    }
                    if (f.tag == "F5") prof.fault_flags &= ~uint32_t(cca::R3_FAULT);
                }
            }
            child = make_reference_candidate(prof, (*next_id)++, iteration, cand.id);
        } else {
            if (!transport) transport = &resolve_transport(cfg, owned);
            child = cand;
            child.id = "c" + std::to_string((*next_id)++);
            child.iteration_born = iteration;
            child.parent_id = cand.id;
            child.report.reset();
            child.cost = {}; // the child pays only for its own exchanges
            child.conversation.push_back({"user", feedback_message(cand)});
            try {
                chat_step(child, cfg, *transport, iteration);
            } catch (const BackendUnavailable& e) {
                throw RefinerUnavailable(e.what(), out, RunHistory{});
            }
        }
        out.push_back(std::move(child));
    }
    return out;
}

namespace {

eval::EvalReport violation_report(const std::string& note) {
    eval::EvalReport r;
    r.compile = {false, note};
    r.score = 0;
    r.feedback.push_back({"F1", "reply format violation: " + note});
    return r;
}

void evaluate_pool(std::vector<Candidate>& pool, const RequirementSet& reqs,
                   const RefinerConfig& cfg) {
    for (auto& cand : pool) {
        if (cand.report) continue; // elites keep their report
        if (cand.contract_violation) {
            cand.report = violation_report(*cand.contract_violation);
            continue;
        }
        eval::EvalOptions opt;
        opt.backend = cfg.eval_backend;
        opt.seed = cfg.seed;
        opt.candidate_tag = cand.id;
        opt.runner = cfg.runner;
        cand.report = eval::evaluate({cand.source_text, cand.profile}, reqs, opt);
    }
}

const Candidate* best_of(const std::vector<Candidate>& pool, int target_score) {
    const Candidate* best = nullptr;
    for (const auto& c : pool) {
        int score = c.report ? c.report->score : 0;
        if (target_score >= 0 && score != target_score) continue;
        if (!best) {
            best = &c;
            continue;
        }
        int best_score = best->report ? best->report->score : 0;
        if (score > best_score ||
            (score == best_score && candidate_index(c.id) < candidate_index(best->id)))
            best = &c;
    }
    return best;
}

} // namespace

RunOutcome run_loop(const RequirementSet& reqs, cca::CcaId base, const RefinerConfig& cfg) {
    validate(cfg);

    prompt::PromptParams params;
    params.backend_name = to_string(cfg.backend);
    params.model_id = cfg.model_id;
    params.temperature = cfg.temperature;
    params.pool_size = cfg.pool_size;
    params.max_iterations = cfg.max_iterations;

    RunOutcome out;
    out.prompt = prompt::build_prompt(cfg.prompt_mode, reqs, base,
                                      prompt::load_reference_bundle(base), params);

    RunHistory& hist = out.history;
    std::vector<Candidate> pool = generate_pool(out.prompt, reqs, base, cfg);
    int next_id = cfg.pool_size;

    // archive holds every candidate ever produced; updates refresh in place
    auto archive_pool = [&](const std::vector<Candidate>& cur) {
        for (const auto& c : cur) {
            bool known = false;
            for (auto& seen : out.candidates)
                if (seen.id == c.id) {
                    seen = c;
                    known = true;
                    break;
                }
            if (!known) out.candidates.push_back(c);
        }
    };
    auto archived_spend = [&]() {
        double usd = 0.0;
        for (const auto& c : out.candidates) usd += c.cost.usd;
        return usd;
    };

    for (int round = 0;; ++round) {
        evaluate_pool(pool, reqs, cfg);
        archive_pool(pool);

        IterationRow row;
        for (const auto& c : pool) {
            int score = c.report ? c.report->score : 0;
            row.candidates.push_back({c.id, score, c.cost.usd});
            row.best_score = std::max(row.best_score, score);
        }
        // best tracks the whole run, so the trajectory cannot regress even
        // when a refinement round lands below its parents
        if (!hist.iterations.empty())
            row.best_score = std::max(row.best_score, hist.iterations.back().best_score);
        row.cumulative_usd = archived_spend();
        hist.iterations.push_back(row);
        hist.total_usd = row.cumulative_usd;

        if (const Candidate* winner = best_of(pool, 100)) {
            hist.status = RunStatus::SUCCEEDED;
            hist.best_id = winner->id;
            out.best = *winner;
            break;
        }
        if (round + 1 >= cfg.max_iterations) {
            hist.status = RunStatus::EXHAUSTED;
            const Candidate* b = best_of(out.candidates, -1); // best over the whole run
            hist.best_id = b ? b->id : "";
            if (b) out.best = *b;
            break;
        }

        try {
            pool = refine(pool, out.prompt, reqs, base, cfg, round + 1, &next_id);
        } catch (RefinerUnavailable& e) {
            archive_pool(e.partial_pool);
            throw RefinerUnavailable(e.what(), out.candidates, hist);
        }
    }
    return out;
}

// One "iteration" line per round: best score, cumulative dollars, then
// id:score:usd per candidate in pool order.
std::string history_to_text(const RunHistory& h) {
    KvDoc doc;
    for (const auto& row : h.iterations) {
        std::ostringstream os;
        os << row.best_score << " " << format_double(row.cumulative_usd);
        for (const auto& c : row.candidates)
            os << " " << c.id << ":" << c.score << ":" << format_double(c.usd);
        doc.emplace_back("iteration", os.str());
    }
    doc.emplace_back("status", to_string(h.status));
    doc.emplace_back("best", h.best_id);
    doc.emplace_back("total_usd", format_double(h.total_usd));
    return kv_render(doc);
}

RunHistory history_from_text(const std::string& text) {
    KvDoc doc = kv_parse(text);
    RunHistory h;
    for (const auto& [k, v] : doc) {
        if (k != "iteration") continue;
        IterationRow row;
        std::istringstream is(v);
        std::string token;
        if (!(is >> row.best_score) || !(is >> row.cumulative_usd))
            throw ParseError("malformed history iteration line: " + v);
        while (is >> token) {
            auto parts = split(token, ':');
            if (parts.size() != 3)
                throw ParseError("malformed history candidate entry: " + token);
            row.candidates.push_back(
                {parts[0], std::stoi(parts[1]), std::stod(parts[2])});
        }
        h.iterations.push_back(std::move(row));
    }
    const std::string status = kv_get(doc, "status");
    if (status == to_string(RunStatus::SUCCEEDED)) h.status = RunStatus::SUCCEEDED;
    else if (status == to_string(RunStatus::EXHAUSTED)) h.status = RunStatus::EXHAUSTED;
    else throw ParseError("unknown run status '" + status + "'");
    h.best_id = kv_get(doc, "best");
    h.total_usd = kv_get_double(doc, "total_usd");
    return h;
}

} // namespace cct::refine
