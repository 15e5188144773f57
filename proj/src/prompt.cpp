#include "cct/prompt/prompt.hpp"

#include "cct/assets.hpp"
#include "cct/cca/source.hpp"
#include "cct/errors.hpp"
#include "cct/util.hpp"

#include <sstream>

namespace cct::prompt {

namespace {

// The task statement both modes share.
std::string task_text(cca::CcaId base) {
    return "You are given the source of the '" + cca::to_string(base) +
           "' congestion control program below. Refine it so the resulting program "
           "meets every requirement in the DESIGN section while keeping the base "
           "algorithm's behavior everywhere the requirements do not bind. Reply with "
           "the complete revised source file in exactly one fenced code block.";
}

// Domain guidance for chain-of-thought mode; each numbered clause guards
// one recurring failure class.
std::string cot_guidelines() {
    return "Work through the following guidelines before writing code:\n"
           "1. The refined program must compile: keep every declaration the existing "
           "code depends on and emit a complete translation unit.\n"
           "2. The refined program must remain attachable through the BPF interface: "
           "keep the struct_ops registration and hook signatures intact, and keep "
           "every loop provably bounded.\n"
           "3. Refine the appropriate functions: a CCA has several hooks called at "
           "different frequencies, and throughput control belongs in the hooks that "
           "run frequently, for each acknowledgment packet.\n"
           "4. Adjust the correct variables: some CCAs steer throughput through the "
           "congestion window size (snd_cwnd) alone, others through both the window "
           "and the pacing rate (sk_pacing_rate).\n"
           "5. Use the correct variable units: fields carry non-obvious units that "
           "shift between versions; in particular srtt_us stores eighths of a "
           "microsecond, and window arithmetic counts segments, not bytes.";
}

std::string design_text_for(const RequirementSet& reqs) {
    std::ostringstream os;
    os << "The customized program must satisfy all three requirements:\n";
    os << "R1: sustain at least " << format_double(reqs.r1_min_mbps)
       << " Mbps of throughput when competing flows congest the path.\n";
    os << "R2: never exceed " << format_double(reqs.r2_max_mbps)
       << " Mbps of throughput, leaving the remaining uplink capacity unused.\n";
    os << "R3: once cumulative packet loss reaches "
       << format_double(reqs.r3_loss_threshold * 100.0)
       << "%, abandon the throughput floor and reduce throughput exactly as the "
          "base algorithm would.";
    return os.str();
}

} // namespace

Mode mode_from_string(const std::string& name) {
    std::string n = to_lower(trim(name));
    if (n == "zero_shot" || n == "zero-shot" || n == "0shot") return Mode::ZERO_SHOT;
    if (n == "cot") return Mode::COT;
    throw ParseError("unknown prompt mode '" + name + "'");
}

std::string to_string(Mode m) { return m == Mode::COT ? "cot" : "zero_shot"; }

ReferenceBundle load_reference_bundle(cca::CcaId base) {
    ReferenceBundle refs;
    refs.emplace_back("network-stack-common", load_asset("refs/common.txt"));
    refs.emplace_back("base-" + cca::to_string(base), load_asset("refs/" + cca::to_string(base) + ".txt"));
    return refs;
}

std::string Prompt::render() const {
    std::ostringstream os;
    os << "== TASK ==\n" << instruction_text << "\n\n";
    os << "== DESIGN ==\n" << design_text << "\n\n";
    os << "== BASE SOURCE ==\n```c\n" << base_source;
    if (!base_source.empty() && base_source.back() != '\n') os << "\n";
    os << "```\n\n";
    os << "== REFERENCES ==\n";
    for (const auto& [name, text] : references) {
        os << "-- " << name << " --\n" << text;
        if (!text.empty() && text.back() != '\n') os << "\n";
    }
    os << "\n== PARAMETERS ==\n" << params_echo;
    return os.str();
}

Prompt build_prompt(Mode mode, const RequirementSet& reqs, cca::CcaId base,
                    const ReferenceBundle& refs, const PromptParams& params) {
    Prompt p;
    p.mode = mode;
    p.instruction_text = task_text(base);
    if (mode == Mode::COT) p.instruction_text += "\n\n" + cot_guidelines();
    p.design_text = design_text_for(reqs);
    p.base_source = cca::base_source(base);
    p.references = refs;

    KvDoc echo;
    echo.emplace_back("backend", params.backend_name);
    echo.emplace_back("model_id", params.model_id);
    echo.emplace_back("temperature", format_double(params.temperature));
    echo.emplace_back("pool_size", std::to_string(params.pool_size));
    echo.emplace_back("max_iterations", std::to_string(params.max_iterations));
    echo.emplace_back("prompt_mode", to_string(mode));
    p.params_echo = kv_render(echo);
    return p;
}

} // namespace cct::prompt
