#pragma once

#include "cct/cca/types.hpp"
#include "cct/requirements.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cct::prompt {

enum class Mode { ZERO_SHOT, COT };

Mode mode_from_string(const std::string& name);
std::string to_string(Mode m);

// Named source snippets handed to the model alongside the base program.
using ReferenceBundle = std::vector<std::pair<std::string, std::string>>;

ReferenceBundle load_reference_bundle(cca::CcaId base);

// Echo of the generation parameters, embedded for auditability.
struct PromptParams {
    std::string backend_name = "reference";
    std::string model_id;
    double temperature = 0.5;
    int pool_size = 5;
    int max_iterations = 5;
};

struct Prompt {
    Mode mode = Mode::COT;
    std::string instruction_text;
    std::string design_text;
    std::string base_source;
    ReferenceBundle references;
    std::string params_echo;

    // Full prompt body with named section headers, deterministic bytes.
    std::string render() const;
};

Prompt build_prompt(Mode mode, const RequirementSet& reqs, cca::CcaId base,
                    const ReferenceBundle& refs, const PromptParams& params);

} // namespace cct::prompt
