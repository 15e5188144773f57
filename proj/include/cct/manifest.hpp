#pragma once

#include "cct/cca/types.hpp"
#include "cct/prompt/prompt.hpp"
#include "cct/refine/refinery.hpp"
#include "cct/requirements.hpp"

#include <string>
#include <vector>

namespace cct {

// Everything needed to re-run or audit one generation run.  Paths are
// relative to the manifest's own directory; no timestamps, so identical
// runs produce identical manifests.
struct RunManifest {
    RequirementSet requirements;
    cca::CcaId base = cca::CcaId::CUBIC;

    refine::Backend backend = refine::Backend::REFERENCE;
    std::string model_id;
    double temperature = 0.5;
    int pool_size = 5;
    int max_iterations = 5;
    prompt::Mode prompt_mode = prompt::Mode::COT;
    uint64_t seed = 1;

    refine::RunStatus status = refine::RunStatus::EXHAUSTED;
    std::string best_candidate_id;
    double total_usd = 0.0;

    std::vector<std::string> artifact_paths; // sorted, relative
};

std::string manifest_to_text(const RunManifest& m);
RunManifest manifest_from_text(const std::string& text);

} // namespace cct
