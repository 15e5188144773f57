#include "cct/manifest.hpp"

#include "cct/cca/dynamics.hpp"
#include "cct/errors.hpp"
#include "cct/util.hpp"

namespace cct {

static refine::RunStatus status_from_string(const std::string& name) {
    if (name == to_string(refine::RunStatus::SUCCEEDED)) return refine::RunStatus::SUCCEEDED;
    if (name == to_string(refine::RunStatus::EXHAUSTED)) return refine::RunStatus::EXHAUSTED;
    throw ParseError("unknown run status '" + name + "'");
}

std::string manifest_to_text(const RunManifest& m) {
    KvDoc doc;
    doc.emplace_back("r1_min_mbps", format_double(m.requirements.r1_min_mbps));
    doc.emplace_back("r2_max_mbps", format_double(m.requirements.r2_max_mbps));
    doc.emplace_back("r3_loss_threshold", format_double(m.requirements.r3_loss_threshold));
    doc.emplace_back("upload_mbps", format_double(m.requirements.home.upload_mbps));
    doc.emplace_back("share_fraction", format_double(m.requirements.home.share_fraction));
    if (m.requirements.home.nominal_rtt_ms)
        doc.emplace_back("nominal_rtt_ms", format_double(*m.requirements.home.nominal_rtt_ms));
    doc.emplace_back("base_cca", cca::to_string(m.base));
    doc.emplace_back("backend", refine::to_string(m.backend));
    doc.emplace_back("model_id", m.model_id);
    doc.emplace_back("temperature", format_double(m.temperature));
    doc.emplace_back("pool_size", std::to_string(m.pool_size));
    doc.emplace_back("max_iterations", std::to_string(m.max_iterations));
    doc.emplace_back("prompt_mode", prompt::to_string(m.prompt_mode));
    doc.emplace_back("seed", std::to_string(m.seed));
    doc.emplace_back("status", refine::to_string(m.status));
    doc.emplace_back("best_candidate", m.best_candidate_id);
    doc.emplace_back("total_usd", format_double(m.total_usd));
    for (const auto& p : m.artifact_paths)
        doc.emplace_back("artifact", p);
    return kv_render(doc);
}

RunManifest manifest_from_text(const std::string& text) {
    KvDoc doc = kv_parse(text);
    RunManifest m;
    m.requirements.r1_min_mbps = kv_get_double(doc, "r1_min_mbps");
    m.requirements.r2_max_mbps = kv_get_double(doc, "r2_max_mbps");
    m.requirements.r3_loss_threshold = kv_get_double(doc, "r3_loss_threshold");
    m.requirements.home.upload_mbps = kv_get_double(doc, "upload_mbps");
    m.requirements.home.share_fraction = kv_get_double(doc, "share_fraction");
    if (kv_has(doc, "nominal_rtt_ms"))
        m.requirements.home.nominal_rtt_ms = kv_get_double(doc, "nominal_rtt_ms");
    m.base = cca::cca_from_string(kv_get(doc, "base_cca"));
    m.backend = refine::backend_from_string(kv_get(doc, "backend"));
    m.model_id = kv_get(doc, "model_id");
    m.temperature = kv_get_double(doc, "temperature");
    m.pool_size = int(kv_get_double(doc, "pool_size"));
    m.max_iterations = int(kv_get_double(doc, "max_iterations"));
    m.prompt_mode = prompt::mode_from_string(kv_get(doc, "prompt_mode"));
    m.seed = uint64_t(std::stoull(kv_get(doc, "seed")));
    m.status = status_from_string(kv_get(doc, "status"));
    m.best_candidate_id = kv_get(doc, "best_candidate");
    m.total_usd = kv_get_double(doc, "total_usd");
    for (const auto& [k, v] : doc)
        if (k == "artifact") m.artifact_paths.push_back(v);
    return m;
}

} // namespace cct
