#include "cct/cca/profile.hpp"

#include "cct/errors.hpp"
#include "cct/util.hpp"

namespace cct::cca {

uint32_t fault_from_string(const std::string& name) {
    std::string n = trim(to_lower(name));
    if (n.empty() || n == "none") return FAULT_NONE;
    if (n == "compile_fault") return COMPILE_FAULT;
    if (n == "bpf_fault") return BPF_FAULT;
    if (n == "r1_fault") return R1_FAULT;
    if (n == "r2_fault") return R2_FAULT;
    if (n == "r3_fault") return R3_FAULT;
    throw ParseError("unknown fault flag '" + name + "'");
}

std::string faults_to_string(uint32_t flags) {
    std::string out;
    auto add = [&](uint32_t f, const char* name) {
        if (flags & f) {
            if (!out.empty()) out += ",";
            out += name;
        }
    };
    add(COMPILE_FAULT, "compile_fault");
    add(BPF_FAULT, "bpf_fault");
    add(R1_FAULT, "r1_fault");
    add(R2_FAULT, "r2_fault");
    add(R3_FAULT, "r3_fault");
    return out.empty() ? "none" : out;
}

std::string profile_to_text(const ControlProfile& p) {
    KvDoc doc;
    doc.emplace_back("base_cca", to_string(p.base_cca));
    doc.emplace_back("min_rate_mbps", format_double(p.min_rate_mbps));
    doc.emplace_back("max_rate_mbps", format_double(p.max_rate_mbps));
    doc.emplace_back("loss_threshold", format_double(p.loss_threshold));
    doc.emplace_back("boost_gain", format_double(p.boost_gain));
    doc.emplace_back("cap_margin", format_double(p.cap_margin));
    doc.emplace_back("fault_flags", faults_to_string(p.fault_flags));
    return kv_render(doc);
}

ControlProfile profile_from_text(const std::string& text) {
    KvDoc doc = kv_parse(text);
    ControlProfile p;
    p.base_cca = cca_from_string(kv_get(doc, "base_cca"));
    p.min_rate_mbps = kv_get_double(doc, "min_rate_mbps");
    p.max_rate_mbps = kv_get_double(doc, "max_rate_mbps");
    p.loss_threshold = kv_get_double(doc, "loss_threshold");
    if (kv_has(doc, "boost_gain")) p.boost_gain = kv_get_double(doc, "boost_gain");
    if (kv_has(doc, "cap_margin")) p.cap_margin = kv_get_double(doc, "cap_margin");
    if (kv_has(doc, "fault_flags")) {
        for (const auto& part : split(kv_get(doc, "fault_flags"), ','))
            p.fault_flags |= fault_from_string(part);
    }
    if (p.min_rate_mbps < 0 || p.max_rate_mbps < 0)
        throw ParseError("profile rates must be non-negative");
    if (p.boost_gain < 1.0)
        throw ParseError("boost_gain must be >= 1");
    if (p.cap_margin <= 0 || p.cap_margin > 1.0)
        throw ParseError("cap_margin must be in (0, 1]");
    return p;
}

} // namespace cct::cca
