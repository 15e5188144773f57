#include "cct/cca/source.hpp"

#include "cct/assets.hpp"
#include "cct/errors.hpp"
#include "cct/util.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace cct::cca {

namespace {

constexpr std::array<CcaId, 4> kAllBases = {CcaId::RENO, CcaId::CUBIC, CcaId::VEGAS,
                                            CcaId::ILLINOIS};

constexpr const char* kProfileBegin = "cct:profile:begin";
constexpr const char* kProfileEnd = "cct:profile:end";

uint64_t milli(double x) { return uint64_t(std::llround(x * 1000.0)); }

// The block inserted ahead of the struct_ops registration: profile
// marker, clamp constants, and the wrapper functions.
std::string customization_block(const ControlProfile& p, const std::string& base_hook) {
    std::ostringstream os;
    os << "/* --- customized control layer ---\n";
    os << " * " << kProfileBegin << "\n";
    for (const auto& line : split(profile_to_text(p), '\n'))
        if (!line.empty()) os << " * " << line << "\n";
    os << " * " << kProfileEnd << "\n";
    os << " */\n\n";

    os << "#define CCT_MIN_RATE_KBPS " << uint64_t(std::llround(p.min_rate_mbps * 1000.0))
       << "ULL\n";
    os << "#define CCT_MAX_RATE_KBPS " << uint64_t(std::llround(p.max_rate_mbps * 1000.0))
       << "ULL\n";
    os << "#define CCT_LOSS_THRESHOLD_PM " << milli(p.loss_threshold) << "ULL /* per mille */\n";
    os << "#define CCT_BOOST_GAIN_MILLI " << milli(p.boost_gain) << "ULL\n";
    os << "#define CCT_CAP_MARGIN_MILLI " << milli(p.cap_margin) << "ULL\n";
    os << "\n";

    os << "/* kbit/s sustained over one RTT, in mss-sized segments, rounded up */\n"
          "static __u64 cct_rate_to_segs(__u64 rate_kbps, __u32 srtt_us, __u32 mss)\n"
          "{\n"
          "    __u64 bits = rate_kbps * srtt_us / 1000;\n"
          "    return (bits + 8 * mss - 1) / (8 * mss);\n"
          "}\n"
          "\n"
          "static void cct_customize(struct sock *sk)\n"
          "{\n"
          "    struct tcp_sock *tp = tcp_sk(sk);\n"
          "    __u32 mss = tp->mss_cache ? tp->mss_cache : 1500;\n"
          "    __u32 srtt_us = tp->srtt_us >> 3;\n"
          "    __u64 sent = (__u64)tp->delivered + tp->lost;\n"
          "    __u64 cap;\n"
          "\n"
          "    if (srtt_us == 0)\n"
          "        return;\n"
          "    /* floor holds while cumulative loss stays under the threshold */\n"
          "    if (sent == 0 || (__u64)tp->lost * 1000 < CCT_LOSS_THRESHOLD_PM * sent) {\n";
    if (p.has_fault(COMPILE_FAULT))
        os << "        /* defect: statement left unterminated */\n"
              "        __u64 floor_segs = cct_rate_to_segs(CCT_MIN_RATE_KBPS\n"
              "            * CCT_BOOST_GAIN_MILLI / 1000, srtt_us, mss)\n";
    else
        os << "        __u64 floor_segs = cct_rate_to_segs(CCT_MIN_RATE_KBPS\n"
              "            * CCT_BOOST_GAIN_MILLI / 1000, srtt_us, mss);\n";
    os << "        if (tp->snd_cwnd < floor_segs)\n"
          "            tp->snd_cwnd = (__u32)floor_segs;\n"
          "    }\n"
          "    /* ceiling applies always, rounded down */\n"
          "    cap = CCT_MAX_RATE_KBPS * CCT_CAP_MARGIN_MILLI / 1000\n"
          "          * srtt_us / 1000 / (8 * mss);\n"
          "    if (cap < 1)\n"
          "        cap = 1;\n";
    if (p.has_fault(BPF_FAULT))
        os << "    /* defect: verifier-unbounded wait */\n"
              "    while (tp->snd_cwnd > cap)\n"
              "        ;\n";
    os << "    if (tp->snd_cwnd > cap)\n"
          "        tp->snd_cwnd = (__u32)cap;\n"
          "    if (sk->sk_pacing_rate > CCT_MAX_RATE_KBPS * CCT_CAP_MARGIN_MILLI / 8)\n"
          "        sk->sk_pacing_rate = CCT_MAX_RATE_KBPS * CCT_CAP_MARGIN_MILLI / 8;\n"
          "}\n"
          "\n";

    os << "static void cct_cong_avoid(struct sock *sk, __u32 ack, __u32 acked)\n"
          "{\n"
          "    " << base_hook << "(sk, ack, acked);\n"
          "    cct_customize(sk);\n"
          "}\n"
          "\n";
    return os.str();
}

} // namespace

const std::string& base_source(CcaId id) {
    static std::array<std::string, 4> cache;
    auto idx = size_t(id);
    if (cache[idx].empty())
        cache[idx] = load_asset("cca/" + to_string(id) + ".bpf.c");
    return cache[idx];
}

std::string render_patched_source(const ControlProfile& profile, const std::string& base) {
    std::optional<CcaId> matched;
    for (CcaId id : kAllBases) {
        if (base == base_source(id)) {
            matched = id;
            break;
        }
    }
    if (!matched)
        throw UnknownBase("base source does not match any shipped CCA source");
    if (*matched != profile.base_cca)
        throw UnknownBase("base source is " + to_string(*matched) + " but the profile names " +
                          to_string(profile.base_cca));

    std::string hook = "bpf_" + to_string(*matched) + "_cong_avoid";
    std::string anchor = "SEC(\".struct_ops\")";
    size_t pos = base.find(anchor);
    if (pos == std::string::npos)
        throw UnknownBase("shipped source lacks a struct_ops registration");

    std::string out = base;
    out.insert(pos, customization_block(profile, hook));

    std::string old_entry = ".cong_avoid = (void *)" + hook + ",";
    std::string new_entry = ".cong_avoid = (void *)cct_cong_avoid,";
    size_t entry = out.find(old_entry, pos);
    if (entry == std::string::npos)
        throw UnknownBase("shipped source lacks the cong_avoid registration entry");
    out.replace(entry, old_entry.size(), new_entry);
    return out;
}

std::optional<ControlProfile> extract_profile(const std::string& source) {
    size_t begin = source.find(kProfileBegin);
    if (begin == std::string::npos) return std::nullopt;
    size_t end = source.find(kProfileEnd, begin);
    if (end == std::string::npos)
        throw ParseError("profile block is not terminated");

    size_t body_start = source.find('\n', begin);
    if (body_start == std::string::npos || body_start >= end)
        throw ParseError("profile block is empty");
    std::string body = source.substr(body_start + 1, end - body_start - 1);

    std::string cleaned;
    for (auto& line : split(body, '\n')) {
        std::string t = trim(line);
        if (t.rfind("* ", 0) == 0) t = t.substr(2);
        else if (t == "*") t.clear();
        if (!t.empty() && t.find(kProfileEnd) == std::string::npos) cleaned += t + "\n";
    }
    return profile_from_text(cleaned);
}

} // namespace cct::cca
