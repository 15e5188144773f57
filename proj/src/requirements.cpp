#include "cct/requirements.hpp"

#include "cct/assets.hpp"
#include "cct/errors.hpp"
#include "cct/util.hpp"

#include <map>
#include <regex>
#include <sstream>

namespace cct {

std::string to_string(ResolutionClass r) {
    switch (r) {
        case ResolutionClass::SD: return "sd";
        case ResolutionClass::HD: return "hd";
        case ResolutionClass::FHD_1080p: return "fhd";
        case ResolutionClass::QHD_2K: return "qhd";
        case ResolutionClass::UHD_4K: return "uhd";
    }
    return "hd";
}

std::string to_string(Codec c) {
    switch (c) {
        case Codec::H264: return "h264";
        case Codec::H265: return "h265";
        case Codec::UNKNOWN: return "unknown";
    }
    return "unknown";
}

namespace {

bool has_word(const std::string& text, const char* word) {
    std::regex re("\\b" + std::string(word) + "\\b", std::regex::icase);
    return std::regex_search(text, re);
}

} // namespace

StreamingSpec parse_streaming_spec(const std::string& raw_text) {
    if (trim(raw_text).empty())
        throw InvalidSpec("empty streaming requirement");

    StreamingSpec spec;
    spec.raw_text = raw_text;
    std::string text = to_lower(raw_text);
    // normalize "h.265" -> "h265" so word matching works
    std::string norm = text;
    size_t pos;
    while ((pos = norm.find("h.26")) != std::string::npos) norm.erase(pos + 1, 1);

    bool resolution_found = true;
    if (has_word(norm, "4k") || has_word(norm, "uhd") || has_word(norm, "2160p"))
        spec.resolution_class = ResolutionClass::UHD_4K;
    else if (has_word(norm, "2k") || has_word(norm, "qhd") || has_word(norm, "1440p"))
        spec.resolution_class = ResolutionClass::QHD_2K;
    else if (has_word(norm, "1080p") || has_word(norm, "fhd") || norm.find("full hd") != std::string::npos)
        spec.resolution_class = ResolutionClass::FHD_1080p;
    else if (has_word(norm, "hd") || has_word(norm, "720p"))
        spec.resolution_class = ResolutionClass::HD;
    else if (has_word(norm, "sd") || has_word(norm, "480p") || norm.find("standard") != std::string::npos)
        spec.resolution_class = ResolutionClass::SD;
    else
        resolution_found = false;

    std::smatch m;
    std::regex fps_re("(\\d+(?:\\.\\d+)?)\\s*(fps|hz)");
    if (std::regex_search(norm, m, fps_re)) {
        double fps = std::stod(m[1].str());
        if (fps > 0) spec.frame_rate = fps;
    }

    if (has_word(norm, "h265") || has_word(norm, "hevc")) spec.codec = Codec::H265;
    else if (has_word(norm, "h264") || has_word(norm, "avc")) spec.codec = Codec::H264;

    std::regex rate_re("(\\d+(?:\\.\\d+)?)\\s*mbps");
    if (std::regex_search(norm, m, rate_re)) {
        double mbps = std::stod(m[1].str());
        if (mbps > 0) spec.explicit_bitrate = mbps;
    }

    if (!resolution_found) {
        spec.resolution_class = ResolutionClass::HD;
        // an explicit bitrate still makes the request fully specified
        spec.assumed_defaults = !spec.explicit_bitrate.has_value();
    }
    return spec;
}

namespace {

struct BitrateTable {
    // key: "<resolution> <bucket> <codec>"
    std::map<std::string, double> rows;
};

const BitrateTable& bitrate_table() {
    static BitrateTable table = [] {
        BitrateTable t;
        std::istringstream in(load_asset("bitrate_table.txt"));
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            std::istringstream row(line);
            std::string res, bucket, codec;
            double mbps = 0;
            if (!(row >> res >> bucket >> codec >> mbps))
                throw ParseError("malformed bitrate table row: " + line);
            t.rows[res + " " + bucket + " " + codec] = mbps;
        }
        return t;
    }();
    return table;
}

} // namespace

double derive_min_throughput(const StreamingSpec& spec) {
    if (spec.explicit_bitrate) return *spec.explicit_bitrate;

    std::string bucket = (spec.frame_rate && *spec.frame_rate > 30.0) ? "60" : "30";
    Codec codec = spec.codec.value_or(Codec::UNKNOWN);
    std::string codec_key = (codec == Codec::H265) ? "h265" : "h264";
    std::string key = to_string(spec.resolution_class) + " " + bucket + " " + codec_key;
    auto it = bitrate_table().rows.find(key);
    if (it == bitrate_table().rows.end())
        throw ParseError("bitrate table has no row for '" + key + "'");
    return it->second;
}

double derive_max_throughput(const HomeNetwork& net) {
    return net.upload_mbps * net.share_fraction;
}

RequirementSet build_requirements(const StreamingSpec& spec, const HomeNetwork& net) {
    if (net.upload_mbps <= 0)
        throw InvalidSpec("upload speed must be positive");
    if (net.share_fraction <= 0 || net.share_fraction > 1)
        throw InvalidSpec("share fraction must be in (0, 1]");

    RequirementSet reqs;
    reqs.r1_min_mbps = derive_min_throughput(spec);
    reqs.r2_max_mbps = derive_max_throughput(net);
    reqs.r3_loss_threshold = 0.05;
    reqs.home = net;

    if (reqs.r1_min_mbps > reqs.r2_max_mbps) {
        std::ostringstream msg;
        msg << "required minimum throughput " << format_double(reqs.r1_min_mbps)
            << " Mbps exceeds the allowed maximum " << format_double(reqs.r2_max_mbps)
            << " Mbps (" << format_double(net.share_fraction * 100)
            << "% of a " << format_double(net.upload_mbps)
            << " Mbps uplink); lower the stream quality or raise the share";
        throw InfeasibleRequirements(reqs.r1_min_mbps, reqs.r2_max_mbps, msg.str());
    }
    return reqs;
}

std::string requirements_to_text(const RequirementSet& reqs) {
    KvDoc doc;
    doc.emplace_back("r1_min_mbps", format_double(reqs.r1_min_mbps));
    doc.emplace_back("r2_max_mbps", format_double(reqs.r2_max_mbps));
    doc.emplace_back("r3_loss_threshold", format_double(reqs.r3_loss_threshold));
    doc.emplace_back("upload_mbps", format_double(reqs.home.upload_mbps));
    doc.emplace_back("share_fraction", format_double(reqs.home.share_fraction));
    if (reqs.home.nominal_rtt_ms)
        doc.emplace_back("nominal_rtt_ms", format_double(*reqs.home.nominal_rtt_ms));
    return kv_render(doc);
}

RequirementSet requirements_from_text(const std::string& text) {
    KvDoc doc = kv_parse(text);
    RequirementSet reqs;
    reqs.r1_min_mbps = kv_get_double(doc, "r1_min_mbps");
    reqs.r2_max_mbps = kv_get_double(doc, "r2_max_mbps");
    reqs.r3_loss_threshold = kv_get_double(doc, "r3_loss_threshold");
    reqs.home.upload_mbps = kv_get_double(doc, "upload_mbps");
    reqs.home.share_fraction = kv_get_double(doc, "share_fraction");
    if (kv_has(doc, "nominal_rtt_ms"))
        reqs.home.nominal_rtt_ms = kv_get_double(doc, "nominal_rtt_ms");
    if (reqs.r1_min_mbps <= 0 || reqs.r1_min_mbps > reqs.r2_max_mbps)
        throw ParseError("requirement file violates 0 < r1 <= r2");
    if (reqs.r3_loss_threshold <= 0 || reqs.r3_loss_threshold >= 1)
        throw ParseError("requirement file violates 0 < r3 < 1");
    return reqs;
}

} // namespace cct
