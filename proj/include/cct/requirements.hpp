#pragma once

#include <optional>
#include <string>

namespace cct {

enum class ResolutionClass { SD, HD, FHD_1080p, QHD_2K, UHD_4K };
enum class Codec { H264, H265, UNKNOWN };

std::string to_string(ResolutionClass r);
std::string to_string(Codec c);

// What we understood from the user's streaming requirement text.
struct StreamingSpec {
    std::string raw_text;
    ResolutionClass resolution_class = ResolutionClass::HD;
    std::optional<double> frame_rate;       // frames/second
    std::optional<Codec> codec;
    std::optional<double> explicit_bitrate; // Mbps
    bool assumed_defaults = false;          // nothing recognized, fell back to HD
};

struct HomeNetwork {
    double upload_mbps = 0.0;
    double share_fraction = 0.5;            // portion of the uplink the stream may claim
    std::optional<double> nominal_rtt_ms;
};

// The quantitative contract every candidate is judged against.
// R1: minimum throughput; R2: maximum throughput (uplink share);
// R3: loss fraction above which the candidate must behave like its base CCA.
struct RequirementSet {
    double r1_min_mbps = 0.0;
    double r2_max_mbps = 0.0;
    double r3_loss_threshold = 0.05;
    HomeNetwork home;                       // originating network, needed downstream
};

// Keyword scan of the raw requirement text.  Recognizes resolution classes,
// fps tokens ("60fps", "60Hz"), codec names and explicit "N Mbps" bitrates.
// Unrecognized text falls back to HD with assumed_defaults set.
StreamingSpec parse_streaming_spec(const std::string& raw_text);

// R1.  Explicit bitrate wins; otherwise the bitrate table keyed by
// (resolution, fps bucket, codec) decides.
double derive_min_throughput(const StreamingSpec& spec);

// R2 = upload_speed x share_fraction.
double derive_max_throughput(const HomeNetwork& net);

// Full R1/R2/R3 derivation.  Throws InfeasibleRequirements when the stream
// needs more than the allowed uplink share; never returns an inconsistent set.
RequirementSet build_requirements(const StreamingSpec& spec, const HomeNetwork& net);

// Requirement files are key-value documents; see docs in README.
std::string requirements_to_text(const RequirementSet& reqs);
RequirementSet requirements_from_text(const std::string& text);

} // namespace cct
