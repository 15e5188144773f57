#include "doctest.h"

#include "cct/errors.hpp"
#include "cct/requirements.hpp"

#include <string>

using namespace cct;

static RequirementSet derive(const std::string& text, double upload) {
    HomeNetwork net;
    net.upload_mbps = upload;
    return build_requirements(parse_streaming_spec(text), net);
}

TEST_CASE("the four calibration rows reproduce exactly") {
    // frozen (text, upload) -> (r1, r2) table the derivation is calibrated to
    RequirementSet r = derive("HD streaming", 30);
    CHECK(r.r1_min_mbps == 5.0);
    CHECK(r.r2_max_mbps == 15.0);

    r = derive("1080p resolution streaming using h.265", 50);
    CHECK(r.r1_min_mbps == 8.0);
    CHECK(r.r2_max_mbps == 25.0);

    r = derive("2K resolution 60fps streaming", 80);
    CHECK(r.r1_min_mbps == 16.0);
    CHECK(r.r2_max_mbps == 40.0);

    r = derive("4K resolution 60Hz at 30Mbps bitrate", 100);
    CHECK(r.r1_min_mbps == 30.0); // explicit bitrate wins over the table
    CHECK(r.r2_max_mbps == 50.0);

    CHECK(r.r3_loss_threshold == 0.05);
}

TEST_CASE("parse_streaming_spec recognizes the vocabulary") {
    StreamingSpec s = parse_streaming_spec("HD streaming");
    CHECK(s.resolution_class == ResolutionClass::HD);
    CHECK_FALSE(s.frame_rate);
    CHECK_FALSE(s.codec);
    CHECK_FALSE(s.explicit_bitrate);
    CHECK_FALSE(s.assumed_defaults);

    s = parse_streaming_spec("4K resolution 60Hz at 30Mbps bitrate");
    CHECK(s.resolution_class == ResolutionClass::UHD_4K);
    CHECK(*s.frame_rate == 60.0);
    CHECK(*s.explicit_bitrate == 30.0);

    s = parse_streaming_spec("1080p resolution streaming using h.265");
    CHECK(s.resolution_class == ResolutionClass::FHD_1080p);
    CHECK(*s.codec == Codec::H265);

    s = parse_streaming_spec("just send my gameplay somewhere");
    CHECK(s.resolution_class == ResolutionClass::HD); // fallback
    CHECK(s.assumed_defaults);

    CHECK_THROWS_AS(parse_streaming_spec("   "), InvalidSpec);
}

TEST_CASE("share fraction scales the ceiling") {
    HomeNetwork net;
    net.upload_mbps = 100;
    net.share_fraction = 0.3;
    CHECK(derive_max_throughput(net) == 30.0);
    net.share_fraction = 0.5;
    CHECK(derive_max_throughput(net) == 50.0);
}

TEST_CASE("infeasible combinations are rejected with both numbers named") {
    HomeNetwork net;
    net.upload_mbps = 50; // 50% share allows 25, stream needs 30
    try {
        build_requirements(parse_streaming_spec("4K at 30Mbps bitrate"), net);
        FAIL("expected InfeasibleRequirements");
    } catch (const InfeasibleRequirements& e) {
        std::string msg = e.what();
        CHECK(msg.find("30") != std::string::npos);
        CHECK(msg.find("25") != std::string::npos);
    }
}

TEST_CASE("network invariants are enforced") {
    HomeNetwork net;
    net.upload_mbps = 0;
    CHECK_THROWS_AS(build_requirements(parse_streaming_spec("HD streaming"), net), InvalidSpec);
    net.upload_mbps = 30;
    net.share_fraction = 0.0;
    CHECK_THROWS_AS(build_requirements(parse_streaming_spec("HD streaming"), net), InvalidSpec);
    net.share_fraction = 1.5;
    CHECK_THROWS_AS(build_requirements(parse_streaming_spec("HD streaming"), net), InvalidSpec);
}

TEST_CASE("requirement files round-trip") {
    HomeNetwork net;
    net.upload_mbps = 80;
    net.nominal_rtt_ms = 20.0;
    RequirementSet reqs = build_requirements(parse_streaming_spec("2K resolution 60fps streaming"), net);
    RequirementSet back = requirements_from_text(requirements_to_text(reqs));
    CHECK(back.r1_min_mbps == reqs.r1_min_mbps);
    CHECK(back.r2_max_mbps == reqs.r2_max_mbps);
    CHECK(back.r3_loss_threshold == reqs.r3_loss_threshold);
    CHECK(back.home.upload_mbps == reqs.home.upload_mbps);
    CHECK(back.home.share_fraction == reqs.home.share_fraction);
    CHECK(*back.home.nominal_rtt_ms == 20.0);

    CHECK_THROWS_AS(requirements_from_text("r1_min_mbps = 20\nr2_max_mbps = 10\n"
                                           "r3_loss_threshold = 0.05\nupload_mbps = 20\n"
                                           "share_fraction = 0.5\n"),
                    ParseError);
}
