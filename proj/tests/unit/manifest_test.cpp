#include "doctest.h"

#include "cct/errors.hpp"
#include "cct/manifest.hpp"

#include <string>

using namespace cct;

namespace {

RunManifest sample() {
    RunManifest m;
    m.requirements.r1_min_mbps = 16;
    m.requirements.r2_max_mbps = 40;
    m.requirements.r3_loss_threshold = 0.05;
    m.requirements.home.upload_mbps = 80;
    m.requirements.home.share_fraction = 0.5;
    m.requirements.home.nominal_rtt_ms = 35;
    m.base = cca::CcaId::ILLINOIS;
    m.backend = refine::Backend::LLM;
    m.model_id = "chat-default";
    m.temperature = 0.7;
    m.pool_size = 3;
    m.max_iterations = 4;
    m.prompt_mode = prompt::Mode::ZERO_SHOT;
    m.seed = 0xdeadbeefULL;
    m.status = refine::RunStatus::SUCCEEDED;
    m.best_candidate_id = "c7";
    m.total_usd = 0.054;
    m.artifact_paths = {"candidates/c0.c", "candidates/c7.c", "history.txt",
                        "reports/c7.txt"};
    return m;
}

} // namespace

TEST_CASE("manifests survive the text round-trip field for field") {
    RunManifest m = sample();
    RunManifest back = manifest_from_text(manifest_to_text(m));

    CHECK(back.requirements.r1_min_mbps == 16);
    CHECK(back.requirements.r2_max_mbps == 40);
    CHECK(back.requirements.r3_loss_threshold == doctest::Approx(0.05));
    CHECK(back.requirements.home.upload_mbps == 80);
    CHECK(back.requirements.home.share_fraction == doctest::Approx(0.5));
    REQUIRE(back.requirements.home.nominal_rtt_ms.has_value());
    CHECK(*back.requirements.home.nominal_rtt_ms == doctest::Approx(35));
    CHECK(back.base == cca::CcaId::ILLINOIS);
    CHECK(back.backend == refine::Backend::LLM);
    CHECK(back.model_id == "chat-default");
    CHECK(back.temperature == doctest::Approx(0.7));
    CHECK(back.pool_size == 3);
    CHECK(back.max_iterations == 4);
    CHECK(back.prompt_mode == prompt::Mode::ZERO_SHOT);
    CHECK(back.seed == 0xdeadbeefULL);
    CHECK(back.status == refine::RunStatus::SUCCEEDED);
    CHECK(back.best_candidate_id == "c7");
    CHECK(back.total_usd == doctest::Approx(0.054));
    CHECK(back.artifact_paths == m.artifact_paths); // order preserved
}

TEST_CASE("an absent nominal delay stays absent") {
    RunManifest m = sample();
    m.requirements.home.nominal_rtt_ms.reset();
    std::string text = manifest_to_text(m);
    CHECK(text.find("nominal_rtt_ms") == std::string::npos);
    CHECK_FALSE(manifest_from_text(text).requirements.home.nominal_rtt_ms.has_value());
}

TEST_CASE("rendering is stable and timestamp-free") {
    RunManifest m = sample();
    std::string a = manifest_to_text(m);
    CHECK(a == manifest_to_text(m));
    CHECK(a.find("status = succeeded") != std::string::npos);
    CHECK(a.find("best_candidate = c7") != std::string::npos);
    CHECK(a.find("artifact = candidates/c0.c") != std::string::npos);
}

TEST_CASE("every base and status value round-trips") {
    for (auto base : {cca::CcaId::RENO, cca::CcaId::CUBIC, cca::CcaId::VEGAS,
                      cca::CcaId::ILLINOIS}) {
        RunManifest m = sample();
        m.base = base;
        CHECK(manifest_from_text(manifest_to_text(m)).base == base);
    }
    for (auto status : {refine::RunStatus::SUCCEEDED, refine::RunStatus::EXHAUSTED}) {
        RunManifest m = sample();
        m.status = status;
        CHECK(manifest_from_text(manifest_to_text(m)).status == status);
    }
}

TEST_CASE("unknown status text is rejected") {
    RunManifest m = sample();
    std::string text = manifest_to_text(m);
    auto pos = text.find("status = succeeded");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, std::string("status = succeeded").size(), "status = running");
    CHECK_THROWS_AS(manifest_from_text(text), ParseError);
}
