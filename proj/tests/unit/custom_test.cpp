#include "doctest.h"

#include "cct/cca/custom.hpp"
#include "cct/cca/dynamics.hpp"

#include <cmath>
#include <cstdint>
#include <random>

using namespace cct::cca;

static ControlProfile profile_16_40() {
    ControlProfile p;
    p.base_cca = CcaId::CUBIC;
    p.min_rate_mbps = 16;
    p.max_rate_mbps = 40;
    p.loss_threshold = 0.05;
    return p;
}

static CcaState state_with(double cwnd, uint64_t srtt_8us) {
    CcaState st = make_initial_state(CcaId::CUBIC);
    st.cwnd = cwnd;
    st.srtt_8us = srtt_8us;
    return st;
}

TEST_CASE("bdp_segments converts rate and rtt into a window") {
    // 16 Mbps over 50 ms is 100000 bytes in flight, i.e. 66.67 segments
    CHECK(bdp_segments(16, 400000, 1500) == doctest::Approx(200.0 / 3.0));
    CHECK(bdp_segments(16, 800000, 1500) == doctest::Approx(400.0 / 3.0));
    CHECK(bdp_segments(0, 400000, 1500) == 0.0);
}

TEST_CASE("the floor raises a small window to the minimum-rate BDP") {
    CcaState st = apply_customization(state_with(10, 400000), profile_16_40(), false);
    CHECK(st.cwnd == 67.0); // ceil(66.67)
}

TEST_CASE("boost gain scales the floor") {
    ControlProfile p = profile_16_40();
    p.boost_gain = 1.5;
    CcaState st = apply_customization(state_with(10, 400000), p, false);
    CHECK(st.cwnd == 100.0); // ceil(1.5 * 66.67)
}

TEST_CASE("the lossy regime starts at the threshold and has a sticky exit") {
    CHECK(loss_regime(0.06, 0.05, false));
    CHECK(loss_regime(0.05, 0.05, false)); // the threshold itself counts as lossy
    CHECK_FALSE(loss_regime(0.049, 0.05, false));
    CHECK(loss_regime(0.045, 0.05, true));       // hysteresis band: verdict stands
    CHECK_FALSE(loss_regime(0.045, 0.05, false));
    CHECK_FALSE(loss_regime(0.039, 0.05, true)); // under 0.8x the path is clean again
    CHECK_FALSE(loss_regime(0.0, 0.05, true));
}

TEST_CASE("a lossy verdict abandons the floor") {
    CcaState st = apply_customization(state_with(10, 400000), profile_16_40(), true);
    CHECK(st.cwnd == 10.0); // under the cap, so fully untouched
    st = apply_customization(state_with(10, 400000), profile_16_40(), false);
    CHECK(st.cwnd == 67.0);
}

TEST_CASE("the ceiling applies regardless of loss") {
    CcaState st = apply_customization(state_with(500, 400000), profile_16_40(), false);
    CHECK(st.cwnd == 166.0); // floor(40 Mbps BDP)
    st = apply_customization(state_with(500, 400000), profile_16_40(), true);
    CHECK(st.cwnd == 166.0);
}

TEST_CASE("cap margin tightens the ceiling") {
    ControlProfile p = profile_16_40();
    p.cap_margin = 0.9;
    CcaState st = apply_customization(state_with(500, 400000), p, false);
    CHECK(st.cwnd == 150.0); // floor(36 Mbps BDP), exactly 150
}

TEST_CASE("pacing rate is clamped to the capped rate in bytes per second") {
    CcaState st = state_with(10, 400000);
    st.pacing_rate_bps = 1e9;
    st = apply_customization(st, profile_16_40(), false);
    CHECK(*st.pacing_rate_bps == doctest::Approx(40e6 / 8.0));

    // an already-slower pacing rate is left alone
    st.pacing_rate_bps = 1e6;
    st = apply_customization(st, profile_16_40(), false);
    CHECK(*st.pacing_rate_bps == doctest::Approx(1e6));
}

TEST_CASE("no rtt estimate means no intervention") {
    CcaState st = apply_customization(state_with(10, 0), profile_16_40(), false);
    CHECK(st.cwnd == 10.0);
}

TEST_CASE("applying the wrapper twice changes nothing more") {
    for (double cwnd : {1.0, 10.0, 66.0, 67.0, 166.0, 500.0}) {
        CcaState once = apply_customization(state_with(cwnd, 400000), profile_16_40(), false);
        CcaState twice = apply_customization(once, profile_16_40(), 0.0);
        CHECK(twice.cwnd == once.cwnd);
    }
}

TEST_CASE("property: the result never exceeds the ceiling") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> cwnd_d(1, 2000), loss_d(0, 0.2);
    std::uniform_int_distribution<uint64_t> srtt_d(8000, 2000000);
    ControlProfile p = profile_16_40();
    for (int i = 0; i < 500; ++i) {
        uint64_t srtt = srtt_d(rng);
        bool lossy = loss_regime(loss_d(rng), p.loss_threshold, (i & 1) != 0);
        CcaState st = apply_customization(state_with(cwnd_d(rng), srtt), p, lossy);
        double cap = std::max(1.0, std::floor(bdp_segments(p.max_rate_mbps, srtt, 1500)));
        CHECK(st.cwnd <= cap);
        CHECK(st.cwnd >= 1.0);
    }
}
