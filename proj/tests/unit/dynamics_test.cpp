#include "doctest.h"

#include "cct/cca/dynamics.hpp"
#include "cct/errors.hpp"

#include <cmath>

using namespace cct::cca;

TEST_CASE("initial state carries the documented defaults") {
    CcaState st = make_initial_state(CcaId::CUBIC);
    CHECK(st.cwnd == 10.0);
    CHECK(st.ssthresh == double(1 << 20));
    CHECK(st.srtt_8us == 0);
    CHECK(st.mss_bytes == 1500);
    CHECK(std::holds_alternative<CubicScratch>(st.scratch));
    CHECK(std::holds_alternative<IllinoisScratch>(make_initial_state(CcaId::ILLINOIS).scratch));
}

TEST_CASE("id names round-trip and junk is rejected") {
    for (CcaId id : {CcaId::RENO, CcaId::CUBIC, CcaId::VEGAS, CcaId::ILLINOIS})
        CHECK(cca_from_string(to_string(id)) == id);
    CHECK_THROWS_AS(cca_from_string("bbr"), cct::UnknownBase);
}

TEST_CASE("srtt keeps the kernel's eighth-microsecond EWMA") {
    CcaState st = make_initial_state(CcaId::RENO);
    st = on_ack(st, {1, 100000, 0, false}); // first sample: stored times eight
    CHECK(st.srtt_8us == 800000);
    st = on_ack(st, {1, 50000, 0, false}); // srtt - srtt/8 + sample
    CHECK(st.srtt_8us == 800000 - 100000 + 50000);
    st = on_ack(st, {1, 0, 0, false}); // no usable sample: unchanged
    CHECK(st.srtt_8us == 750000);
}

TEST_CASE("reno grows one segment per acked window") {
    CcaState st = make_initial_state(CcaId::RENO);
    st.cwnd = 10;
    st.ssthresh = 10; // congestion avoidance
    st = on_ack(st, {10, 20000, 0, false});
    CHECK(st.cwnd == 11.0);

    // slow start doubles per round instead
    CcaState ss = make_initial_state(CcaId::RENO);
    ss.cwnd = 10;
    ss = on_ack(ss, {10, 20000, 0, false});
    CHECK(ss.cwnd == 20.0);
}

TEST_CASE("recovery acks update srtt but never the window") {
    CcaState st = make_initial_state(CcaId::RENO);
    st.cwnd = 10;
    st = on_ack(st, {10, 20000, 0, true});
    CHECK(st.cwnd == 10.0);
    CHECK(st.srtt_8us == 160000);
}

TEST_CASE("cubic window curve and recovery time") {
    double k = cubic_k(100.0, 70.0);
    CHECK(k == doctest::Approx(4.2171633265).epsilon(1e-9)); // cbrt(30 / 0.4)
    CHECK(cubic_window(100.0, k, k) == doctest::Approx(100.0));
    CHECK(cubic_window(100.0, 0.0, k) == doctest::Approx(70.0));
    CHECK(cubic_k(100.0, 100.0) == 0.0);
}

TEST_CASE("cubic climbs back to the plateau after one recovery time") {
    CcaState st = make_initial_state(CcaId::CUBIC);
    st.cwnd = 70;
    st.ssthresh = 70;
    auto& s = std::get<CubicScratch>(st.scratch);
    s.w_max = 100;
    s.k = cubic_k(100.0, 70.0);

    st = on_ack(st, {1, 0, 0, false}); // opens the epoch, target still at cwnd
    CHECK(st.cwnd == doctest::Approx(70.0));

    int64_t at_k = int64_t(std::get<CubicScratch>(st.scratch).k * 1e6);
    st = on_ack(st, {70, 0, at_k, false}); // a full window of acks at t = K
    CHECK(st.cwnd == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("cubic loss applies the 717/1024 reduction") {
    CcaState st = make_initial_state(CcaId::CUBIC);
    st.cwnd = 100;
    st.ssthresh = 50;
    st = on_loss(st, {1, LossKind::DUPACK, 0});
    CHECK(st.cwnd == 70.0); // floor(100 * 717/1024)
    CHECK(st.ssthresh == 70.0);
    const auto& s = std::get<CubicScratch>(st.scratch);
    CHECK(s.w_max == 100.0);
    CHECK(s.epoch_start_us == -1);

    // fast convergence: losing below the old plateau concedes capacity
    CcaState fc = make_initial_state(CcaId::CUBIC);
    fc.cwnd = 50;
    std::get<CubicScratch>(fc.scratch).w_max = 80;
    fc = on_loss(fc, {1, LossKind::DUPACK, 0});
    CHECK(std::get<CubicScratch>(fc.scratch).w_max ==
          doctest::Approx(50.0 * (1.0 + 717.0 / 1024.0) / 2.0));
}

TEST_CASE("vegas steers by the queue estimate at round boundaries") {
    CcaState st = make_initial_state(CcaId::VEGAS);
    st.cwnd = 25;
    st.ssthresh = 20; // congestion avoidance
    auto& s = std::get<VegasScratch>(st.scratch);
    s.base_rtt_us = 100000;
    s.segs_in_round = 24;

    // diff = 25 * (1 - 100/125) = 5 > beta(4): back off by one
    st = on_ack(st, {1, 125000, 0, false});
    CHECK(st.cwnd == 24.0);

    // diff = 24 * (1 - 100/101) ~ 0.24 < alpha(2): grow by one
    std::get<VegasScratch>(st.scratch).segs_in_round = 23;
    st = on_ack(st, {1, 101000, 0, false});
    CHECK(st.cwnd == 25.0);

    // between alpha and beta: hold
    std::get<VegasScratch>(st.scratch).segs_in_round = 24;
    st = on_ack(st, {1, 114000, 0, false}); // diff = 25 * (1 - 100/114) ~ 3.07
    CHECK(st.cwnd == 25.0);
}

TEST_CASE("vegas slow start doubles every other round") {
    CcaState st = make_initial_state(CcaId::VEGAS);
    st.cwnd = 4;
    auto feed_round = [&](uint32_t rtt) {
        std::get<VegasScratch>(st.scratch).segs_in_round = std::floor(st.cwnd) - 1;
        st = on_ack(st, {1, rtt, 0, false});
    };
    feed_round(100000); // establishes base, odd round: hold
    CHECK(st.cwnd == 4.0);
    feed_round(100000); // even round: double
    CHECK(st.cwnd == 8.0);

    // queue estimate above gamma exits slow start
    feed_round(130000); // diff = 8 * (1 - 100/130) ~ 1.85 > gamma(1)
    CHECK(st.cwnd == 7.0);
    CHECK(st.ssthresh == 7.0);
}

TEST_CASE("illinois adapts alpha and beta to queueing delay") {
    CcaState st = make_initial_state(CcaId::ILLINOIS);
    st.cwnd = 100;
    st.ssthresh = 50;

    auto prime = [&](uint32_t base, uint32_t max, uint64_t sum, uint32_t count) {
        auto& s = std::get<IllinoisScratch>(st.scratch);
        s.base_rtt_us = base;
        s.max_rtt_us = max;
        s.rtt_sum_us = sum;
        s.rtt_count = count;
        s.segs_in_round = std::floor(st.cwnd) - 1;
    };

    // nearly no queueing: most aggressive increase, gentlest decrease
    prime(100000, 200000, 100500, 1); // da = 500 <= d1 = 1000
    st = on_ack(st, {1, 0, 0, false});
    CHECK(std::get<IllinoisScratch>(st.scratch).alpha == 10.0);
    CHECK(std::get<IllinoisScratch>(st.scratch).beta == 0.125);

    // heavy queueing: da = 90000 >= d3 = 80000
    prime(100000, 200000, 190000, 1);
    st = on_ack(st, {1, 0, 0, false});
    CHECK(std::get<IllinoisScratch>(st.scratch).alpha ==
          doctest::Approx(0.332587).epsilon(1e-4)); // hyperbolic interpolation
    CHECK(std::get<IllinoisScratch>(st.scratch).beta == 0.5);

    // small windows fall back to plain AIMD behaviour
    st.cwnd = 10;
    prime(100000, 200000, 150000, 1);
    st = on_ack(st, {1, 0, 0, false});
    CHECK(std::get<IllinoisScratch>(st.scratch).alpha == 1.0);
    CHECK(std::get<IllinoisScratch>(st.scratch).beta == 0.5);
}

TEST_CASE("illinois loss scales by the adaptive beta") {
    CcaState st = make_initial_state(CcaId::ILLINOIS);
    st.cwnd = 100;
    std::get<IllinoisScratch>(st.scratch).beta = 0.125;
    CcaState gentle = on_loss(st, {1, LossKind::DUPACK, 0});
    CHECK(gentle.cwnd == 87.0); // floor(100 * 0.875)

    std::get<IllinoisScratch>(st.scratch).beta = 0.5;
    CcaState harsh = on_loss(st, {1, LossKind::DUPACK, 0});
    CHECK(harsh.cwnd == 50.0);
}

TEST_CASE("reno loss halves, timeout collapses to one") {
    CcaState st = make_initial_state(CcaId::RENO);
    st.cwnd = 20;
    CcaState dup = on_loss(st, {1, LossKind::DUPACK, 0});
    CHECK(dup.cwnd == 10.0);
    CHECK(dup.ssthresh == 10.0);

    CcaState to = on_loss(st, {1, LossKind::TIMEOUT, 0});
    CHECK(to.cwnd == 1.0);
    CHECK(to.ssthresh == 10.0);

    // the window never leaves [1, inf)
    st.cwnd = 1;
    CHECK(on_loss(st, {1, LossKind::DUPACK, 0}).cwnd == 1.0);
    CHECK(on_loss(st, {1, LossKind::TIMEOUT, 0}).cwnd == 1.0);
}

TEST_CASE("timeout clears cubic's epoch memory") {
    CcaState st = make_initial_state(CcaId::CUBIC);
    st.cwnd = 80;
    auto& s = std::get<CubicScratch>(st.scratch);
    s.w_max = 100;
    s.k = 3;
    s.epoch_start_us = 5;
    st = on_loss(st, {1, LossKind::TIMEOUT, 0});
    CHECK(st.cwnd == 1.0);
    CHECK(std::get<CubicScratch>(st.scratch).w_max == 0.0);
    CHECK(std::get<CubicScratch>(st.scratch).epoch_start_us == -1);
}

TEST_CASE("throughput follows cwnd * mss * 8 / srtt") {
    CHECK(throughput_from_cwnd(10, 1500, 800000) == doctest::Approx(1.2));
    CHECK(throughput_from_cwnd(100, 1500, 400000) == doctest::Approx(24.0));
    CHECK(throughput_from_cwnd(20, 1500, 800000) ==
          doctest::Approx(2 * throughput_from_cwnd(10, 1500, 800000)));
    CHECK(throughput_from_cwnd(10, 1500, 0) == 0.0);
}
