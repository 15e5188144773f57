#include "cct/cca/dynamics.hpp"

#include "cct/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cct::cca {

namespace {

constexpr double kCubicC = 0.4;
constexpr double kCubicBeta = 717.0 / 1024.0; // Linux scaling
constexpr double kVegasAlpha = 2.0;
constexpr double kVegasBeta = 4.0;
constexpr double kVegasGamma = 1.0;
constexpr double kIllinoisAlphaMin = 0.3;
constexpr double kIllinoisAlphaMax = 10.0;
constexpr double kIllinoisBetaMin = 0.125;
constexpr double kIllinoisBetaMax = 0.5;
constexpr double kIllinoisWinThresh = 15.0;

void update_srtt(CcaState& st, uint32_t sample_us) {
    if (sample_us == 0) return;
    if (st.srtt_8us == 0) {
        st.srtt_8us = uint64_t(sample_us) * 8;
    } else {
        // srtt += sample - srtt/8, all in 8x-microsecond units
        st.srtt_8us = st.srtt_8us - st.srtt_8us / 8 + sample_us;
    }
}

// Counter-based additive increase: exactly +gain segments per cwnd acked.
void ai_counter(double& acked_in_round, double& cwnd, uint32_t acked, double gain) {
    acked_in_round += double(acked) * gain;
    double window = std::max(1.0, std::floor(cwnd));
    while (acked_in_round >= window) {
        acked_in_round -= window;
        cwnd += 1.0;
        window = std::max(1.0, std::floor(cwnd));
    }
}

void slow_start(CcaState& st, uint32_t acked) {
    st.cwnd = std::min(st.cwnd + double(acked), st.ssthresh);
}

void reno_ack(CcaState& st, const AckEvent& ev) {
    auto& s = std::get<RenoScratch>(st.scratch);
    if (st.cwnd < st.ssthresh) slow_start(st, ev.acked_segments);
    else ai_counter(s.acked_in_round, st.cwnd, ev.acked_segments, 1.0);
}

void cubic_ack(CcaState& st, const AckEvent& ev) {
    auto& s = std::get<CubicScratch>(st.scratch);
    if (st.cwnd < st.ssthresh) {
        slow_start(st, ev.acked_segments);
        return;
    }
    if (s.epoch_start_us < 0) {
        s.epoch_start_us = ev.at_time_us;
        if (s.w_max < st.cwnd) {
            // starting above the previous plateau: convex growth from here
            s.w_max = st.cwnd;
            s.k = 0;
        }
    }
    double t = double(ev.at_time_us - s.epoch_start_us) / 1e6;
    double target = cubic_window(s.w_max, t, s.k);

    // Reno-friendly floor keeps small-BDP flows competitive
    if (st.srtt_8us > 0) {
        double rtt_s = double(st.srtt_8us) / 8e6;
        s.w_est = s.w_max * kCubicBeta +
                  3.0 * (1.0 - kCubicBeta) / (1.0 + kCubicBeta) * (t / rtt_s);
        target = std::max(target, s.w_est);
    }
    if (target > st.cwnd) {
        double per_ack = std::min((target - st.cwnd) / st.cwnd, 1.0);
        st.cwnd += per_ack * ev.acked_segments;
    }
}

void vegas_round(CcaState& st, VegasScratch& s) {
    if (s.rtt_samples == 0 || s.base_rtt_us == UINT32_MAX) return;
    double rtt = double(s.min_rtt_us);
    double diff = st.cwnd * (1.0 - double(s.base_rtt_us) / rtt);

    if (st.cwnd < st.ssthresh) {
        // slow start: double only every other round, bail out once the
        // queue estimate exceeds gamma
        if (diff > kVegasGamma) {
            st.ssthresh = std::max(2.0, st.cwnd - 1.0);
            st.cwnd = std::max(2.0, st.cwnd - 1.0);
        } else if (s.even_round) {
            st.cwnd = std::min(st.cwnd * 2.0, st.ssthresh);
        }
        s.even_round = !s.even_round;
    } else {
        if (diff < kVegasAlpha) st.cwnd += 1.0;
        else if (diff > kVegasBeta) st.cwnd = std::max(2.0, st.cwnd - 1.0);
    }
    s.min_rtt_us = UINT32_MAX;
    s.rtt_samples = 0;
}

void vegas_ack(CcaState& st, const AckEvent& ev) {
    auto& s = std::get<VegasScratch>(st.scratch);
    if (ev.rtt_sample_us > 0) {
        s.base_rtt_us = std::min(s.base_rtt_us, ev.rtt_sample_us);
        s.min_rtt_us = std::min(s.min_rtt_us, ev.rtt_sample_us);
        ++s.rtt_samples;
    }
    s.segs_in_round += ev.acked_segments;
    if (s.segs_in_round >= std::floor(st.cwnd)) {
        s.segs_in_round = 0;
        vegas_round(st, s);
    }
}

void illinois_round(IllinoisScratch& s, double cwnd) {
    if (s.rtt_count == 0 || s.base_rtt_us == UINT32_MAX) return;
    if (cwnd < kIllinoisWinThresh) {
        s.alpha = 1.0;
        s.beta = kIllinoisBetaMax;
    } else {
        double avg = double(s.rtt_sum_us) / double(s.rtt_count);
        double da = avg - double(s.base_rtt_us);
        double dm = double(s.max_rtt_us) - double(s.base_rtt_us);
        if (dm <= 0) {
            s.alpha = kIllinoisAlphaMax;
            s.beta = kIllinoisBetaMin;
        } else {
            double d1 = dm / 100.0;
            if (da <= d1) {
                s.alpha = kIllinoisAlphaMax;
            } else {
                s.alpha = (dm - d1) * kIllinoisAlphaMax * kIllinoisAlphaMin /
                          (kIllinoisAlphaMin * (dm - d1) +
                           (da - d1) * (kIllinoisAlphaMax - kIllinoisAlphaMin));
            }
            double d2 = dm / 10.0;
            double d3 = 8.0 * dm / 10.0;
            if (da <= d2) s.beta = kIllinoisBetaMin;
            else if (da >= d3) s.beta = kIllinoisBetaMax;
            else s.beta = (kIllinoisBetaMin * (d3 - da) + kIllinoisBetaMax * (da - d2)) / (d3 - d2);
        }
    }
    s.rtt_sum_us = 0;
    s.rtt_count = 0;
    s.max_rtt_us = 0;
}

void illinois_ack(CcaState& st, const AckEvent& ev) {
    auto& s = std::get<IllinoisScratch>(st.scratch);
    if (ev.rtt_sample_us > 0) {
        s.base_rtt_us = std::min(s.base_rtt_us, ev.rtt_sample_us);
        s.max_rtt_us = std::max(s.max_rtt_us, ev.rtt_sample_us);
        s.rtt_sum_us += ev.rtt_sample_us;
        ++s.rtt_count;
    }
    s.segs_in_round += ev.acked_segments;
    if (s.segs_in_round >= std::floor(st.cwnd)) {
        s.segs_in_round = 0;
        illinois_round(s, st.cwnd);
    }
    if (st.cwnd < st.ssthresh) slow_start(st, ev.acked_segments);
    else ai_counter(s.acked_in_round, st.cwnd, ev.acked_segments, s.alpha);
}

void multiplicative_decrease(CcaState& st, double keep_fraction) {
    double reduced = std::floor(st.cwnd * keep_fraction);
    st.ssthresh = std::max(2.0, reduced);
    st.cwnd = std::max(1.0, reduced);
}

} // namespace

std::string to_string(CcaId id) {
    switch (id) {
        case CcaId::RENO: return "reno";
        case CcaId::CUBIC: return "cubic";
        case CcaId::VEGAS: return "vegas";
        case CcaId::ILLINOIS: return "illinois";
    }
    return "reno";
}

CcaId cca_from_string(const std::string& name) {
    if (name == "reno") return CcaId::RENO;
    if (name == "cubic") return CcaId::CUBIC;
    if (name == "vegas") return CcaId::VEGAS;
    if (name == "illinois") return CcaId::ILLINOIS;
    throw UnknownBase("unknown base CCA '" + name + "' (expected reno, cubic, vegas or illinois)");
}

CcaState make_initial_state(CcaId id, uint32_t mss_bytes) {
    CcaState st;
    st.id = id;
    st.mss_bytes = mss_bytes;
    switch (id) {
        case CcaId::RENO: st.scratch = RenoScratch{}; break;
        case CcaId::CUBIC: st.scratch = CubicScratch{}; break;
        case CcaId::VEGAS: st.scratch = VegasScratch{}; break;
        case CcaId::ILLINOIS: st.scratch = IllinoisScratch{}; break;
    }
    return st;
}

CcaState on_ack(const CcaState& state, const AckEvent& ev) {
    CcaState st = state;
    update_srtt(st, ev.rtt_sample_us);
    if (ev.in_recovery) return st; // srtt keeps tracking, the window does not grow
    switch (st.id) {
        case CcaId::RENO: reno_ack(st, ev); break;
        case CcaId::CUBIC: cubic_ack(st, ev); break;
        case CcaId::VEGAS: vegas_ack(st, ev); break;
        case CcaId::ILLINOIS: illinois_ack(st, ev); break;
    }
    st.cwnd = std::max(1.0, st.cwnd);
    return st;
}

CcaState on_loss(const CcaState& state, const LossEvent& ev) {
    CcaState st = state;
    if (ev.kind == LossKind::TIMEOUT) {
        st.ssthresh = std::max(2.0, std::floor(st.cwnd / 2.0));
        st.cwnd = 1.0;
        switch (st.id) {
            case CcaId::RENO:
                std::get<RenoScratch>(st.scratch).acked_in_round = 0;
                break;
            case CcaId::CUBIC: {
                auto& s = std::get<CubicScratch>(st.scratch);
                s.w_max = 0;
                s.k = 0;
                s.epoch_start_us = -1;
                break;
            }
            case CcaId::VEGAS: {
                auto& s = std::get<VegasScratch>(st.scratch);
                s.min_rtt_us = UINT32_MAX;
                s.rtt_samples = 0;
                s.segs_in_round = 0;
                break;
            }
            case CcaId::ILLINOIS: {
                auto& s = std::get<IllinoisScratch>(st.scratch);
                s.alpha = 1.0;
                s.beta = kIllinoisBetaMax;
                s.segs_in_round = 0;
                s.acked_in_round = 0;
                break;
            }
        }
        return st;
    }

    switch (st.id) {
        case CcaId::RENO:
        case CcaId::VEGAS:
            multiplicative_decrease(st, 0.5);
            break;
        case CcaId::CUBIC: {
            auto& s = std::get<CubicScratch>(st.scratch);
            if (st.cwnd < s.w_max) {
                // fast convergence: concede capacity to newer flows
                s.w_max = st.cwnd * (1.0 + kCubicBeta) / 2.0;
            } else {
                s.w_max = st.cwnd;
            }
            multiplicative_decrease(st, kCubicBeta);
            s.k = cubic_k(s.w_max, st.cwnd);
            s.epoch_start_us = -1;
            break;
        }
        case CcaId::ILLINOIS: {
            auto& s = std::get<IllinoisScratch>(st.scratch);
            multiplicative_decrease(st, 1.0 - s.beta);
            break;
        }
    }
    return st;
}

double throughput_from_cwnd(double cwnd_segments, uint32_t mss_bytes, uint64_t srtt_8us) {
    if (srtt_8us == 0) return 0.0;
    // bits per smoothed RTT over the RTT in seconds, scaled to Mbps;
    // the srtt unit is 1/8 microsecond, hence the factor 64
    return cwnd_segments * double(mss_bytes) * 64.0 / double(srtt_8us);
}

double cubic_window(double w_max, double t_seconds, double k_seconds) {
    double d = t_seconds - k_seconds;
    return kCubicC * d * d * d + w_max;
}

double cubic_k(double w_max, double cwnd_after_loss) {
    double drop = w_max - cwnd_after_loss;
    if (drop <= 0) return 0.0;
    return std::cbrt(drop / kCubicC);
}

} // namespace cct::cca
