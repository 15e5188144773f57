#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace cct::cca {

enum class CcaId { RENO, CUBIC, VEGAS, ILLINOIS };

std::string to_string(CcaId id);
CcaId cca_from_string(const std::string& name); // throws UnknownBase

struct RenoScratch {
    double acked_in_round = 0; // congestion-avoidance ack counter
};

struct CubicScratch {
    double w_max = 0;           // window before the last reduction, segments
    double k = 0;               // seconds from epoch start to reach w_max
    int64_t epoch_start_us = -1; // -1: epoch not started
    double w_est = 0;           // Reno-friendly estimate
    double acked_in_round = 0;
};

struct VegasScratch {
    uint32_t base_rtt_us = UINT32_MAX;
    uint32_t min_rtt_us = UINT32_MAX; // minimum within the current round
    uint32_t rtt_samples = 0;
    double segs_in_round = 0;   // counts acked segments to detect round ends
    bool even_round = false;    // slow start grows every other round
};

struct IllinoisScratch {
    uint32_t base_rtt_us = UINT32_MAX;
    uint32_t max_rtt_us = 0;
    uint64_t rtt_sum_us = 0;
    uint32_t rtt_count = 0;
    double alpha = 1.0;         // additive increase, segments per RTT
    double beta = 0.5;          // multiplicative decrease factor
    double segs_in_round = 0;
    double acked_in_round = 0;
};

using Scratch = std::variant<RenoScratch, CubicScratch, VegasScratch, IllinoisScratch>;

// Sender-side congestion state.  cwnd is fractional segments (MSS units);
// srtt follows the Linux convention of 8x microseconds.
struct CcaState {
    CcaId id = CcaId::RENO;
    double cwnd = 10;
    double ssthresh = 1 << 20;
    uint64_t srtt_8us = 0;          // 0 until the first RTT sample
    std::optional<double> pacing_rate_bps; // sk_pacing_rate analogue, bytes per second;
                                           // unset until an RTT estimate exists
    uint32_t mss_bytes = 1500;
    Scratch scratch;
};

struct AckEvent {
    uint32_t acked_segments = 1;
    uint32_t rtt_sample_us = 0;  // 0: no usable sample (retransmitted segment)
    int64_t at_time_us = 0;      // event time on the simulation clock
    bool in_recovery = false;    // suppress window growth during loss recovery
};

enum class LossKind { DUPACK, TIMEOUT };

struct LossEvent {
    uint32_t lost_segments = 1;
    LossKind kind = LossKind::DUPACK;
    int64_t at_time_us = 0;
};

} // namespace cct::cca
