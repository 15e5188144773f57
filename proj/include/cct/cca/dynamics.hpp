#pragma once

#include "cct/cca/types.hpp"

namespace cct::cca {

CcaState make_initial_state(CcaId id, uint32_t mss_bytes = 1500);

// One ACK arrival: srtt update (EWMA, weight 1/8, 8x-microsecond units)
// followed by the base algorithm's window growth.
CcaState on_ack(const CcaState& state, const AckEvent& ev);

// Loss reaction.  DUPACK applies the algorithm's multiplicative decrease
// (Reno x0.5, Cubic x717/1024, Illinois adaptive beta); TIMEOUT collapses
// cwnd to 1 after setting ssthresh.
CcaState on_loss(const CcaState& state, const LossEvent& ev);

// cwnd * mss * 8 bits over one smoothed RTT, expressed in Mbps.
// srtt is in the stored 8x-microsecond unit.
double throughput_from_cwnd(double cwnd_segments, uint32_t mss_bytes, uint64_t srtt_8us);

// The cubic window curve w(t) = C (t - k)^3 + w_max with C = 0.4.
double cubic_window(double w_max, double t_seconds, double k_seconds);

// Time for the curve to climb back to w_max after a reduction to cwnd.
double cubic_k(double w_max, double cwnd_after_loss);

} // namespace cct::cca
