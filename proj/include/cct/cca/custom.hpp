#pragma once

#include "cct/cca/profile.hpp"
#include "cct/cca/types.hpp"

namespace cct::cca {

// Window equivalent of `rate_mbps` at the current smoothed RTT, in segments.
double bdp_segments(double rate_mbps, uint64_t srtt_8us, uint32_t mss_bytes);

// Leaving the lossy regime needs the loss rate back under this fraction of
// the threshold; without the gap a path sitting near the threshold would
// flap the floor on and off with every estimator wobble.
inline constexpr double kFloorResumeFraction = 0.8;

// Classifies the path from a trailing-window loss measurement.  The lossy
// regime starts at `threshold` exactly and ends only below
// kFloorResumeFraction * threshold; in between the previous verdict stands.
bool loss_regime(double recent_loss_rate, double threshold, bool previously_lossy);

// Wraps one base-CCA step: raises cwnd to the floor needed for the minimum
// rate (scaled by boost_gain) unless the caller judged the path lossy, then
// clamps it to the ceiling derived from the maximum rate (scaled by
// cap_margin).  On a lossy path only the ceiling remains, so the flow sees
// plain base behaviour.  With no RTT estimate yet the state passes through
// untouched.
CcaState apply_customization(const CcaState& state, const ControlProfile& profile,
                             bool lossy_path);

} // namespace cct::cca
