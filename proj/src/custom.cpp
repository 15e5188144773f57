#include "cct/cca/custom.hpp"

#include <algorithm>
#include <cmath>

namespace cct::cca {

double bdp_segments(double rate_mbps, uint64_t srtt_8us, uint32_t mss_bytes) {
    // rate_mbps * 1e6 bit/s over an RTT of srtt_8us/8e6 s, in mss-sized segments
    return rate_mbps * double(srtt_8us) / (64.0 * double(mss_bytes));
}

bool loss_regime(double recent_loss_rate, double threshold, bool previously_lossy) {
    if (recent_loss_rate >= threshold) return true;
    if (recent_loss_rate < kFloorResumeFraction * threshold) return false;
    return previously_lossy;
}

CcaState apply_customization(const CcaState& state, const ControlProfile& profile,
                             bool lossy_path) {
    if (state.srtt_8us == 0) return state;
    CcaState st = state;

    if (!lossy_path && profile.min_rate_mbps > 0) {
        double floor_segs =
            std::ceil(profile.boost_gain *
                      bdp_segments(profile.min_rate_mbps, st.srtt_8us, st.mss_bytes));
        st.cwnd = std::max(st.cwnd, floor_segs);
    }
    if (profile.max_rate_mbps > 0) {
        double cap_rate = profile.max_rate_mbps * profile.cap_margin;
        double cap_segs = std::floor(bdp_segments(cap_rate, st.srtt_8us, st.mss_bytes));
        st.cwnd = std::min(st.cwnd, std::max(1.0, cap_segs));
        if (st.pacing_rate_bps)
            st.pacing_rate_bps = std::min(*st.pacing_rate_bps, cap_rate * 1e6 / 8.0);
    }
    return st;
}

} // namespace cct::cca
