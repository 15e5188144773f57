#include "cct/sim/scenario.hpp"

#include "cct/cca/custom.hpp"
#include "cct/cca/dynamics.hpp"
#include "cct/util.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <queue>

namespace cct::sim {

namespace {

constexpr uint32_t kMss = 1500;
constexpr int64_t kPsPerUs = 1'000'000;
constexpr int64_t kPsPerSec = 1'000'000'000'000LL;
constexpr int kLossBuckets = 20;
constexpr int64_t kLossBucketPs = kPsPerSec / 2; // 10 s of history in half-second buckets
constexpr uint64_t kMinLossSamples = 50;         // below this the regime verdict is stale-held
constexpr double kMaxStartJitterS = 0.2; // cross traffic staggers within this
constexpr double kMinRtoS = 0.2;
constexpr double kInitialRtoS = 1.0;
constexpr int kMaxBackoff = 8;

double to_unit(uint64_t h) { return double(h >> 11) * 0x1.0p-53; }

enum SegState : uint8_t { SEG_OUT, SEG_SACKED, SEG_LOST, SEG_RETX };

struct SegMeta {
    uint8_t state = SEG_OUT;
    uint8_t copies = 0; // retransmission ordinal of the latest copy
    int64_t sent_ps = 0;
};

enum class Ev : uint8_t { FLOW_START, ACK, DEPART, RTO, TX };

struct Event {
    int64_t t = 0;
    uint64_t tie = 0; // insertion order breaks timestamp ties deterministically
    Ev kind = Ev::ACK;
    int flow = 0;
    uint64_t seq = 0;
    uint8_t copy = 0;
    int64_t sent_ps = 0;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.t != b.t) return a.t > b.t;
        return a.tie > b.tie;
    }
};

struct SimFlow {
    cca::CcaState st;
    const cca::ControlProfile* profile = nullptr;

    // scoreboard over [base, next_seq); base tracks the cumulative ack
    uint64_t base = 0;
    uint64_t next_seq = 0;
    uint64_t fack = 0;        // highest delivered seq + 1
    uint64_t mark_cursor = 0; // resume point for loss marking
    uint64_t retx_cursor = 0; // resume point for retransmission search
    std::deque<SegMeta> board;
    int64_t pipe = 0; // transmissions in flight and unaccounted

    bool in_recovery = false;
    uint64_t recovery_point = 0;

    int64_t next_tx_ps = 0; // pacing gate: earliest time the next packet may leave
    bool tx_armed = false;  // a TX wakeup is already queued

    double rttvar_us = 0.0;
    bool have_rtt = false;
    int backoff = 0;
    int64_t rto_deadline = 0;

    // sender-side loss over the trailing window (drives the loss-regime wrapper)
    std::array<uint64_t, kLossBuckets> bucket_tx{};
    std::array<uint64_t, kLossBuckets> bucket_lost{};
    uint64_t win_tx = 0;
    uint64_t win_lost = 0;
    int64_t cur_bucket = 0;
    bool lossy = false;

    // measurement-window tallies
    uint64_t tx_window = 0;
    uint64_t lost_window = 0;
    uint64_t delivered_window_bytes = 0;
    double rtt_sum_ms = 0.0;
    uint64_t rtt_samples = 0;
    uint32_t rto_events = 0;
    uint32_t md_events = 0;

    // receiver side: dedupe of delivered sequence numbers
    uint64_t rcv_next = 0;
    std::deque<bool> rcv_got;
};

struct QueuedPkt {
    int flow;
    uint64_t seq;
    uint8_t copy;
    int64_t sent_ps;
};

class Sim {
public:
    Sim(const ScenarioSpec& sc, const std::vector<FlowSetup>& subjects) : sc_(sc) {
        ser_ps_ = int64_t(std::llround(double(kMss) * 8.0 * 1e6 / sc.bottleneck_mbps));
        rtt_ps_ = int64_t(std::llround(sc.rtt_ms * 1e-3 * double(kPsPerSec)));
        half_rtt_ps_ = rtt_ps_ / 2;
        capacity_ = sc.queue_capacity_pkts > 0
                        ? sc.queue_capacity_pkts
                        : default_queue_capacity(sc.bottleneck_mbps, sc.rtt_ms);
        end_ps_ = int64_t(std::llround(sc.duration_s * double(kPsPerSec)));
        warmup_ps_ = int64_t(std::llround(sc.warmup_s * double(kPsPerSec)));

        std::vector<FlowSetup> all = subjects;
        for (int i = 0; i < sc.competing_flows; ++i) all.push_back({sc.cross_cca, std::nullopt});
        flows_.resize(all.size());
        for (size_t f = 0; f < all.size(); ++f) {
            flows_[f].st = cca::make_initial_state(all[f].id, kMss);
            if (all[f].profile) owned_profiles_.push_back(*all[f].profile);
        }
        // second pass: deque growth above never happens, but keep pointers
        // stable by resolving them after owned_profiles_ is complete
        size_t pi = 0;
        for (size_t f = 0; f < all.size(); ++f)
            if (all[f].profile) flows_[f].profile = &owned_profiles_[pi++];

        for (size_t f = 0; f < flows_.size(); ++f) {
            int64_t start = 0;
            if (f > 0) {
                uint64_t h = fnv1a_mix(sc.seed, 0x5481u + uint64_t(f));
                start = int64_t(to_unit(h) * kMaxStartJitterS * double(kPsPerSec));
            }
            push(start, Ev::FLOW_START, int(f));
        }
    }

    std::vector<FlowStats> run() {
        while (!pq_.empty() && pq_.top().t <= end_ps_) {
            Event e = pq_.top();
            pq_.pop();
            now_ = e.t;
            switch (e.kind) {
                case Ev::FLOW_START: pump(e.flow); arm_rto(flows_[e.flow]); break;
                case Ev::ACK: on_ack(e); break;
                case Ev::DEPART: on_depart(e); break;
                case Ev::RTO: on_rto(e); break;
                case Ev::TX:
                    flows_[e.flow].tx_armed = false;
                    pump(e.flow);
                    break;
            }
        }
        return finalize();
    }

private:
    void push(int64_t t, Ev kind, int flow, uint64_t seq = 0, uint8_t copy = 0,
              int64_t sent_ps = 0) {
        pq_.push(Event{t, tie_++, kind, flow, seq, copy, sent_ps});
    }

    bool in_window(int64_t t) const { return t >= warmup_ps_ && t <= end_ps_; }

    void roll_loss_window(SimFlow& fl) const {
        int64_t b = now_ / kLossBucketPs;
        if (b - fl.cur_bucket >= kLossBuckets) { // idle long enough to clear everything
            fl.bucket_tx.fill(0);
            fl.bucket_lost.fill(0);
            fl.win_tx = fl.win_lost = 0;
            fl.cur_bucket = b;
            return;
        }
        while (fl.cur_bucket < b) {
            size_t slot = size_t(++fl.cur_bucket % kLossBuckets);
            fl.win_tx -= fl.bucket_tx[slot];
            fl.win_lost -= fl.bucket_lost[slot];
            fl.bucket_tx[slot] = 0;
            fl.bucket_lost[slot] = 0;
        }
    }

    void count_tx(SimFlow& fl) const {
        roll_loss_window(fl);
        fl.bucket_tx[size_t(fl.cur_bucket % kLossBuckets)]++;
        fl.win_tx++;
    }

    void count_lost(SimFlow& fl, uint64_t n) const {
        if (n == 0) return;
        roll_loss_window(fl);
        fl.bucket_lost[size_t(fl.cur_bucket % kLossBuckets)] += n;
        fl.win_lost += n;
    }

    // the stack keeps sk_pacing_rate at the Linux defaults: 2x the cwnd rate
    // while slow-starting, 1.2x in congestion avoidance
    void refresh_pacing(SimFlow& fl) const {
        if (fl.st.srtt_8us == 0) return;
        double factor = fl.st.cwnd < fl.st.ssthresh ? 2.0 : 1.2;
        fl.st.pacing_rate_bps =
            factor * fl.st.cwnd * double(fl.st.mss_bytes) * 8e6 / double(fl.st.srtt_8us);
    }

    void wrap(SimFlow& fl) {
        refresh_pacing(fl);
        if (!fl.profile) return;
        roll_loss_window(fl);
        // with too few fresh transmissions the last verdict stands (a flow
        // waking from an RTO stall must not read an empty window as a clean path)
        if (fl.win_tx >= kMinLossSamples)
            fl.lossy = cca::loss_regime(double(fl.win_lost) / double(fl.win_tx),
                                        fl.profile->loss_threshold, fl.lossy);
        fl.st = cca::apply_customization(fl.st, *fl.profile, fl.lossy);
    }

    int64_t effective_window(const SimFlow& fl) const {
        return std::max<int64_t>(1, int64_t(std::floor(fl.st.cwnd)));
    }

    // --- bottleneck -------------------------------------------------------

    void begin_service(const QueuedPkt& p) {
        busy_ = true;
        // +-1 % deterministic service jitter; without it droptail flows
        // phase-lock and the same senders eat every overflow drop
        uint64_t h = fnv1a_mix(fnv1a_mix(sc_.seed, 0xa11ce5u + uint64_t(p.flow)),
                               p.seq * 256 + p.copy);
        int64_t ser = int64_t(double(ser_ps_) * (0.99 + 0.02 * to_unit(h)));
        push(now_ + ser, Ev::DEPART, p.flow, p.seq, p.copy, p.sent_ps);
    }

    void enqueue(int flow, uint64_t seq, uint8_t copy, int64_t sent_ps) {
        if (!busy_) {
            begin_service({flow, seq, copy, sent_ps});
            return;
        }
        if (int(fifo_.size()) >= capacity_) {
            if (in_window(now_)) flows_[flow].lost_window++;
            return; // droptail: the sender finds out through the gap
        }
        fifo_.push_back({flow, seq, copy, sent_ps});
    }

    bool wire_drop(int flow, uint64_t seq, uint8_t copy) const {
        if (sc_.random_loss_rate <= 0.0) return false;
        uint64_t h = fnv1a_mix(fnv1a_mix(fnv1a_mix(sc_.seed, 0x9e3779b97f4a7c15ULL + uint64_t(flow)),
                                         seq),
                               copy);
        return to_unit(h) < sc_.random_loss_rate;
    }

    void on_depart(const Event& e) {
        if (!fifo_.empty()) {
            QueuedPkt next = fifo_.front();
            fifo_.pop_front();
            begin_service(next);
        } else {
            busy_ = false;
        }

        if (wire_drop(e.flow, e.seq, e.copy)) {
            if (in_window(now_)) flows_[e.flow].lost_window++;
            return;
        }
        deliver(e);
        push(now_ + rtt_ps_, Ev::ACK, e.flow, e.seq, e.copy, e.sent_ps);
    }

    void deliver(const Event& e) {
        SimFlow& fl = flows_[e.flow];
        int64_t arrival = now_ + half_rtt_ps_;
        if (e.seq < fl.rcv_next) return; // duplicate of an already-delivered seq
        size_t idx = size_t(e.seq - fl.rcv_next);
        if (idx >= fl.rcv_got.size()) fl.rcv_got.resize(idx + 1, false);
        if (fl.rcv_got[idx]) return;
        fl.rcv_got[idx] = true;
        if (in_window(arrival)) fl.delivered_window_bytes += kMss;
        while (!fl.rcv_got.empty() && fl.rcv_got.front()) {
            fl.rcv_got.pop_front();
            fl.rcv_next++;
        }
    }

    // --- sender -----------------------------------------------------------

    void transmit(SimFlow& fl, int f, uint64_t seq, bool retx) {
        int64_t sent = now_;
        uint8_t copy = 0;
        if (retx) {
            SegMeta& m = fl.board[size_t(seq - fl.base)];
            m.state = SEG_RETX;
            if (m.copies < 255) m.copies++;
            m.sent_ps = sent;
            copy = m.copies;
        } else {
            fl.board.push_back({SEG_OUT, 0, sent});
            fl.next_seq++;
        }
        fl.pipe++;
        count_tx(fl);
        if (in_window(now_)) fl.tx_window++;
        enqueue(f, seq, copy, sent);
    }

    int64_t pacing_gap_ps(const SimFlow& fl) const {
        if (!fl.st.pacing_rate_bps || *fl.st.pacing_rate_bps <= 0) return 0;
        return int64_t(double(kMss) / *fl.st.pacing_rate_bps * double(kPsPerSec));
    }

    void pump(int f) {
        SimFlow& fl = flows_[f];
        int64_t w = effective_window(fl);
        while (fl.pipe < w) {
            if (now_ < fl.next_tx_ps) { // pacing gate closed: come back for the rest
                if (!fl.tx_armed) {
                    fl.tx_armed = true;
                    push(fl.next_tx_ps, Ev::TX, f);
                }
                return;
            }
            // retransmissions take priority over new data
            while (fl.retx_cursor < fl.next_seq &&
                   (fl.retx_cursor < fl.base ||
                    fl.board[size_t(fl.retx_cursor - fl.base)].state != SEG_LOST))
                fl.retx_cursor++;
            if (fl.retx_cursor < fl.next_seq) {
                transmit(fl, f, fl.retx_cursor, true);
                fl.retx_cursor++;
            } else {
                transmit(fl, f, fl.next_seq, false);
            }
            fl.next_tx_ps = now_ + pacing_gap_ps(fl);
        }
    }

    int64_t rto_interval_ps(const SimFlow& fl) const {
        double us = fl.have_rtt ? double(fl.st.srtt_8us) / 8.0 + 4.0 * fl.rttvar_us
                                : kInitialRtoS * 1e6;
        us = std::max(us, kMinRtoS * 1e6);
        return int64_t(us * double(kPsPerUs)) << std::min(fl.backoff, kMaxBackoff);
    }

    void arm_rto(SimFlow& fl) {
        fl.rto_deadline = now_ + rto_interval_ps(fl);
        push(fl.rto_deadline, Ev::RTO, int(&fl - flows_.data()));
    }

    void on_rto(const Event& e) {
        SimFlow& fl = flows_[e.flow];
        if (e.t != fl.rto_deadline) return; // superseded by a later arm
        if (fl.base == fl.next_seq) {       // nothing outstanding; keep watching
            arm_rto(fl);
            return;
        }
        fl.rto_events++;
        fl.st = cca::on_loss(fl.st, {uint32_t(fl.next_seq - fl.base), cca::LossKind::TIMEOUT,
                                     now_ / kPsPerUs});
        wrap(fl);
        uint64_t newly = 0;
        for (auto& m : fl.board)
            if (m.state == SEG_OUT || m.state == SEG_RETX) {
                m.state = SEG_LOST;
                newly++;
            }
        count_lost(fl, newly);
        fl.pipe = 0;
        fl.retx_cursor = fl.base;
        fl.mark_cursor = fl.base;
        fl.in_recovery = false;
        fl.recovery_point = fl.next_seq;
        fl.backoff++;
        arm_rto(fl);
        pump(e.flow);
    }

    void sack(SimFlow& fl, uint64_t seq) {
        SegMeta& m = fl.board[size_t(seq - fl.base)];
        if (m.state == SEG_OUT || m.state == SEG_RETX) fl.pipe--;
        m.state = SEG_SACKED;
        fl.fack = std::max(fl.fack, seq + 1);
    }

    // marks segments with three or more deliveries above them as lost;
    // the cursor only moves forward, so total work stays linear
    uint64_t mark_losses(SimFlow& fl) {
        uint64_t newly = 0;
        fl.mark_cursor = std::max(fl.mark_cursor, fl.base);
        while (fl.mark_cursor < fl.next_seq && fl.mark_cursor + 3 < fl.fack) {
            SegMeta& m = fl.board[size_t(fl.mark_cursor - fl.base)];
            if (m.state == SEG_OUT) {
                m.state = SEG_LOST;
                fl.pipe--;
                fl.retx_cursor = std::min(fl.retx_cursor, fl.mark_cursor);
                newly++;
            }
            // retransmitted copies are exempt (their gap is stale news);
            // timeouts cover a lost retransmission
            fl.mark_cursor++;
        }
        count_lost(fl, newly);
        return newly;
    }

    void on_ack(const Event& e) {
        SimFlow& fl = flows_[e.flow];
        if (e.seq < fl.base) return;
        SegMeta& m = fl.board[size_t(e.seq - fl.base)];
        if (m.state == SEG_SACKED) return;

        uint32_t sample_us = 0;
        if (m.copies == 0) { // never retransmitted: the sample is unambiguous
            sample_us = uint32_t((now_ - e.sent_ps) / kPsPerUs);
            if (fl.have_rtt) {
                double err = std::abs(double(fl.st.srtt_8us) / 8.0 - double(sample_us));
                fl.rttvar_us = 0.75 * fl.rttvar_us + 0.25 * err;
            } else {
                fl.rttvar_us = double(sample_us) / 2.0;
                fl.have_rtt = true;
            }
            if (in_window(now_)) {
                fl.rtt_sum_ms += double(sample_us) / 1000.0;
                fl.rtt_samples++;
            }
        }

        sack(fl, e.seq);
        bool advanced = false;
        while (!fl.board.empty() && fl.board.front().state == SEG_SACKED) {
            fl.board.pop_front();
            fl.base++;
            advanced = true;
        }
        if (advanced) {
            fl.backoff = 0;
            arm_rto(fl);
        }

        uint64_t newly = mark_losses(fl);
        if (newly > 0 && !fl.in_recovery) {
            fl.in_recovery = true;
            fl.recovery_point = fl.next_seq;
            fl.md_events++;
            fl.st = cca::on_loss(fl.st,
                                 {uint32_t(newly), cca::LossKind::DUPACK, now_ / kPsPerUs});
            wrap(fl);
        }
        if (fl.in_recovery && fl.base >= fl.recovery_point) fl.in_recovery = false;

        fl.st = cca::on_ack(fl.st, {1, sample_us, now_ / kPsPerUs, fl.in_recovery});
        wrap(fl);
        pump(e.flow);
    }

    std::vector<FlowStats> finalize() {
        std::vector<FlowStats> out(flows_.size());
        double win_s = sc_.duration_s - sc_.warmup_s;
        for (size_t f = 0; f < flows_.size(); ++f) {
            SimFlow& fl = flows_[f];
            FlowStats& s = out[f];
            if (win_s <= 0) continue;
            s.delivered_bytes = fl.delivered_window_bytes;
            s.mean_throughput_mbps = double(fl.delivered_window_bytes) * 8.0 / win_s / 1e6;
            s.loss_rate = fl.tx_window
                              ? std::min(double(fl.lost_window) / double(fl.tx_window), 0.999999)
                              : 0.0;
            s.rtt_mean_ms = fl.rtt_samples ? fl.rtt_sum_ms / double(fl.rtt_samples) : 0.0;
            s.rto_events = fl.rto_events;
            s.md_events = fl.md_events;
        }
        return out;
    }

    ScenarioSpec sc_;
    std::vector<SimFlow> flows_;
    std::deque<cca::ControlProfile> owned_profiles_;

    std::priority_queue<Event, std::vector<Event>, EventAfter> pq_;
    uint64_t tie_ = 0;
    int64_t now_ = 0;

    std::deque<QueuedPkt> fifo_;
    bool busy_ = false;
    int capacity_ = 1;
    int64_t ser_ps_ = 0;
    int64_t rtt_ps_ = 0;
    int64_t half_rtt_ps_ = 0;
    int64_t end_ps_ = 0;
    int64_t warmup_ps_ = 0;
};

} // namespace

int default_queue_capacity(double bottleneck_mbps, double rtt_ms) {
    double pkts = bottleneck_mbps * 1e6 * rtt_ms * 1e-3 / (8.0 * double(kMss));
    return std::max(4, int(std::lround(pkts)));
}

std::vector<FlowStats> run_scenario(const ScenarioSpec& sc, const std::vector<FlowSetup>& flows) {
    Sim sim(sc, flows);
    return sim.run();
}

double jain_index(const std::vector<double>& xs) {
    if (xs.empty()) return 1.0;
    double sum = 0.0, sq = 0.0;
    for (double x : xs) {
        sum += x;
        sq += x * x;
    }
    if (sq == 0.0) return 1.0;
    return sum * sum / (double(xs.size()) * sq);
}

std::string scenario_to_text(const ScenarioSpec& sc) {
    KvDoc doc;
    doc.emplace_back("id", sc.id);
    doc.emplace_back("bottleneck_mbps", format_double(sc.bottleneck_mbps));
    doc.emplace_back("rtt_ms", format_double(sc.rtt_ms));
    doc.emplace_back("queue_capacity_pkts", std::to_string(sc.queue_capacity_pkts));
    doc.emplace_back("competing_flows", std::to_string(sc.competing_flows));
    doc.emplace_back("cross_cca", cca::to_string(sc.cross_cca));
    doc.emplace_back("random_loss_rate", format_double(sc.random_loss_rate));
    doc.emplace_back("duration_s", format_double(sc.duration_s));
    doc.emplace_back("warmup_s", format_double(sc.warmup_s));
    doc.emplace_back("seed", std::to_string(sc.seed));
    return kv_render(doc);
}

} // namespace cct::sim
