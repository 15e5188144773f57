/* TCP Vegas as a BPF struct-ops program.  Delay-based: once per RTT the
 * window moves by one segment so the estimated queue occupancy stays
 * between alpha and beta packets.  The declarations up top stand in for
 * the kernel headers so the file also builds as a plain object for
 * offline checks. */

#ifndef SEC
#define SEC(name) __attribute__((section(name), used))
#endif

typedef unsigned char  __u8;
typedef unsigned short __u16;
typedef unsigned int   __u32;
typedef unsigned long long __u64;
typedef long long __s64;

#define TCP_INFINITE_SSTHRESH 0x7fffffff

struct sock {
    __u64 sk_pacing_rate; /* bytes per second */
};

struct tcp_sock {
    struct sock sk;
    __u32 snd_cwnd;      /* congestion window, segments */
    __u32 snd_cwnd_cnt;  /* acked segments since last cwnd bump */
    __u32 snd_ssthresh;  /* slow start threshold, segments */
    __u32 srtt_us;       /* smoothed RTT, 8x microseconds */
    __u32 mss_cache;     /* current effective MSS, bytes */
    __u32 delivered;     /* packets delivered so far */
    __u32 lost;          /* packets marked lost so far */
    __u32 snd_una;       /* oldest unacknowledged sequence */
    __u32 snd_nxt;       /* next sequence to send */
};

static struct tcp_sock *tcp_sk(struct sock *sk)
{
    return (struct tcp_sock *)sk;
}

static int tcp_in_slow_start(const struct tcp_sock *tp)
{
    return tp->snd_cwnd < tp->snd_ssthresh;
}

#define V_ALPHA 2 /* keep at least this many packets queued */
#define V_BETA  4 /* but never more than this many */
#define V_GAMMA 1 /* slow start exits once the queue estimate passes this */

struct vegas {
    __u32 base_rtt_us; /* smallest RTT ever seen, the propagation guess */
    __u32 min_rtt_us;  /* smallest RTT in the current round */
    __u32 cnt_rtt;     /* RTT samples in the current round */
    __u32 beg_snd_nxt; /* round boundary marker */
    __u8 doing_vegas;  /* sampling enabled */
    __u8 even_round;   /* slow start doubles every other round */
};

static struct vegas ca_state = {
    .base_rtt_us = 0x7fffffff,
    .min_rtt_us = 0x7fffffff,
    .doing_vegas = 1,
};

SEC("struct_ops/vegas_pkts_acked")
void bpf_vegas_pkts_acked(struct sock *sk, __u32 rtt_us)
{
    struct vegas *ca = &ca_state;

    if (!ca->doing_vegas || rtt_us == 0)
        return;
    if (rtt_us < ca->base_rtt_us)
        ca->base_rtt_us = rtt_us;
    if (rtt_us < ca->min_rtt_us)
        ca->min_rtt_us = rtt_us;
    ca->cnt_rtt++;
}

SEC("struct_ops/vegas_cong_avoid")
void bpf_vegas_cong_avoid(struct sock *sk, __u32 ack, __u32 acked)
{
    struct tcp_sock *tp = tcp_sk(sk);
    struct vegas *ca = &ca_state;
    __u64 queued;

    /* act once per round trip: when the marker from the previous round
     * has been fully acknowledged */
    if ((__s64)(ack - ca->beg_snd_nxt) < 0)
        return;
    ca->beg_snd_nxt = tp->snd_nxt;

    if (ca->cnt_rtt == 0 || ca->base_rtt_us == 0x7fffffff)
        return;

    /* packets sitting in queues: cwnd * (rtt - base_rtt) / rtt */
    queued = (__u64)tp->snd_cwnd
             * (ca->min_rtt_us - ca->base_rtt_us) / ca->min_rtt_us;

    if (tcp_in_slow_start(tp)) {
        if (queued > V_GAMMA) {
            /* queue built up: stop slow start right here */
            tp->snd_ssthresh = tp->snd_cwnd > 2 ? tp->snd_cwnd - 1 : 2;
            if (tp->snd_cwnd > 2)
                tp->snd_cwnd -= 1;
        } else if (ca->even_round) {
            __u32 doubled = tp->snd_cwnd * 2;
            tp->snd_cwnd = doubled < tp->snd_ssthresh
                           ? doubled : tp->snd_ssthresh;
        }
        ca->even_round = !ca->even_round;
    } else {
        if (queued < V_ALPHA)
            tp->snd_cwnd += 1;
        else if (queued > V_BETA && tp->snd_cwnd > 2)
            tp->snd_cwnd -= 1;
    }

    ca->min_rtt_us = 0x7fffffff;
    ca->cnt_rtt = 0;
}

SEC("struct_ops/vegas_ssthresh")
__u32 bpf_vegas_ssthresh(struct sock *sk)
{
    struct tcp_sock *tp = tcp_sk(sk);
    __u32 half = tp->snd_cwnd >> 1;

    return half > 2 ? half : 2;
}

SEC("struct_ops/vegas_undo_cwnd")
__u32 bpf_vegas_undo_cwnd(struct sock *sk)
{
    struct tcp_sock *tp = tcp_sk(sk);

    return tp->snd_cwnd > tp->snd_ssthresh ? tp->snd_cwnd : tp->snd_ssthresh;
}

struct tcp_congestion_ops {
    void (*cong_avoid)(struct sock *sk, __u32 ack, __u32 acked);
    void (*pkts_acked)(struct sock *sk, __u32 rtt_us);
    __u32 (*ssthresh)(struct sock *sk);
    __u32 (*undo_cwnd)(struct sock *sk);
    char name[16];
};

SEC(".struct_ops")
struct tcp_congestion_ops vegas_ops = {
    .cong_avoid = (void *)bpf_vegas_cong_avoid,
    .pkts_acked = (void *)bpf_vegas_pkts_acked,
    .ssthresh = (void *)bpf_vegas_ssthresh,
    .undo_cwnd = (void *)bpf_vegas_undo_cwnd,
    .name = "bpf_vegas",
};
