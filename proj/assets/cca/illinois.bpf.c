/* TCP Illinois as a BPF struct-ops program.  Loss decides the direction
 * of a window change, queueing delay decides its size: the additive
 * increase alpha shrinks from 10 down to 0.3 as the average delay rises,
 * and the multiplicative decrease beta grows from 1/8 to 1/2.  Fixed
 * point with a 2^10 scale.  The declarations up top stand in for the
 * kernel headers so the file also builds as a plain object for offline
 * checks. */

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

#define ALPHA_SHIFT 7
#define ALPHA_SCALE (1u << ALPHA_SHIFT)
#define ALPHA_MIN ((3 * ALPHA_SCALE) / 10) /* 0.3 */
#define ALPHA_MAX (10 * ALPHA_SCALE)       /* 10.0 */
#define ALPHA_BASE ALPHA_SCALE             /* 1.0 */

#define BETA_SHIFT 6
#define BETA_SCALE (1u << BETA_SHIFT)
#define BETA_MIN (BETA_SCALE / 8) /* 0.125 */
#define BETA_MAX (BETA_SCALE / 2) /* 0.5 */
#define BETA_BASE BETA_MAX

#define WIN_THRESH 15 /* below this cwnd, stay plain AIMD */

struct illinois {
    __u32 base_rtt_us;  /* smallest RTT ever seen */
    __u32 max_rtt_us;   /* largest RTT in the current round */
    __u64 sum_rtt_us;   /* sum of samples in the current round */
    __u32 cnt_rtt;      /* samples in the current round */
    __u32 end_seq;      /* round boundary marker */
    __u32 alpha;        /* scaled additive increase */
    __u32 beta;         /* scaled multiplicative decrease */
    __u32 acked_credit; /* alpha-weighted ack counter */
};

static struct illinois ca_state = {
    .base_rtt_us = 0x7fffffff,
    .alpha = ALPHA_BASE,
    .beta = BETA_BASE,
};

SEC("struct_ops/illinois_pkts_acked")
void bpf_illinois_pkts_acked(struct sock *sk, __u32 rtt_us)
{
    struct illinois *ca = &ca_state;

    if (rtt_us == 0)
        return;
    if (rtt_us < ca->base_rtt_us)
        ca->base_rtt_us = rtt_us;
    if (rtt_us > ca->max_rtt_us)
        ca->max_rtt_us = rtt_us;
    ca->sum_rtt_us += rtt_us;
    ca->cnt_rtt++;
}

/* once per round: recompute alpha and beta from the delay profile */
static void illinois_update_params(struct illinois *ca, struct tcp_sock *tp)
{
    __u32 da, dm, d1, d2, d3;

    if (ca->cnt_rtt == 0 || ca->base_rtt_us == 0x7fffffff)
        goto reset;

    if (tp->snd_cwnd < WIN_THRESH) {
        ca->alpha = ALPHA_BASE;
        ca->beta = BETA_BASE;
        goto reset;
    }

    da = (__u32)(ca->sum_rtt_us / ca->cnt_rtt) - ca->base_rtt_us;
    dm = ca->max_rtt_us - ca->base_rtt_us;

    if (dm == 0) {
        ca->alpha = ALPHA_MAX;
        ca->beta = BETA_MIN;
        goto reset;
    }

    /* alpha: ALPHA_MAX while delay is below dm/100, then a hyperbolic
     * fall toward ALPHA_MIN as delay approaches dm */
    d1 = dm / 100;
    if (da <= d1) {
        ca->alpha = ALPHA_MAX;
    } else {
        __u64 num = (__u64)(dm - d1) * ALPHA_MAX * ALPHA_MIN;
        __u64 den = (__u64)ALPHA_MIN * (dm - d1)
                    + (__u64)(da - d1) * (ALPHA_MAX - ALPHA_MIN);
        ca->alpha = (__u32)(num / den);
    }

    /* beta: BETA_MIN below dm/10, BETA_MAX above 8dm/10, linear between */
    d2 = dm / 10;
    d3 = (8 * dm) / 10;
    if (da <= d2) {
        ca->beta = BETA_MIN;
    } else if (da >= d3) {
        ca->beta = BETA_MAX;
    } else {
        __u64 num = (__u64)BETA_MIN * (d3 - da) + (__u64)BETA_MAX * (da - d2);
        ca->beta = (__u32)(num / (d3 - d2));
    }

reset:
    ca->sum_rtt_us = 0;
    ca->cnt_rtt = 0;
    ca->max_rtt_us = 0;
}

SEC("struct_ops/illinois_cong_avoid")
void bpf_illinois_cong_avoid(struct sock *sk, __u32 ack, __u32 acked)
{
    struct tcp_sock *tp = tcp_sk(sk);
    struct illinois *ca = &ca_state;

    if ((__s64)(ack - ca->end_seq) >= 0) {
        ca->end_seq = tp->snd_nxt;
        illinois_update_params(ca, tp);
    }

    if (tcp_in_slow_start(tp)) {
        __u32 cwnd = tp->snd_cwnd + acked;
        if (cwnd > tp->snd_ssthresh)
            cwnd = tp->snd_ssthresh;
        tp->snd_cwnd = cwnd;
        return;
    }

    /* +alpha segments per RTT via an alpha-weighted counter */
    ca->acked_credit += acked * ca->alpha;
    if (ca->acked_credit >= tp->snd_cwnd * ALPHA_SCALE) {
        ca->acked_credit -= tp->snd_cwnd * ALPHA_SCALE;
        tp->snd_cwnd += 1;
    }
}

SEC("struct_ops/illinois_ssthresh")
__u32 bpf_illinois_ssthresh(struct sock *sk)
{
    struct tcp_sock *tp = tcp_sk(sk);
    struct illinois *ca = &ca_state;
    __u32 reduced = tp->snd_cwnd
                    - ((tp->snd_cwnd * ca->beta) >> BETA_SHIFT);

    return reduced > 2 ? reduced : 2;
}

SEC("struct_ops/illinois_undo_cwnd")
__u32 bpf_illinois_undo_cwnd(struct sock *sk)
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
struct tcp_congestion_ops illinois_ops = {
    .cong_avoid = (void *)bpf_illinois_cong_avoid,
    .pkts_acked = (void *)bpf_illinois_pkts_acked,
    .ssthresh = (void *)bpf_illinois_ssthresh,
    .undo_cwnd = (void *)bpf_illinois_undo_cwnd,
    .name = "bpf_illinois",
};
