/* TCP Cubic as a BPF struct-ops program.  Window grows along
 * W(t) = C*(t - K)^3 + W_max after each loss epoch, with a Reno-friendly
 * floor for small-BDP paths.  Fixed-point throughout; the cube root is a
 * bounded Newton iteration so a verifier can walk it.  The declarations
 * up top stand in for the kernel headers so the file also builds as a
 * plain object for offline checks. */

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
    __u32 tcp_mstamp;    /* recent send timestamp, milliseconds here */
};

static struct tcp_sock *tcp_sk(struct sock *sk)
{
    return (struct tcp_sock *)sk;
}

static int tcp_in_slow_start(const struct tcp_sock *tp)
{
    return tp->snd_cwnd < tp->snd_ssthresh;
}

#define BICTCP_BETA_SCALE 1024
#define BICTCP_HZ 10 /* time unit: 2^-10 s */

static const __u32 beta_scaled = 717;   /* = 0.7 * 1024 */
static const __u32 cube_scale = 410;    /* = 0.4 * 1024 */

struct bictcp {
    __u32 cnt;           /* acks needed per cwnd increment */
    __u32 last_max_cwnd; /* W_max: cwnd right before the last reduction */
    __u32 epoch_start;   /* ms timestamp opening this growth epoch */
    __u32 bic_K;         /* K in BICTCP_HZ units */
    __u32 origin_point;  /* plateau the curve aims for, segments */
    __u32 tcp_cwnd;      /* Reno-equivalent estimate for friendliness */
    __u32 ack_cnt;       /* acks accumulated for the estimate */
};

static struct bictcp ca_state; /* per-connection in the kernel; one here */

/* integer cube root by Newton steps; 20 rounds is plenty for 64 bits */
static __u32 cubic_root(__u64 a)
{
    __u64 x = 1 << 22;
    int i;

    for (i = 0; i < 20; i++) {
        __u64 x2 = x * x;
        if (!x2)
            break;
        x = (2 * x + a / x2) / 3;
    }
    return (__u32)x;
}

static void bictcp_reset(struct bictcp *ca)
{
    ca->cnt = 0;
    ca->last_max_cwnd = 0;
    ca->epoch_start = 0;
    ca->bic_K = 0;
    ca->origin_point = 0;
    ca->tcp_cwnd = 0;
    ca->ack_cnt = 0;
}

/* compute ca->cnt: how many acks until cwnd may grow by one segment */
static void bictcp_update(struct bictcp *ca, struct tcp_sock *tp, __u32 acked)
{
    __u32 cwnd = tp->snd_cwnd;
    __u32 now_ms = tp->tcp_mstamp;
    __u64 t, delta, target;

    ca->ack_cnt += acked;

    if (ca->epoch_start == 0) {
        ca->epoch_start = now_ms ? now_ms : 1;
        ca->ack_cnt = acked;
        ca->tcp_cwnd = cwnd;
        if (ca->last_max_cwnd <= cwnd) {
            ca->bic_K = 0;
            ca->origin_point = cwnd;
        } else {
            /* K = cbrt((W_max - cwnd) / C), fixed point in BICTCP_HZ */
            ca->bic_K = cubic_root(((__u64)(ca->last_max_cwnd - cwnd)
                                    << (3 * BICTCP_HZ)) * BICTCP_BETA_SCALE
                                   / cube_scale);
            ca->origin_point = ca->last_max_cwnd;
        }
    }

    /* elapsed epoch time in 2^-10 s */
    t = ((__u64)(now_ms - (ca->epoch_start - 1)) << BICTCP_HZ) / 1000;

    if (t < ca->bic_K)
        delta = ca->bic_K - t;
    else
        delta = t - ca->bic_K;
    /* |W(t) - origin| = C * delta^3; cube_scale carries a 2^10 factor */
    delta = (cube_scale * delta * delta * delta) >> (10 + 3 * BICTCP_HZ);

    if (t < ca->bic_K)
        target = ca->origin_point - delta;
    else
        target = ca->origin_point + delta;

    if (target > cwnd)
        ca->cnt = cwnd / (__u32)(target - cwnd + 1);
    else
        ca->cnt = 100 * cwnd; /* at or past the plateau: crawl */

    /* TCP-friendly region: never slower than an equivalent Reno flow */
    if (tp->srtt_us) {
        __u64 est_grow = ((__u64)ca->ack_cnt * 3 * (BICTCP_BETA_SCALE
                          - beta_scaled)) / (BICTCP_BETA_SCALE + beta_scaled);
        ca->tcp_cwnd += (__u32)(est_grow / (cwnd ? cwnd : 1));
        if (ca->tcp_cwnd > cwnd) {
            __u32 gap = ca->tcp_cwnd - cwnd;
            __u32 friendly_cnt = cwnd / gap;
            if (friendly_cnt < ca->cnt)
                ca->cnt = friendly_cnt;
        }
    }

    if (ca->cnt == 0)
        ca->cnt = 1;
}

SEC("struct_ops/cubic_cong_avoid")
void bpf_cubic_cong_avoid(struct sock *sk, __u32 ack, __u32 acked)
{
    struct tcp_sock *tp = tcp_sk(sk);
    struct bictcp *ca = &ca_state;

    if (tcp_in_slow_start(tp)) {
        __u32 cwnd = tp->snd_cwnd + acked;
        if (cwnd > tp->snd_ssthresh) {
            acked = cwnd - tp->snd_ssthresh;
            cwnd = tp->snd_ssthresh;
        } else {
            acked = 0;
        }
        tp->snd_cwnd = cwnd;
        if (!acked)
            return;
    }

    bictcp_update(ca, tp, acked);
    tp->snd_cwnd_cnt += acked;
    if (tp->snd_cwnd_cnt >= ca->cnt) {
        tp->snd_cwnd_cnt = 0;
        tp->snd_cwnd += 1;
    }
}

SEC("struct_ops/cubic_ssthresh")
__u32 bpf_cubic_ssthresh(struct sock *sk)
{
    struct tcp_sock *tp = tcp_sk(sk);
    struct bictcp *ca = &ca_state;
    __u32 cwnd = tp->snd_cwnd;
    __u32 reduced;

    ca->epoch_start = 0; /* close the epoch */
    if (cwnd < ca->last_max_cwnd)
        /* fast convergence: concede room to newer flows */
        ca->last_max_cwnd = (cwnd * (BICTCP_BETA_SCALE + beta_scaled))
                            / (2 * BICTCP_BETA_SCALE);
    else
        ca->last_max_cwnd = cwnd;

    reduced = (cwnd * beta_scaled) / BICTCP_BETA_SCALE;
    return reduced > 2 ? reduced : 2;
}

SEC("struct_ops/cubic_undo_cwnd")
__u32 bpf_cubic_undo_cwnd(struct sock *sk)
{
    struct tcp_sock *tp = tcp_sk(sk);
    struct bictcp *ca = &ca_state;

    return tp->snd_cwnd > ca->last_max_cwnd ? tp->snd_cwnd
                                            : ca->last_max_cwnd;
}

SEC("struct_ops/cubic_init")
void bpf_cubic_init(struct sock *sk)
{
    (void)sk;
    bictcp_reset(&ca_state);
}

struct tcp_congestion_ops {
    void (*init)(struct sock *sk);
    void (*cong_avoid)(struct sock *sk, __u32 ack, __u32 acked);
    __u32 (*ssthresh)(struct sock *sk);
    __u32 (*undo_cwnd)(struct sock *sk);
    char name[16];
};

SEC(".struct_ops")
struct tcp_congestion_ops cubic_ops = {
    .init = (void *)bpf_cubic_init,
    .cong_avoid = (void *)bpf_cubic_cong_avoid,
    .ssthresh = (void *)bpf_cubic_ssthresh,
    .undo_cwnd = (void *)bpf_cubic_undo_cwnd,
    .name = "bpf_cubic",
};
