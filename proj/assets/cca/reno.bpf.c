/* TCP Reno as a BPF struct-ops program: textbook slow start plus
 * one-segment-per-RTT congestion avoidance.  Smallest of the shipped
 * bases; the declarations up top stand in for the kernel headers so the
 * file also builds as a plain object for offline checks. */

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
};

static struct tcp_sock *tcp_sk(struct sock *sk)
{
    return (struct tcp_sock *)sk;
}

static int tcp_in_slow_start(const struct tcp_sock *tp)
{
    return tp->snd_cwnd < tp->snd_ssthresh;
}

/* grow by one segment per acked segment, stop at ssthresh;
 * returns how many acks were left over for congestion avoidance */
static __u32 tcp_slow_start(struct tcp_sock *tp, __u32 acked)
{
    __u32 cwnd = tp->snd_cwnd + acked;

    if (cwnd > tp->snd_ssthresh) {
        acked = cwnd - tp->snd_ssthresh;
        cwnd = tp->snd_ssthresh;
    } else {
        acked = 0;
    }
    tp->snd_cwnd = cwnd;
    return acked;
}

/* classic counter trick: +1 segment once a full window has been acked */
static void tcp_cong_avoid_ai(struct tcp_sock *tp, __u32 w, __u32 acked)
{
    tp->snd_cwnd_cnt += acked;
    if (tp->snd_cwnd_cnt >= w) {
        tp->snd_cwnd_cnt -= w;
        tp->snd_cwnd += 1;
    }
}

SEC("struct_ops/reno_cong_avoid")
void bpf_reno_cong_avoid(struct sock *sk, __u32 ack, __u32 acked)
{
    struct tcp_sock *tp = tcp_sk(sk);

    if (tcp_in_slow_start(tp)) {
        acked = tcp_slow_start(tp, acked);
        if (!acked)
            return;
    }
    tcp_cong_avoid_ai(tp, tp->snd_cwnd, acked);
}

SEC("struct_ops/reno_ssthresh")
__u32 bpf_reno_ssthresh(struct sock *sk)
{
    struct tcp_sock *tp = tcp_sk(sk);
    __u32 half = tp->snd_cwnd >> 1;

    return half > 2 ? half : 2;
}

SEC("struct_ops/reno_undo_cwnd")
__u32 bpf_reno_undo_cwnd(struct sock *sk)
{
    struct tcp_sock *tp = tcp_sk(sk);

    return tp->snd_cwnd > tp->snd_ssthresh ? tp->snd_cwnd : tp->snd_ssthresh;
}

struct tcp_congestion_ops {
    void (*cong_avoid)(struct sock *sk, __u32 ack, __u32 acked);
    __u32 (*ssthresh)(struct sock *sk);
    __u32 (*undo_cwnd)(struct sock *sk);
    char name[16];
};

SEC(".struct_ops")
struct tcp_congestion_ops reno_ops = {
    .cong_avoid = (void *)bpf_reno_cong_avoid,
    .ssthresh = (void *)bpf_reno_ssthresh,
    .undo_cwnd = (void *)bpf_reno_undo_cwnd,
    .name = "bpf_reno",
};
