#pragma once

// Independent oracles used by the unit and acceptance suites. These stay
// deliberately naive: brute force enumeration, direct dynamic programs,
// textbook algorithms. They must not share code paths with the library
// implementations they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "qcturbo/analysis.hpp"
#include "qcturbo/rsc.hpp"
#include "qcturbo/turbo.hpp"

namespace oracle {

using qcturbo::RscCode;
using qcturbo::Ratio;
using qcturbo::Trellis;

// Minimum event ratio by direct enumeration: min-plus DP over paths
// entry -> nonzero states -> exit of T transitions, T-1 <= horizon, combined
// with Karp's minimum mean cycle over the nonzero-state subgraph. The
// minimum over all simple error events equals the smaller of the two.
inline Ratio lambda_by_enumeration(const RscCode& code, int horizon = 40) {
    Trellis t = Trellis::build(code);
    const int S = t.num_states;
    const long long inf = std::numeric_limits<long long>::max() / 4;

    // min weight of an entry->state path with exactly k transitions,
    // never touching state zero after departure
    std::vector<std::vector<long long>> dp(static_cast<std::size_t>(horizon + 2),
                                           std::vector<long long>(static_cast<std::size_t>(S), inf));
    dp[1][static_cast<std::size_t>(t.next_state(0, 1))] = 1 + t.parity_bit(0, 1);

    long long best_num = 0, best_den = 0;  // empty until the first event
    auto offer = [&](long long w, long long len) {
        if (len <= 0) return;
        if (best_den == 0 || w * best_den < best_num * len) {
            best_num = w;
            best_den = len;
        }
    };

    for (int k = 1; k <= horizon; ++k) {
        for (int s = 1; s < S; ++s) {
            long long w = dp[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)];
            if (w >= inf) continue;
            // exit to zero (input 1 by the recursive property)
            if (t.next_state(s, 1) == 0) offer(w + 1 + t.parity_bit(s, 1), k);  // length = (k+1)-1
            for (int u = 0; u < 2; ++u) {
                int to = t.next_state(s, u);
                if (to == 0) continue;
                long long cand = w + u + t.parity_bit(s, u);
                auto& cell = dp[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(to)];
                cell = std::min(cell, cand);
            }
        }
    }

    // Karp over the nonzero subgraph. The all-zero initialization is the
    // super-source construction: on the augmented graph Karp's walk length is
    // its vertex count n+1, which is exactly n real edges, so K = n here.
    const int n = S - 1;  // nonzero states 1..S-1
    const int K = n;
    std::vector<std::vector<long long>> d(static_cast<std::size_t>(K + 1),
                                          std::vector<long long>(static_cast<std::size_t>(n), 0));
    for (int k = 1; k <= K; ++k) {
        for (int v = 0; v < n; ++v) d[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)] = inf;
        for (int s = 1; s < S; ++s) {
            long long base = d[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(s - 1)];
            if (base >= inf) continue;
            for (int u = 0; u < 2; ++u) {
                int to = t.next_state(s, u);
                if (to == 0) continue;
                long long cand = base + u + t.parity_bit(s, u);
                auto& cell = d[static_cast<std::size_t>(k)][static_cast<std::size_t>(to - 1)];
                cell = std::min(cell, cand);
            }
        }
    }
    long long kn = 0, kd = 0;  // min over v of max over k of (d_K - d_k)/(K-k)
    for (int v = 0; v < n; ++v) {
        if (d[static_cast<std::size_t>(K)][static_cast<std::size_t>(v)] >= inf) continue;
        long long mn = 0, md = 0;
        for (int k = 0; k < K; ++k) {
            if (d[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)] >= inf) continue;
            long long num = d[static_cast<std::size_t>(K)][static_cast<std::size_t>(v)] -
                            d[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)];
            long long den = K - k;
            if (md == 0 || num * md > mn * den) {
                mn = num;
                md = den;
            }
        }
        if (md != 0 && (kd == 0 || mn * kd < kn * md)) {
            kn = mn;
            kd = md;
        }
    }
    if (kd != 0 && (best_den == 0 || kn * best_den < best_num * kd)) {
        best_num = kn;
        best_den = kd;
    }
    if (best_den == 0) throw std::logic_error("lambda oracle: no event and no cycle found");
    return Ratio::of(best_num, best_den);
}

// Exact tail-biting a-posteriori bit probabilities by enumerating all 2^N
// information words. Returns P(bit = 0 | channel) per position.
inline std::vector<double> tb_posteriors_by_enumeration(const RscCode& code,
                                                        const std::vector<double>& sys_llr,
                                                        const std::vector<double>& par_llr,
                                                        const std::vector<double>& prior) {
    const int n = static_cast<int>(sys_llr.size());
    std::vector<double> log_p0(static_cast<std::size_t>(n),
                               -std::numeric_limits<double>::infinity());
    std::vector<double> log_p1 = log_p0;
    auto lse = [](double a, double b) {
        if (a == -std::numeric_limits<double>::infinity()) return b;
        if (b == -std::numeric_limits<double>::infinity()) return a;
        double m = std::max(a, b);
        return m + std::log1p(std::exp(-std::abs(a - b)));
    };
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    for (std::uint32_t word = 0; word < (1u << n); ++word) {
        for (int i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = (word >> i) & 1u;
        std::vector<std::uint8_t> par = qcturbo::encode_tail_biting(code, bits);
        double lp = 0.0;
        for (int i = 0; i < n; ++i) {
            lp += 0.5 * (sys_llr[static_cast<std::size_t>(i)] + prior[static_cast<std::size_t>(i)]) *
                  (1 - 2 * bits[static_cast<std::size_t>(i)]);
            lp += 0.5 * par_llr[static_cast<std::size_t>(i)] * (1 - 2 * par[static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < n; ++i) {
            if (bits[static_cast<std::size_t>(i)])
                log_p1[static_cast<std::size_t>(i)] = lse(log_p1[static_cast<std::size_t>(i)], lp);
            else
                log_p0[static_cast<std::size_t>(i)] = lse(log_p0[static_cast<std::size_t>(i)], lp);
        }
    }
    std::vector<double> p0(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double m = std::max(log_p0[static_cast<std::size_t>(i)], log_p1[static_cast<std::size_t>(i)]);
        double a = std::exp(log_p0[static_cast<std::size_t>(i)] - m);
        double b = std::exp(log_p1[static_cast<std::size_t>(i)] - m);
        p0[static_cast<std::size_t>(i)] = a / (a + b);
    }
    return p0;
}

// Codeword weight of a support set, re-encoded from scratch (no impulse
// tables), honoring the code's puncturing.
inline int reencode_weight(const qcturbo::TurboCode& tc, const std::vector<int>& support) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(tc.block_length()), 0);
    for (int p : support) bits[static_cast<std::size_t>(p)] = 1;
    auto tx = qcturbo::puncture_codeword(qcturbo::turbo_encode(tc, bits), tc.puncture);
    int w = 0;
    for (std::uint8_t b : tx) w += b & 1;
    return w;
}

} // namespace oracle
