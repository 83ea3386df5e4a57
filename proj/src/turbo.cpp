#include "qcturbo/turbo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qcturbo {

TurboCode TurboCode::make(const RscCode& code, Permutation perm, PuncturePattern puncture) {
    code.validate();
    if (perm.size() < 1) throw ValidationError("TurboCode: empty interleaver");
    TurboCode tc{code, std::move(perm), puncture, Trellis::build(code)};
    // probe tail-biting solvability once; throws UnsupportedLengthError if N is bad
    tail_biting_initial_state(code, std::vector<std::uint8_t>(tc.block_length(), 0));
    return tc;
}

int TurboCodeword::weight() const {
    auto wt = [](const std::vector<std::uint8_t>& v) {
        return static_cast<int>(std::count(v.begin(), v.end(), std::uint8_t{1}));
    };
    return wt(systematic) + wt(parity1) + wt(parity2);
}

TurboCodeword turbo_encode(const TurboCode& tc, const std::vector<std::uint8_t>& bits) {
    const int n = tc.block_length();
    if (static_cast<int>(bits.size()) != n)
        throw ValidationError("turbo_encode: frame length " + std::to_string(bits.size()) +
                              " != interleaver size " + std::to_string(n));
    TurboCodeword cw;
    cw.systematic = bits;
    cw.parity1 = encode_tail_biting(tc.code, bits);
    std::vector<std::uint8_t> permuted(bits.size());
    for (int t = 0; t < n; ++t) permuted[t] = bits[tc.perm(t)];
    cw.parity2 = encode_tail_biting(tc.code, permuted);
    cw.punctured_length = tc.transmitted_length();
    return cw;
}

std::vector<std::uint8_t> puncture_codeword(const TurboCodeword& cw, PuncturePattern pattern) {
    const int n = static_cast<int>(cw.systematic.size());
    if (static_cast<int>(cw.parity1.size()) != n || static_cast<int>(cw.parity2.size()) != n)
        throw ValidationError("puncture: parity stream length mismatch");
    std::vector<std::uint8_t> out;
    out.reserve(pattern == PuncturePattern::none ? 3 * n : 2 * n);
    out.insert(out.end(), cw.systematic.begin(), cw.systematic.end());
    if (pattern == PuncturePattern::none) {
        out.insert(out.end(), cw.parity1.begin(), cw.parity1.end());
        out.insert(out.end(), cw.parity2.begin(), cw.parity2.end());
    } else {
        for (int t = 0; t < n; ++t) out.push_back(t % 2 == 0 ? cw.parity1[t] : cw.parity2[t]);
    }
    return out;
}

LlrFrame depuncture(const std::vector<double>& llrs, int n, PuncturePattern pattern) {
    const int expect = pattern == PuncturePattern::none ? 3 * n : 2 * n;
    if (static_cast<int>(llrs.size()) != expect)
        throw ValidationError("depuncture: got " + std::to_string(llrs.size()) +
                              " symbols, expected " + std::to_string(expect));
    LlrFrame f;
    f.channel_sys.assign(llrs.begin(), llrs.begin() + n);
    f.channel_p1.assign(n, 0.0);
    f.channel_p2.assign(n, 0.0);
    f.extrinsic.assign(n, 0.0);
    if (pattern == PuncturePattern::none) {
        std::copy(llrs.begin() + n, llrs.begin() + 2 * n, f.channel_p1.begin());
        std::copy(llrs.begin() + 2 * n, llrs.end(), f.channel_p2.begin());
    } else {
        for (int t = 0; t < n; ++t) {
            if (t % 2 == 0)
                f.channel_p1[t] = llrs[n + t];
            else
                f.channel_p2[t] = llrs[n + t];
        }
    }
    return f;
}

namespace {

constexpr double kExtrinsicClamp = 50.0;

inline double jac_log(double a, double b) {
    double m = std::max(a, b);
    double d = std::abs(a - b);
    if (d > 37.0) return m;  // exp underflows past this
    return m + std::log1p(std::exp(-d));
}

inline double jac_max(double a, double b) { return std::max(a, b); }

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw NumericError(std::string("bcjr: non-finite ") + what);
}

} // namespace

std::vector<double> bcjr_tail_biting(const Trellis& trellis, const std::vector<double>& sys_llr,
                                     const std::vector<double>& par_llr,
                                     const std::vector<double>& prior, int wraps, BcjrMode mode) {
    const int n = static_cast<int>(sys_llr.size());
    const int S = trellis.num_states;
    if (static_cast<int>(par_llr.size()) != n || static_cast<int>(prior.size()) != n)
        throw ValidationError("bcjr: stream length mismatch");
    if (wraps < 1) throw ValidationError("bcjr: wraps must be >= 1");
    require_finite(sys_llr, "systematic LLR");
    require_finite(par_llr, "parity LLR");
    require_finite(prior, "prior");

    const bool exact = (mode == BcjrMode::log_map);
    auto jac = [exact](double a, double b) { return exact ? jac_log(a, b) : jac_max(a, b); };

    // half-metrics per time step: gamma(t,s,u) = a[t]*(1-2u) + b[t]*(1-2p(s,u))
    std::vector<double> a(n), b(n);
    for (int t = 0; t < n; ++t) {
        a[t] = 0.5 * (sys_llr[t] + prior[t]);
        b[t] = 0.5 * par_llr[t];
    }

    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> alpha(static_cast<std::size_t>(n + 1) * S, 0.0);
    std::vector<double> beta(static_cast<std::size_t>(n + 1) * S, 0.0);
    std::vector<double> cur(S), nxt(S);

    auto normalize = [&](std::vector<double>& v) {
        double m = *std::max_element(v.begin(), v.end());
        for (double& x : v) x -= m;
    };

    // forward, `wraps` passes around the circle; last pass is recorded
    std::fill(cur.begin(), cur.end(), 0.0);
    for (int w = 0; w < wraps; ++w) {
        const bool record = (w == wraps - 1);
        if (record) std::copy(cur.begin(), cur.end(), alpha.begin());
        for (int t = 0; t < n; ++t) {
            std::fill(nxt.begin(), nxt.end(), neg_inf);
            for (int s = 0; s < S; ++s) {
                for (int u = 0; u < 2; ++u) {
                    double g = a[t] * (1 - 2 * u) + b[t] * (1 - 2 * trellis.parity_bit(s, u));
                    int to = trellis.next_state(s, u);
                    nxt[to] = jac(nxt[to], cur[s] + g);
                }
            }
            normalize(nxt);
            std::swap(cur, nxt);
            if (record) std::copy(cur.begin(), cur.end(), alpha.begin() + static_cast<std::size_t>(t + 1) * S);
        }
    }

    // backward
    std::fill(cur.begin(), cur.end(), 0.0);
    for (int w = 0; w < wraps; ++w) {
        const bool record = (w == wraps - 1);
        if (record) std::copy(cur.begin(), cur.end(), beta.begin() + static_cast<std::size_t>(n) * S);
        for (int t = n - 1; t >= 0; --t) {
            std::fill(nxt.begin(), nxt.end(), neg_inf);
            for (int s = 0; s < S; ++s) {
                for (int u = 0; u < 2; ++u) {
                    double g = a[t] * (1 - 2 * u) + b[t] * (1 - 2 * trellis.parity_bit(s, u));
                    nxt[s] = jac(nxt[s], g + cur[trellis.next_state(s, u)]);
                }
            }
            normalize(nxt);
            std::swap(cur, nxt);
            if (record) std::copy(cur.begin(), cur.end(), beta.begin() + static_cast<std::size_t>(t) * S);
        }
    }

    // extrinsic output: parity half-metric only, so position t never sees
    // sys[t] or prior[t]
    std::vector<double> ext(n);
    for (int t = 0; t < n; ++t) {
        const double* at = alpha.data() + static_cast<std::size_t>(t) * S;
        const double* bt = beta.data() + static_cast<std::size_t>(t + 1) * S;
        double num = neg_inf, den = neg_inf;
        for (int s = 0; s < S; ++s) {
            double m0 = at[s] + b[t] * (1 - 2 * trellis.parity_bit(s, 0)) + bt[trellis.next_state(s, 0)];
            double m1 = at[s] + b[t] * (1 - 2 * trellis.parity_bit(s, 1)) + bt[trellis.next_state(s, 1)];
            num = jac(num, m0);
            den = jac(den, m1);
        }
        ext[t] = num - den;
    }
    return ext;
}

DecodeResult turbo_decode(const TurboCode& tc, const LlrFrame& frame, int iterations, int wraps,
                          BcjrMode mode) {
    const int n = tc.block_length();
    if (iterations < 1) throw ValidationError("turbo_decode: iterations must be >= 1");
    if (static_cast<int>(frame.channel_sys.size()) != n ||
        static_cast<int>(frame.channel_p1.size()) != n ||
        static_cast<int>(frame.channel_p2.size()) != n)
        throw ValidationError("turbo_decode: frame length mismatch");

    std::vector<double> sys2(n);
    for (int t = 0; t < n; ++t) sys2[t] = frame.channel_sys[tc.perm(t)];

    auto clamp = [](std::vector<double> v) {
        for (double& x : v) x = std::clamp(x, -kExtrinsicClamp, kExtrinsicClamp);
        return v;
    };

    std::vector<double> ext1(n, 0.0);      // branch-1 extrinsic, natural order
    std::vector<double> ext2_nat = frame.extrinsic.empty() ? std::vector<double>(n, 0.0)
                                                           : frame.extrinsic;
    std::vector<double> prior2(n);
    DecodeResult res;
    res.bits.assign(n, 0);
    res.trace.reserve(iterations);

    for (int it = 0; it < iterations; ++it) {
        ext1 = bcjr_tail_biting(tc.trellis, frame.channel_sys, frame.channel_p1, clamp(ext2_nat),
                                wraps, mode);
        for (int t = 0; t < n; ++t) prior2[t] = std::clamp(ext1[tc.perm(t)], -kExtrinsicClamp,
                                                           kExtrinsicClamp);
        std::vector<double> ext2 = bcjr_tail_biting(tc.trellis, sys2, frame.channel_p2, prior2,
                                                    wraps, mode);
        for (int t = 0; t < n; ++t) ext2_nat[tc.perm(t)] = ext2[t];

        IterationStat stat;
        stat.min_abs_llr = std::numeric_limits<double>::infinity();
        for (int x = 0; x < n; ++x) {
            double app = frame.channel_sys[x] + ext1[x] + ext2_nat[x];
            std::uint8_t bit = app < 0.0 ? 1 : 0;
            stat.changed_bits += (bit != res.bits[x]);
            stat.min_abs_llr = std::min(stat.min_abs_llr, std::abs(app));
            res.bits[x] = bit;
        }
        res.trace.push_back(stat);
    }
    return res;
}

} // namespace qcturbo
