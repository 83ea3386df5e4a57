#pragma once

#include <cstdint>
#include <vector>

#include "qcturbo/permutation.hpp"
#include "qcturbo/rsc.hpp"

namespace qcturbo {

enum class PuncturePattern { none, alternate };

/// Parallel turbo code: two tail-biting copies of the same RSC constituent
/// joined by an interleaver. Immutable; safe to share across workers.
struct TurboCode {
    RscCode code;
    Permutation perm;
    PuncturePattern puncture = PuncturePattern::none;
    Trellis trellis;

    int block_length() const { return perm.size(); }
    double rate() const { return puncture == PuncturePattern::none ? 1.0 / 3.0 : 0.5; }
    int transmitted_length() const {
        return puncture == PuncturePattern::none ? 3 * block_length() : 2 * block_length();
    }

    /// Validates the constituent and that tail-biting is solvable at N.
    static TurboCode make(const RscCode& code, Permutation perm,
                          PuncturePattern puncture = PuncturePattern::none);
};

struct TurboCodeword {
    std::vector<std::uint8_t> systematic;
    std::vector<std::uint8_t> parity1;
    std::vector<std::uint8_t> parity2;
    int punctured_length = 0;

    /// Hamming weight of the three unpunctured streams.
    int weight() const;
};

/// systematic = s, parity1 = TB(s), parity2 = TB(s o pi) with
/// (s o pi)_t = s_{pi(t)}.
TurboCodeword turbo_encode(const TurboCode& tc, const std::vector<std::uint8_t>& bits);

/// Transmitted bit order: the N systematic bits, then the parity block.
/// Unpunctured parity block = parity1 then parity2 (3N total); alternate
/// puncturing keeps parity1 at even t and parity2 at odd t (2N total).
std::vector<std::uint8_t> puncture_codeword(const TurboCodeword& cw, PuncturePattern pattern);

/// Channel LLRs for one frame, expanded to the unpunctured layout.
/// Punctured positions carry exactly 0 (erasure); `extrinsic` is the decoder
/// prior, zero for a fresh frame.
struct LlrFrame {
    std::vector<double> channel_sys;
    std::vector<double> channel_p1;
    std::vector<double> channel_p2;
    std::vector<double> extrinsic;
};

/// Expand received-symbol LLRs (in puncture_codeword order) back to an
/// LlrFrame, writing 0 at punctured positions.
LlrFrame depuncture(const std::vector<double>& llrs, int n, PuncturePattern pattern);

enum class BcjrMode { log_map, max_log_map };

/// Tail-biting forward-backward pass on the circular trellis. Boundary state
/// metrics start uniform and are propagated around the circle `wraps` times,
/// end metrics feeding back as start metrics; outputs come from the final
/// wrap. Returns extrinsic LLRs: the systematic channel term and the prior
/// are excluded from the output by construction (the time-t output never
/// reads sys[t]+prior[t]). LLR convention: positive means bit 0.
std::vector<double> bcjr_tail_biting(const Trellis& trellis, const std::vector<double>& sys_llr,
                                     const std::vector<double>& par_llr,
                                     const std::vector<double>& prior, int wraps,
                                     BcjrMode mode = BcjrMode::log_map);

struct IterationStat {
    int changed_bits = 0;    // hard decisions flipped vs the previous iteration
    double min_abs_llr = 0;  // weakest a-posteriori magnitude
};

struct DecodeResult {
    std::vector<std::uint8_t> bits;
    std::vector<IterationStat> trace;
};

/// Iterative decoding: alternating BCJR over branch 1 (natural order) and
/// branch 2 (interleaved order), extrinsics exchanged through pi and its
/// inverse and clamped to +-50. Hard decision by a-posteriori sign after the
/// final iteration. Deterministic.
DecodeResult turbo_decode(const TurboCode& tc, const LlrFrame& frame, int iterations, int wraps = 2,
                          BcjrMode mode = BcjrMode::log_map);

} // namespace qcturbo
