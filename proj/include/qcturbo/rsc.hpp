#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcturbo/errors.hpp"

namespace qcturbo {

/// Exact rational, normalized with positive denominator.
struct Ratio {
    long long num = 0;
    long long den = 1;

    static Ratio of(long long n, long long d);
    bool operator==(const Ratio&) const = default;
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

/// a/b < c/d on normalized positive-denominator ratios.
inline bool ratio_less(const Ratio& a, const Ratio& b) {
    return a.num * b.den < b.num * a.den;
}

/// Rate-1/2 recursive systematic convolutional code given by a generator
/// pair. Generators are stored as plain bitmasks where bit k is the
/// coefficient of D^k, so the octal pair (13,15) is {013, 015} with
/// feedback 1+D+D^3 and feedforward 1+D^2+D^3.
struct RscCode {
    unsigned feedback = 0;
    unsigned feedforward = 0;

    int memory() const;      // nu
    int num_states() const;  // 2^nu

    /// Monic delay-free feedback (bits 0 and nu set), nu >= 1, nonzero
    /// feedforward of degree <= nu. Throws ValidationError otherwise.
    void validate() const;

    /// Order of the state-update matrix: the smallest e >= 1 with A^e = I.
    /// Tail-biting is solvable at length N iff I+A^N is invertible.
    int feedback_period() const;
};

/// Parse "13,15" (octal digits, as printed) into an RscCode.
RscCode parse_rsc_generators(const std::string& text);

/// State machine of an RscCode in controller canonical form. The state is
/// the feedback register, bit 0 holding the most recent register bit.
struct Trellis {
    int num_states = 0;
    std::vector<std::uint8_t> next;    // [state*2 + input] -> state
    std::vector<std::uint8_t> parity;  // [state*2 + input] -> parity bit

    int next_state(int s, int u) const { return next[2 * s + u]; }
    int parity_bit(int s, int u) const { return parity[2 * s + u]; }

    static Trellis build(const RscCode& code);
};

/// Zero-start encoding plus the nu feedback-derived tail bits that flush the
/// register back to zero. Returns (parity of length N+nu, tail of length nu).
std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>
encode_zero_terminated(const RscCode& code, const std::vector<std::uint8_t>& bits);

/// Starting state that makes the circular encoding close on itself; solves
/// s0 = A^N s0 + z over GF(2). Throws UnsupportedLengthError when I+A^N is
/// singular (the feedback period divides N).
int tail_biting_initial_state(const RscCode& code, const std::vector<std::uint8_t>& bits);

/// Circular encoding: parity of length N, initial state = final state.
std::vector<std::uint8_t> encode_tail_biting(const RscCode& code,
                                             const std::vector<std::uint8_t>& bits);

/// Maximal circular interval during which the tail-biting path is off the
/// zero-state self-loop. Stored as (start, length in transitions) to keep
/// the wrap at the seam unambiguous; end and the circular endpoint distance
/// are derived.
struct ErrorEvent {
    int start = 0;
    int length = 0;  // transitions covered, 1..N
    int input_weight = 0;
    int output_weight = 0;  // systematic + parity inside the interval

    int end(int n) const { return (start + length - 1) % n; }
    int endpoint_distance(int n) const;  // d(start, end) on the circle
};

/// Decomposition of the circular trellis path of `bits` into error events,
/// ordered by start index. All-zero input gives an empty list.
std::vector<ErrorEvent> error_events(const RscCode& code, const std::vector<std::uint8_t>& bits);

/// Exact minimum, over simple error events (zero-state departure to
/// zero-state return with no intermediate zero state), of output Hamming
/// weight divided by event length. Certified globally by parametric search
/// on the event graph: a candidate ratio q is tested with integer
/// Bellman-Ford on arc weights (weight - q), so both finite events and
/// arbitrarily long events (via negative/zero cycles) are covered.
Ratio lambda_parameter(const RscCode& code, int search_horizon = 64);

} // namespace qcturbo
