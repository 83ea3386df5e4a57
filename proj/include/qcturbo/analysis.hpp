#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcturbo/permutation.hpp"
#include "qcturbo/rsc.hpp"
#include "qcturbo/turbo.hpp"

namespace qcturbo {

/// Circular distance on {0..N-1}: min((y-x) mod N, (x-y) mod N).
int circular_distance(int x, int y, int n);

/// Signed representative of v mod N with the smallest absolute value
/// (ties at N/2 resolved to +N/2; only the magnitude matters downstream).
int minimal_residue(int v, int n);

/// Alternating chain x_0..x_l, y_i = pi(x_i), built from a displacement
/// sequence r (l odd, every r_i nonzero mod N):
///   y_{2i+1} = y_{2i} + r_{2i+1},   x_{2i} = x_{2i-1} + r_{2i}   (mod N).
/// pi_weight = sum |r_i| + d(x_0, x_l). Elements may repeat; distinctness
/// is a property of the chain, not a constructor requirement.
struct Chain {
    std::vector<int> r;
    int x0 = 0;
    std::vector<int> x;
    std::vector<int> y;
    int norm = 0;       // sum of |r_i|
    int pi_weight = 0;  // norm + d(x_0, x_l)

    bool elements_distinct() const;
};

Chain build_chain(const Permutation& perm, const std::vector<int>& r, int x0);

/// True iff the chain's pi-weight is at most M.
bool m_cycles_at(const Permutation& perm, const std::vector<int>& r, int x0, int M);

/// All displacement sequences with odd length and norm < M, ordered by norm,
/// then length, then magnitudes lexicographically, then sign pattern
/// (+ before -). The enumeration Z runs over, reproducible across runs.
std::vector<std::vector<int>> enumerate_displacements(int M);

/// Number of (r, x0) candidates scanned for a given N and M:
/// N * sum over odd l of 2^l * C(M-1, l). Bounded by N*3^M/2.
long long m_cycling_candidate_count(int n, int M);
long long m_cycling_candidate_ceiling(int n, int M);  // N*3^M/2

struct MCyclingPair {
    std::vector<int> r;
    int x0;
};

struct MCyclingResult {
    long long z = 0;
    std::vector<MCyclingPair> pairs;  // x0-major, then enumeration order
};

/// Exact Z: the number of (r, x0) pairs, all r_i nonzero and norm < M, that
/// M-cycle at x0. Enumeration is partitioned by x0 across OpenMP workers and
/// merged in x0 order. Desk-scale cap M <= 12 (the candidate set grows as
/// N*3^M/2); larger M raises ResourceError.
MCyclingResult count_m_cycling_pairs(const Permutation& perm, int M, bool collect_pairs = true);

/// Single-threaded reference implementation, kept for testing; produces the
/// identical result.
MCyclingResult count_m_cycling_pairs_serial(const Permutation& perm, int M,
                                            bool collect_pairs = true);

/// Does any (r, x0) pair M-cycle? Early-exit scan in ascending-norm order,
/// usable beyond the exact-count cap (for M > N/2 the first length-1
/// candidates already cycle). Gives up with ResourceError after
/// `candidate_budget` chains.
bool exists_m_cycling_pair(const Permutation& perm, int M,
                           long long candidate_budget = 50'000'000);

struct ZStatistics {
    int trials = 0;
    double mean_z = 0.0;
    int divisibility_violations = 0;  // samples with Z not a multiple of n1
    double expectation_ceiling = 0.0; // M * 3^M / (1 - 1/n2)
    bool mean_within_ceiling = false;
    std::vector<long long> samples;
};

/// Monte Carlo over freshly sampled (n1,n2) quasi-cyclic permutations.
/// Requires M < n2 (the expectation ceiling needs it) and the desk-scale
/// M <= 12 cap. Trials are distributed across OpenMP workers on
/// per-trial derived seeds; results are independent of the worker count.
ZStatistics z_statistics(int n1, int n2, int M, int trials, std::uint64_t seed);

/// Sum of event endpoint distances of the circular trellis path of `bits`.
int trellis_weight(const RscCode& code, const std::vector<std::uint8_t>& bits);

enum class DistanceMethod { exhaustive, low_weight_search };
enum class BoundType { exact, upper_bound };

struct DistanceReport {
    DistanceMethod method = DistanceMethod::exhaustive;
    BoundType bound_type = BoundType::exact;
    int value = 0;
    std::vector<int> witness;  // support of the minimizing information word
    int max_input_weight = 0;  // search parameter (N for exhaustive)

    /// One-line text record: method, bound type, value, witness support,
    /// search parameters.
    std::string serialize() const;
};

/// Exact minimum nonzero codeword weight by full 2^N enumeration; N <= 20
/// (ResourceError beyond). Weight is the transmitted-symbol weight under
/// tc's puncturing.
DistanceReport min_distance_exhaustive(const TurboCode& tc);

/// Upper bound: minimum codeword weight over information words of input
/// weight <= max_input_weight (>= 2). For quasi-cyclic interleavers the
/// smallest support position only ranges over {0..n2-1}; every shift orbit
/// has such a representative. Parallel over the leading position with a
/// deterministic merge; a serial reference is kept for testing.
DistanceReport min_distance_low_weight(const TurboCode& tc, int max_input_weight);
DistanceReport min_distance_low_weight_serial(const TurboCode& tc, int max_input_weight);

/// Constructive form of the small-chain guarantee: from the error events of
/// s and of its interleaved image, build the bipartite interval graph, find
/// the shortest elementary cycle reachable by BFS, and read off a chain of
/// distinct elements with pi_weight <= 2*weight/lambda. Weight here is the
/// unpunctured codeword weight (the bound predates puncturing).
Chain witness_chain_from_codeword(const TurboCode& tc, const std::vector<std::uint8_t>& bits,
                                  const Ratio& lambda);

} // namespace qcturbo
