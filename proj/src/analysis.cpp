#include "qcturbo/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "qcturbo/rng.hpp"

namespace qcturbo {

int circular_distance(int x, int y, int n) {
    if (n < 1) throw ValidationError("circular_distance: N must be positive");
    if (x < 0 || x >= n || y < 0 || y >= n)
        throw ValidationError("circular_distance: index outside {0..N-1}");
    int fwd = ((y - x) % n + n) % n;
    return std::min(fwd, n - fwd);
}

int minimal_residue(int v, int n) {
    int m = (v % n + n) % n;
    return m <= n - m ? m : m - n;
}

bool Chain::elements_distinct() const {
    std::set<int> seen(x.begin(), x.end());
    return seen.size() == x.size();
}

namespace {

void validate_displacements(const std::vector<int>& r, int n) {
    if (r.empty() || r.size() % 2 == 0)
        throw ValidationError("chain: r must have odd length, got " + std::to_string(r.size()));
    for (int v : r)
        if ((v % n + n) % n == 0)
            throw ValidationError("chain: r entries must be nonzero mod N");
}

} // namespace

Chain build_chain(const Permutation& perm, const std::vector<int>& r, int x0) {
    const int n = perm.size();
    validate_displacements(r, n);
    if (x0 < 0 || x0 >= n) throw ValidationError("chain: x0 outside {0..N-1}");

    const int l = static_cast<int>(r.size());
    Chain c;
    c.r = r;
    c.x0 = x0;
    c.x.resize(l + 1);
    c.y.resize(l + 1);
    c.x[0] = x0;
    c.y[0] = perm(x0);
    for (int k = 1; k <= l; ++k) {
        int step = ((r[k - 1] % n) + n) % n;
        if (k % 2 == 1) {  // odd index: move on the interleaved side
            c.y[k] = (c.y[k - 1] + step) % n;
            c.x[k] = perm.inv(c.y[k]);
        } else {  // even index: move on the natural side
            c.x[k] = (c.x[k - 1] + step) % n;
            c.y[k] = perm(c.x[k]);
        }
        c.norm += std::abs(minimal_residue(r[k - 1], n));
    }
    c.pi_weight = c.norm + circular_distance(c.x[0], c.x[l], n);
    return c;
}

bool m_cycles_at(const Permutation& perm, const std::vector<int>& r, int x0, int M) {
    return build_chain(perm, r, x0).pi_weight <= M;
}

namespace {

// Enumerates signed odd-length sequences with norm < M in a fixed order:
// norm ascending, length ascending, part magnitudes lexicographic, sign
// pattern lexicographic (+ before -). Visitor returns false to stop.
template <typename Visitor>
bool for_each_displacement(int M, Visitor&& visit) {
    std::vector<int> parts, signed_r;
    for (int m = 1; m < M; ++m) {
        for (int l = 1; l <= m; l += 2) {
            if (l > 29)
                throw ResourceError("displacement enumeration: sequence length " +
                                    std::to_string(l) + " is beyond any feasible scan");
            parts.assign(static_cast<std::size_t>(l), 0);
            signed_r.assign(static_cast<std::size_t>(l), 0);
            // compositions of m into l positive parts, lexicographic
            auto rec = [&](auto&& self, int idx, int remaining) -> bool {
                if (idx == l - 1) {
                    parts[static_cast<std::size_t>(idx)] = remaining;
                    for (unsigned mask = 0; mask < (1u << l); ++mask) {
                        for (int k = 0; k < l; ++k) {
                            bool neg = (mask >> (l - 1 - k)) & 1u;
                            signed_r[static_cast<std::size_t>(k)] =
                                neg ? -parts[static_cast<std::size_t>(k)]
                                    : parts[static_cast<std::size_t>(k)];
                        }
                        if (!visit(signed_r)) return false;
                    }
                    return true;
                }
                for (int p = 1; p <= remaining - (l - 1 - idx); ++p) {
                    parts[static_cast<std::size_t>(idx)] = p;
                    if (!self(self, idx + 1, remaining - p)) return false;
                }
                return true;
            };
            if (!rec(rec, 0, m)) return false;
        }
    }
    return true;
}

// pi-weight of the chain defined by (r, x0), without materializing it.
int chain_pi_weight(const Permutation& perm, const std::vector<int>& r, int x0, int norm) {
    const int n = perm.size();
    int x = x0;
    int y = perm(x0);
    const int l = static_cast<int>(r.size());
    for (int k = 1; k <= l; ++k) {
        int step = ((r[k - 1] % n) + n) % n;
        if (k % 2 == 1) {
            y = (y + step) % n;
            x = perm.inv(y);
        } else {
            x = (x + step) % n;
            y = perm(x);
        }
    }
    return norm + circular_distance(x0, x, n);
}

constexpr int kMaxExactM = 12;

void check_m_cap(int n, int M) {
    if (M < 1) throw ValidationError("m-cycling: M must be >= 1");
    if (M > kMaxExactM)
        throw ResourceError("m-cycling: exact enumeration has up to N*3^M/2 = " +
                            std::to_string(m_cycling_candidate_ceiling(n, M)) +
                            " candidates; M <= " + std::to_string(kMaxExactM) +
                            " at desk scale");
}

} // namespace

std::vector<std::vector<int>> enumerate_displacements(int M) {
    if (M < 1) throw ValidationError("enumerate_displacements: M must be >= 1");
    if (M > kMaxExactM + 1)
        throw ResourceError("enumerate_displacements: listing grows as 3^M; M too large");
    std::vector<std::vector<int>> out;
    for_each_displacement(M, [&](const std::vector<int>& r) {
        out.push_back(r);
        return true;
    });
    return out;
}

long long m_cycling_candidate_count(int n, int M) {
    if (M < 1 || M > 20) throw ValidationError("candidate count: need 1 <= M <= 20");
    // number of positive sequences of odd length l and norm <= M-1 is C(M-1, l)
    long long total = 0;
    for (int l = 1; l < M; l += 2) {
        long long binom = 1;
        for (int i = 0; i < l; ++i) binom = binom * (M - 1 - i) / (i + 1);
        total += (1LL << l) * binom;
    }
    return total * n;
}

long long m_cycling_candidate_ceiling(int n, int M) {
    long long p = 1;
    for (int i = 0; i < M && p < (1LL << 50); ++i) p *= 3;
    if (p > std::numeric_limits<long long>::max() / std::max(n, 1)) return std::numeric_limits<long long>::max();
    return n * p / 2;
}

namespace {

MCyclingResult count_pairs_impl(const Permutation& perm, int M, bool collect_pairs,
                                bool parallel) {
    const int n = perm.size();
    check_m_cap(n, M);
    // signed magnitudes 1..M-1 must be distinct residue classes mod N,
    // otherwise the enumeration would alias and over-count
    if (2 * (M - 1) >= n)
        throw ValidationError("count_m_cycling_pairs: requires M-1 < N/2, got M=" +
                              std::to_string(M) + " N=" + std::to_string(n));

    std::vector<std::vector<int>> rs = enumerate_displacements(M);
    std::vector<int> norms(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
        int norm = 0;
        for (int v : rs[i]) norm += std::abs(v);
        norms[i] = norm;
    }

    std::vector<long long> z_per_x0(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> hits;  // per x0, indices into rs
    if (collect_pairs) hits.resize(static_cast<std::size_t>(n));

    auto scan_x0 = [&](int x0) {
        long long z = 0;
        for (std::size_t i = 0; i < rs.size(); ++i) {
            if (chain_pi_weight(perm, rs[i], x0, norms[i]) <= M) {
                ++z;
                if (collect_pairs) hits[static_cast<std::size_t>(x0)].push_back(static_cast<int>(i));
            }
        }
        z_per_x0[static_cast<std::size_t>(x0)] = z;
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (int x0 = 0; x0 < n; ++x0) scan_x0(x0);
    } else {
        for (int x0 = 0; x0 < n; ++x0) scan_x0(x0);
    }

    MCyclingResult res;
    for (int x0 = 0; x0 < n; ++x0) {
        res.z += z_per_x0[static_cast<std::size_t>(x0)];
        if (collect_pairs)
            for (int i : hits[static_cast<std::size_t>(x0)])
                res.pairs.push_back({rs[static_cast<std::size_t>(i)], x0});
    }
    return res;
}

} // namespace

MCyclingResult count_m_cycling_pairs(const Permutation& perm, int M, bool collect_pairs) {
    return count_pairs_impl(perm, M, collect_pairs, true);
}

MCyclingResult count_m_cycling_pairs_serial(const Permutation& perm, int M, bool collect_pairs) {
    return count_pairs_impl(perm, M, collect_pairs, false);
}

bool exists_m_cycling_pair(const Permutation& perm, int M, long long candidate_budget) {
    if (M < 1) throw ValidationError("m-cycling: M must be >= 1");
    const int n = perm.size();
    long long tried = 0;
    bool found = false;
    for_each_displacement(M, [&](const std::vector<int>& r) {
        int norm = 0;
        for (int v : r) norm += std::abs(minimal_residue(v, n));
        if (norm >= M) return true;
        for (int x0 = 0; x0 < n; ++x0) {
            if (++tried > candidate_budget)
                throw ResourceError("exists_m_cycling_pair: candidate budget exhausted");
            if (chain_pi_weight(perm, r, x0, norm) <= M) {
                found = true;
                return false;
            }
        }
        return true;
    });
    return found;
}

ZStatistics z_statistics(int n1, int n2, int M, int trials, std::uint64_t seed) {
    if (trials < 1) throw ValidationError("z_statistics: trials must be >= 1");
    if (M >= n2)
        throw ValidationError("z_statistics: requires M < n2 (expectation ceiling hypothesis), "
                              "got M=" + std::to_string(M) + " n2=" + std::to_string(n2));
    check_m_cap(n1 * n2, M);

    ZStatistics st;
    st.trials = trials;
    st.samples.assign(static_cast<std::size_t>(trials), 0);

#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < trials; ++i) {
        QcSpec spec = sample_qc(n1, n2, derive_stream(seed, static_cast<std::uint64_t>(i)));
        Permutation perm = build_qc_permutation(spec);
        st.samples[static_cast<std::size_t>(i)] =
            count_m_cycling_pairs_serial(perm, M, false).z;
    }

    long double sum = 0;
    for (long long z : st.samples) {
        sum += static_cast<long double>(z);
        if (z % n1 != 0) ++st.divisibility_violations;
    }
    st.mean_z = static_cast<double>(sum / trials);
    st.expectation_ceiling = M * std::pow(3.0, M) / (1.0 - 1.0 / n2);
    st.mean_within_ceiling = st.mean_z <= st.expectation_ceiling;
    return st;
}

int trellis_weight(const RscCode& code, const std::vector<std::uint8_t>& bits) {
    int w = 0;
    for (const ErrorEvent& e : error_events(code, bits))
        w += e.endpoint_distance(static_cast<int>(bits.size()));
    return w;
}

std::string DistanceReport::serialize() const {
    std::ostringstream os;
    os << "method=" << (method == DistanceMethod::exhaustive ? "exhaustive" : "low_weight_search")
       << " bound_type=" << (bound_type == BoundType::exact ? "exact" : "upper_bound")
       << " value=" << value << " witness=";
    if (witness.empty())
        os << '-';
    else
        for (std::size_t i = 0; i < witness.size(); ++i) os << (i ? "," : "") << witness[i];
    os << " max_input_weight=" << max_input_weight;
    return os.str();
}

namespace {

// Tail-biting parity responses of single-bit impulses, packed per position.
// Branch 2's response for an impulse at p is row[pi^-1(p)] of the same
// table, since (s o pi) = impulse at pi^{-1}(p).
struct ImpulseTable {
    int n = 0;
    int words = 0;
    std::vector<std::uint64_t> rows;   // [p * words ..]
    std::vector<std::uint64_t> mask1;  // parity-1 positions kept by puncturing
    std::vector<std::uint64_t> mask2;

    static ImpulseTable build(const TurboCode& tc) {
        ImpulseTable t;
        t.n = tc.block_length();
        t.words = (t.n + 63) / 64;
        t.rows.assign(static_cast<std::size_t>(t.n) * t.words, 0);
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(t.n), 0);
        for (int p = 0; p < t.n; ++p) {
            bits[static_cast<std::size_t>(p)] = 1;
            std::vector<std::uint8_t> par = encode_tail_biting(tc.code, bits);
            bits[static_cast<std::size_t>(p)] = 0;
            std::uint64_t* row = t.rows.data() + static_cast<std::size_t>(p) * t.words;
            for (int i = 0; i < t.n; ++i)
                if (par[static_cast<std::size_t>(i)]) row[i / 64] |= 1ULL << (i % 64);
        }
        t.mask1.assign(static_cast<std::size_t>(t.words), 0);
        t.mask2.assign(static_cast<std::size_t>(t.words), 0);
        for (int i = 0; i < t.n; ++i) {
            bool keep1 = tc.puncture == PuncturePattern::none || i % 2 == 0;
            bool keep2 = tc.puncture == PuncturePattern::none || i % 2 == 1;
            if (keep1) t.mask1[static_cast<std::size_t>(i / 64)] |= 1ULL << (i % 64);
            if (keep2) t.mask2[static_cast<std::size_t>(i / 64)] |= 1ULL << (i % 64);
        }
        return t;
    }
};

// XOR accumulators for one candidate support; weight of the punctured codeword.
struct SupportScratch {
    std::vector<std::uint64_t> acc1, acc2;

    explicit SupportScratch(int words) : acc1(words, 0), acc2(words, 0) {}

    void toggle(const ImpulseTable& t, const Permutation& perm, int p) {
        const std::uint64_t* r1 = t.rows.data() + static_cast<std::size_t>(p) * t.words;
        const std::uint64_t* r2 = t.rows.data() + static_cast<std::size_t>(perm.inv(p)) * t.words;
        for (int w = 0; w < t.words; ++w) {
            acc1[static_cast<std::size_t>(w)] ^= r1[w];
            acc2[static_cast<std::size_t>(w)] ^= r2[w];
        }
    }

    int parity_weight(const ImpulseTable& t) const {
        int w = 0;
        for (int i = 0; i < t.words; ++i)
            w += std::popcount(acc1[static_cast<std::size_t>(i)] & t.mask1[static_cast<std::size_t>(i)]) +
                 std::popcount(acc2[static_cast<std::size_t>(i)] & t.mask2[static_cast<std::size_t>(i)]);
        return w;
    }
};

struct BestWitness {
    int value = std::numeric_limits<int>::max();
    std::vector<int> support;

    void offer(int v, const std::vector<int>& s) {
        if (v < value || (v == value && s < support)) {
            value = v;
            support = s;
        }
    }
    void merge(const BestWitness& o) {
        if (o.value < value || (o.value == value && !o.support.empty() &&
                                (support.empty() || o.support < support)))
            offer(o.value, o.support);
    }
};

// All supports of size <= max_k whose smallest element is p0; incremental XOR
// through the recursion.
void scan_from_leading(const TurboCode& tc, const ImpulseTable& table, int p0, int max_k,
                       BestWitness& best) {
    const int n = table.n;
    SupportScratch scratch(table.words);
    std::vector<int> support;
    support.reserve(static_cast<std::size_t>(max_k));

    auto rec = [&](auto&& self, int next_min) -> void {
        int k = static_cast<int>(support.size());
        if (k >= 1) best.offer(k + scratch.parity_weight(table), support);
        if (k == max_k) return;
        for (int p = next_min; p < n; ++p) {
            support.push_back(p);
            scratch.toggle(table, tc.perm, p);
            self(self, p + 1);
            scratch.toggle(table, tc.perm, p);
            support.pop_back();
        }
    };
    support.push_back(p0);
    scratch.toggle(table, tc.perm, p0);
    rec(rec, p0 + 1);
}

DistanceReport low_weight_impl(const TurboCode& tc, int max_input_weight, bool parallel) {
    if (max_input_weight < 2)
        throw ValidationError("min_distance_low_weight: max_input_weight must be >= 2");
    const int n = tc.block_length();
    const int max_k = std::min(max_input_weight, n);

    ImpulseTable table = ImpulseTable::build(tc);
    std::optional<int> qc_period = detect_qc_period(tc.perm);
    const int lead_limit = qc_period ? *qc_period : n;

    std::vector<BestWitness> per_lead(static_cast<std::size_t>(lead_limit));
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int p0 = 0; p0 < lead_limit; ++p0)
            scan_from_leading(tc, table, p0, max_k, per_lead[static_cast<std::size_t>(p0)]);
    } else {
        for (int p0 = 0; p0 < lead_limit; ++p0)
            scan_from_leading(tc, table, p0, max_k, per_lead[static_cast<std::size_t>(p0)]);
    }

    BestWitness best;
    for (const BestWitness& b : per_lead) best.merge(b);

    DistanceReport rep;
    rep.method = DistanceMethod::low_weight_search;
    rep.bound_type = BoundType::upper_bound;
    rep.value = best.value;
    rep.witness = best.support;
    rep.max_input_weight = max_input_weight;
    return rep;
}

} // namespace

DistanceReport min_distance_low_weight(const TurboCode& tc, int max_input_weight) {
    return low_weight_impl(tc, max_input_weight, true);
}

DistanceReport min_distance_low_weight_serial(const TurboCode& tc, int max_input_weight) {
    return low_weight_impl(tc, max_input_weight, false);
}

DistanceReport min_distance_exhaustive(const TurboCode& tc) {
    const int n = tc.block_length();
    if (n > 20)
        throw ResourceError("min_distance_exhaustive: 2^N enumeration, N <= 20 required, got N=" +
                            std::to_string(n));

    ImpulseTable table = ImpulseTable::build(tc);
    SupportScratch scratch(table.words);
    BestWitness best;
    std::vector<int> support;
    std::uint32_t prev = 0;
    for (std::uint32_t s = 1; s < (1u << n); ++s) {
        std::uint32_t delta = s ^ prev;  // Gray-style incremental update
        while (delta) {
            int p = std::countr_zero(delta);
            delta &= delta - 1;
            scratch.toggle(table, tc.perm, p);
        }
        prev = s;
        support.clear();
        for (std::uint32_t b = s; b; b &= b - 1) support.push_back(std::countr_zero(b));
        best.offer(static_cast<int>(support.size()) + scratch.parity_weight(table), support);
    }

    DistanceReport rep;
    rep.method = DistanceMethod::exhaustive;
    rep.bound_type = BoundType::exact;
    rep.value = best.value;
    rep.witness = best.support;
    rep.max_input_weight = n;
    return rep;
}

namespace {

struct IntervalGraph {
    // vertices: [0, ka) are events of s^pi (A side), [ka, ka+kb) of s (B side)
    int ka = 0, kb = 0;
    struct Edge {
        int a, b;     // vertex ids
        int label_x;  // support element of s^pi defining the edge
    };
    std::vector<Edge> edges;
    std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, edge id)
};

std::vector<int> event_membership(const std::vector<ErrorEvent>& events, int n) {
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < events.size(); ++i)
        for (int k = 0; k < events[i].length; ++k)
            owner[static_cast<std::size_t>((events[i].start + k) % n)] = static_cast<int>(i);
    return owner;
}

} // namespace

Chain witness_chain_from_codeword(const TurboCode& tc, const std::vector<std::uint8_t>& bits,
                                  const Ratio& lambda) {
    const int n = tc.block_length();
    if (static_cast<int>(bits.size()) != n)
        throw ValidationError("witness_chain_from_codeword: length mismatch");
    int input_weight = 0;
    for (std::uint8_t b : bits) input_weight += b & 1;
    if (input_weight == 0) throw ValidationError("witness_chain_from_codeword: input must be nonzero");
    if (input_weight == 1)
        throw ValidationError("witness_chain_from_codeword: the interval-graph cycle needs "
                              "input weight >= 2 (a weight-1 input yields a single edge)");

    std::vector<std::uint8_t> permuted(bits.size());
    for (int t = 0; t < n; ++t) permuted[t] = bits[tc.perm(t)];

    // weight bound uses the unpunctured codeword; the event machinery
    // predates puncturing
    TurboCodeword cw;
    cw.systematic = bits;
    cw.parity1 = encode_tail_biting(tc.code, bits);
    cw.parity2 = encode_tail_biting(tc.code, permuted);
    const int w = cw.weight();

    std::vector<ErrorEvent> ev_a = error_events(tc.code, permuted);
    std::vector<ErrorEvent> ev_b = error_events(tc.code, bits);
    std::vector<int> owner_a = event_membership(ev_a, n);
    std::vector<int> owner_b = event_membership(ev_b, n);

    IntervalGraph g;
    g.ka = static_cast<int>(ev_a.size());
    g.kb = static_cast<int>(ev_b.size());
    g.adj.resize(static_cast<std::size_t>(g.ka + g.kb));
    for (int x = 0; x < n; ++x) {
        if (!(permuted[static_cast<std::size_t>(x)] & 1)) continue;
        int a = owner_a[static_cast<std::size_t>(x)];
        int b = owner_b[static_cast<std::size_t>(tc.perm(x))];
        if (a < 0 || b < 0)
            throw std::logic_error("witness_chain_from_codeword: support element outside every event");
        int id = static_cast<int>(g.edges.size());
        g.edges.push_back({a, g.ka + b, x});
        g.adj[static_cast<std::size_t>(a)].emplace_back(g.ka + b, id);
        g.adj[static_cast<std::size_t>(g.ka + b)].emplace_back(a, id);
    }

    // BFS from the first A interval; the shortest cycle closed by a non-tree
    // edge is elementary (two tree paths meeting at their lowest common
    // ancestor plus the closing edge)
    const int V = g.ka + g.kb;
    std::vector<int> depth(static_cast<std::size_t>(V), -1);
    std::vector<int> parent(static_cast<std::size_t>(V), -1);
    std::vector<int> parent_edge(static_cast<std::size_t>(V), -1);
    std::vector<int> order;
    order.push_back(0);
    depth[0] = 0;
    for (std::size_t head = 0; head < order.size(); ++head) {
        int v = order[head];
        for (auto [to, id] : g.adj[static_cast<std::size_t>(v)]) {
            if (depth[static_cast<std::size_t>(to)] < 0) {
                depth[static_cast<std::size_t>(to)] = depth[static_cast<std::size_t>(v)] + 1;
                parent[static_cast<std::size_t>(to)] = v;
                parent_edge[static_cast<std::size_t>(to)] = id;
                order.push_back(to);
            }
        }
    }

    int best_len = std::numeric_limits<int>::max();
    int best_edge = -1;
    for (int id = 0; id < static_cast<int>(g.edges.size()); ++id) {
        const auto& e = g.edges[static_cast<std::size_t>(id)];
        int u = e.a, v = e.b;
        if (depth[static_cast<std::size_t>(u)] < 0 || depth[static_cast<std::size_t>(v)] < 0)
            continue;
        if (parent_edge[static_cast<std::size_t>(u)] == id ||
            parent_edge[static_cast<std::size_t>(v)] == id)
            continue;  // tree edge
        // lowest common ancestor by walking up
        int a = u, b = v;
        while (a != b) {
            if (depth[static_cast<std::size_t>(a)] >= depth[static_cast<std::size_t>(b)])
                a = parent[static_cast<std::size_t>(a)];
            else
                b = parent[static_cast<std::size_t>(b)];
        }
        int len = depth[static_cast<std::size_t>(u)] + depth[static_cast<std::size_t>(v)] -
                  2 * depth[static_cast<std::size_t>(a)] + 1;
        if (len < best_len) {
            best_len = len;
            best_edge = id;
        }
    }
    if (best_edge < 0)
        throw std::logic_error("witness_chain_from_codeword: no cycle found in a min-degree-2 graph");

    // reconstruct the cycle's vertex and edge rings
    const auto& e = g.edges[static_cast<std::size_t>(best_edge)];
    int lca = e.a, b = e.b;
    while (lca != b) {
        if (depth[static_cast<std::size_t>(lca)] >= depth[static_cast<std::size_t>(b)])
            lca = parent[static_cast<std::size_t>(lca)];
        else
            b = parent[static_cast<std::size_t>(b)];
    }
    std::vector<int> verts, edge_ids;
    for (int v = e.a; v != lca; v = parent[static_cast<std::size_t>(v)]) {
        verts.push_back(v);
        edge_ids.push_back(parent_edge[static_cast<std::size_t>(v)]);
    }
    verts.push_back(lca);
    std::vector<int> right_v, right_e;
    for (int v = e.b; v != lca; v = parent[static_cast<std::size_t>(v)]) {
        right_v.push_back(v);
        right_e.push_back(parent_edge[static_cast<std::size_t>(v)]);
    }
    for (std::size_t i = right_e.size(); i > 0; --i) edge_ids.push_back(right_e[i - 1]);
    for (std::size_t i = right_v.size(); i > 0; --i) verts.push_back(right_v[i - 1]);
    edge_ids.push_back(best_edge);  // closes v_last -> v_first

    // rotate so the ring starts at an A-side vertex
    const int L = static_cast<int>(verts.size());
    int rot = 0;
    while (verts[static_cast<std::size_t>(rot)] >= g.ka) ++rot;
    std::rotate(verts.begin(), verts.begin() + rot, verts.end());
    std::rotate(edge_ids.begin(), edge_ids.begin() + rot, edge_ids.end());

    std::vector<int> xs(static_cast<std::size_t>(L));
    for (int k = 0; k < L; ++k)
        xs[static_cast<std::size_t>(k)] = g.edges[static_cast<std::size_t>(edge_ids[static_cast<std::size_t>(k)])].label_x;

    // displacements from consecutive elements: odd steps on the interleaved
    // side, even steps on the natural side
    std::vector<int> r(static_cast<std::size_t>(L - 1));
    for (int k = 1; k < L; ++k) {
        int d = (k % 2 == 1)
                    ? tc.perm(xs[static_cast<std::size_t>(k)]) - tc.perm(xs[static_cast<std::size_t>(k - 1)])
                    : xs[static_cast<std::size_t>(k)] - xs[static_cast<std::size_t>(k - 1)];
        r[static_cast<std::size_t>(k - 1)] = minimal_residue(d, n);
    }

    Chain chain = build_chain(tc.perm, r, xs[0]);
    if (chain.x != xs) throw std::logic_error("witness_chain_from_codeword: chain does not retrace the cycle");
    if (!chain.elements_distinct())
        throw std::logic_error("witness_chain_from_codeword: cycle produced repeated elements");
    // pi_weight <= 2 w / lambda, compared exactly in integers
    if (static_cast<long long>(chain.pi_weight) * lambda.num > 2LL * w * lambda.den)
        throw std::logic_error("witness_chain_from_codeword: constructed chain exceeds the weight bound");
    return chain;
}

} // namespace qcturbo
