#include "qcturbo/rsc.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

namespace qcturbo {

Ratio Ratio::of(long long n, long long d) {
    if (d == 0) throw ValidationError("Ratio: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    return Ratio{n, d};
}

int RscCode::memory() const {
    unsigned m = feedback | feedforward;
    return m ? std::bit_width(m) - 1 : 0;
}

int RscCode::num_states() const { return 1 << memory(); }

void RscCode::validate() const {
    const int nu = memory();
    if (feedback == 0 || feedforward == 0)
        throw ValidationError("RscCode: generators must be nonzero");
    if (nu < 1) throw ValidationError("RscCode: memory must be >= 1 (trivial generators)");
    if ((feedback & 1u) == 0)
        throw ValidationError("RscCode: feedback constant term must be set (delay-free)");
    if ((feedback >> nu & 1u) == 0)
        throw ValidationError("RscCode: feedback must be monic of degree nu=" + std::to_string(nu));
}

RscCode parse_rsc_generators(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos)
        throw ValidationError("generators: expected \"fb,ff\" octal pair, got \"" + text + "\"");
    auto parse_octal = [&](const std::string& s) -> unsigned {
        if (s.empty()) throw ValidationError("generators: empty octal number in \"" + text + "\"");
        unsigned v = 0;
        for (char c : s) {
            if (c < '0' || c > '7')
                throw ValidationError("generators: '" + std::string(1, c) + "' is not an octal digit");
            v = v * 8 + static_cast<unsigned>(c - '0');
        }
        return v;
    };
    RscCode code{parse_octal(text.substr(0, comma)), parse_octal(text.substr(comma + 1))};
    code.validate();
    return code;
}

namespace {

inline int parity_of(unsigned x) { return std::popcount(x) & 1; }

} // namespace

Trellis Trellis::build(const RscCode& code) {
    code.validate();
    const int nu = code.memory();
    const int states = 1 << nu;
    const unsigned mask = static_cast<unsigned>(states - 1);

    Trellis t;
    t.num_states = states;
    t.next.resize(2 * states);
    t.parity.resize(2 * states);
    for (int s = 0; s < states; ++s) {
        for (int u = 0; u < 2; ++u) {
            // register input d_t = u + sum_{k>=1} q_k d_{t-k}
            unsigned d = static_cast<unsigned>(u) ^ static_cast<unsigned>(parity_of((code.feedback >> 1) & static_cast<unsigned>(s)));
            unsigned ext = (static_cast<unsigned>(s) << 1) | d;  // d_t .. d_{t-nu}
            t.next[2 * s + u] = static_cast<std::uint8_t>(ext & mask);
            t.parity[2 * s + u] = static_cast<std::uint8_t>(parity_of(code.feedforward & ext));
        }
    }

    // trellis sanity: the invariants every recursive systematic realization obeys
    if (t.next_state(0, 0) != 0 || t.parity_bit(0, 0) != 0)
        throw ValidationError("Trellis: zero state is not a zero-output self-loop");
    for (int s = 0; s < states; ++s) {
        if (t.next_state(s, 0) == t.next_state(s, 1))
            throw ValidationError("Trellis: outgoing transitions collide at state " + std::to_string(s));
        if (s != 0 && t.next_state(s, 0) == 0)
            throw ValidationError("Trellis: zero state reached on input 0 from state " + std::to_string(s));
    }
    return t;
}

namespace {

// nu x nu GF(2) matrix stored column-major: col[j] = image of basis vector j.
struct Gf2Mat {
    int n = 0;
    std::vector<unsigned> col;

    static Gf2Mat identity(int n) {
        Gf2Mat m;
        m.n = n;
        m.col.resize(n);
        for (int j = 0; j < n; ++j) m.col[j] = 1u << j;
        return m;
    }

    unsigned apply(unsigned v) const {
        unsigned r = 0;
        for (int j = 0; j < n; ++j)
            if (v >> j & 1u) r ^= col[j];
        return r;
    }

    Gf2Mat mul(const Gf2Mat& rhs) const {
        Gf2Mat r;
        r.n = n;
        r.col.resize(n);
        for (int j = 0; j < n; ++j) r.col[j] = apply(rhs.col[j]);
        return r;
    }

    Gf2Mat pow(long long e) const {
        Gf2Mat base = *this;
        Gf2Mat r = identity(n);
        while (e > 0) {
            if (e & 1) r = r.mul(base);
            base = base.mul(base);
            e >>= 1;
        }
        return r;
    }

    bool is_identity() const {
        for (int j = 0; j < n; ++j)
            if (col[j] != (1u << j)) return false;
        return true;
    }
};

Gf2Mat state_update_matrix(const Trellis& t, int nu) {
    // the u=0 transition is the linear part of the affine state update
    Gf2Mat a;
    a.n = nu;
    a.col.resize(nu);
    for (int j = 0; j < nu; ++j) a.col[j] = static_cast<unsigned>(t.next_state(1 << j, 0));
    return a;
}

// Solve M x = b over GF(2); returns -1 if singular.
int solve_gf2(const Gf2Mat& m, unsigned b) {
    const int n = m.n;
    // rows of [M | b]
    std::vector<unsigned> rows(n);
    for (int i = 0; i < n; ++i) {
        unsigned row = 0;
        for (int j = 0; j < n; ++j)
            if (m.col[j] >> i & 1u) row |= 1u << j;
        if (b >> i & 1u) row |= 1u << n;
        rows[i] = row;
    }
    int rank = 0;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = rank; r < n; ++r)
            if (rows[r] >> c & 1u) {
                piv = r;
                break;
            }
        if (piv < 0) return -1;
        std::swap(rows[rank], rows[piv]);
        for (int r = 0; r < n; ++r)
            if (r != rank && (rows[r] >> c & 1u)) rows[r] ^= rows[rank];
        ++rank;
    }
    unsigned x = 0;
    for (int r = 0; r < n; ++r) {
        int c = std::countr_zero(rows[r] & ((1u << n) - 1));
        if (rows[r] >> n & 1u) x |= 1u << c;
    }
    return static_cast<int>(x);
}

} // namespace

int RscCode::feedback_period() const {
    validate();
    Trellis t = Trellis::build(*this);
    Gf2Mat a = state_update_matrix(t, memory());
    Gf2Mat acc = a;
    for (int e = 1; e <= (1 << (2 * memory())) + 1; ++e) {
        if (acc.is_identity()) return e;
        acc = acc.mul(a);
    }
    throw ValidationError("RscCode: feedback period not found (non-invertible update?)");
}

std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>
encode_zero_terminated(const RscCode& code, const std::vector<std::uint8_t>& bits) {
    Trellis t = Trellis::build(code);
    const int nu = code.memory();
    std::vector<std::uint8_t> par;
    par.reserve(bits.size() + static_cast<std::size_t>(nu));
    int s = 0;
    for (std::uint8_t u : bits) {
        par.push_back(static_cast<std::uint8_t>(t.parity_bit(s, u & 1)));
        s = t.next_state(s, u & 1);
    }
    // tail input = feedback sum, forcing the register input d to zero
    std::vector<std::uint8_t> tail(static_cast<std::size_t>(nu));
    for (int k = 0; k < nu; ++k) {
        int u = parity_of((code.feedback >> 1) & static_cast<unsigned>(s));
        tail[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(u);
        par.push_back(static_cast<std::uint8_t>(t.parity_bit(s, u)));
        s = t.next_state(s, u);
    }
    if (s != 0) throw NumericError("encode_zero_terminated: tail failed to flush the register");
    return {std::move(par), std::move(tail)};
}

int tail_biting_initial_state(const RscCode& code, const std::vector<std::uint8_t>& bits) {
    Trellis t = Trellis::build(code);
    const int nu = code.memory();
    const long long n = static_cast<long long>(bits.size());
    if (n < 1) throw ValidationError("tail_biting_initial_state: empty input");

    Gf2Mat a = state_update_matrix(t, nu);
    Gf2Mat m = a.pow(n);
    for (int j = 0; j < nu; ++j) m.col[j] ^= 1u << j;  // I + A^N

    // zero-state response: run the encoder from state 0
    int z = 0;
    for (std::uint8_t u : bits) z = t.next_state(z, u & 1);

    int s0 = solve_gf2(m, static_cast<unsigned>(z));
    if (s0 < 0)
        throw UnsupportedLengthError(
            "tail-biting unsolvable: I+A^N is singular at N=" + std::to_string(n) +
                " (feedback period " + std::to_string(code.feedback_period()) +
                " divides N); choose a length the period does not divide",
            static_cast<int>(n), code.feedback_period());
    return s0;
}

std::vector<std::uint8_t> encode_tail_biting(const RscCode& code,
                                             const std::vector<std::uint8_t>& bits) {
    const int s0 = tail_biting_initial_state(code, bits);
    Trellis t = Trellis::build(code);
    std::vector<std::uint8_t> par(bits.size());
    int s = s0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        par[i] = static_cast<std::uint8_t>(t.parity_bit(s, bits[i] & 1));
        s = t.next_state(s, bits[i] & 1);
    }
    if (s != s0) throw NumericError("encode_tail_biting: path failed to close");
    return par;
}

int ErrorEvent::endpoint_distance(int n) const {
    int fwd = ((end(n) - start) % n + n) % n;
    return std::min(fwd, n - fwd);
}

std::vector<ErrorEvent> error_events(const RscCode& code, const std::vector<std::uint8_t>& bits) {
    const int n = static_cast<int>(bits.size());
    const int s0 = tail_biting_initial_state(code, bits);
    Trellis t = Trellis::build(code);

    std::vector<std::uint8_t> par(bits.size());
    std::vector<char> off_zero(bits.size());  // transition t is not the zero self-loop
    int s = s0;
    bool any_off = false, all_off = true;
    for (int i = 0; i < n; ++i) {
        par[i] = static_cast<std::uint8_t>(t.parity_bit(s, bits[i] & 1));
        off_zero[i] = (s != 0 || (bits[i] & 1) != 0);
        any_off |= off_zero[i];
        all_off &= static_cast<bool>(off_zero[i]);
        s = t.next_state(s, bits[i] & 1);
    }

    std::vector<ErrorEvent> events;
    if (!any_off) return events;

    auto make_event = [&](int start, int length) {
        ErrorEvent e;
        e.start = start;
        e.length = length;
        for (int k = 0; k < length; ++k) {
            int i = (start + k) % n;
            e.input_weight += bits[i] & 1;
            e.output_weight += (bits[i] & 1) + par[i];
        }
        return e;
    };

    if (all_off) {
        // the path never rides the zero self-loop: one event around the circle,
        // anchored at the first support element
        int first = 0;
        while ((bits[first] & 1) == 0) ++first;  // nonzero: a closed off-zero path has support
        events.push_back(make_event(first, n));
        return events;
    }

    int anchor = 0;
    while (off_zero[anchor]) ++anchor;  // some zero self-loop position
    int run_start = -1, run_len = 0;
    for (int k = 1; k <= n; ++k) {
        int i = (anchor + k) % n;
        if (off_zero[i]) {
            if (run_len == 0) run_start = i;
            ++run_len;
        } else if (run_len > 0) {
            events.push_back(make_event(run_start, run_len));
            run_len = 0;
        }
    }
    if (run_len > 0) events.push_back(make_event(run_start, run_len));
    std::sort(events.begin(), events.end(),
              [](const ErrorEvent& a, const ErrorEvent& b) { return a.start < b.start; });
    return events;
}

namespace {

// Event graph for the lambda search: virtual source/sink around the nonzero
// states, arc weight = systematic + parity weight of the transition.
struct EventGraph {
    struct Arc {
        int from, to, w;
    };
    int nodes = 0;  // states + SRC + SNK
    int src = 0, snk = 0;
    std::vector<Arc> arcs;

    static EventGraph build(const Trellis& t) {
        EventGraph g;
        g.nodes = t.num_states + 2;
        g.src = t.num_states;
        g.snk = t.num_states + 1;
        g.arcs.push_back({g.src, t.next_state(0, 1), 1 + t.parity_bit(0, 1)});
        for (int s = 1; s < t.num_states; ++s) {
            for (int u = 0; u < 2; ++u) {
                int to = t.next_state(s, u);
                int w = u + t.parity_bit(s, u);
                if (to == 0)
                    g.arcs.push_back({s, g.snk, w});
                else
                    g.arcs.push_back({s, to, w});
            }
        }
        // keep only arcs between nodes reachable from SRC and co-reachable to SNK
        std::vector<char> fwd(g.nodes, 0), bwd(g.nodes, 0);
        auto flood = [&](std::vector<char>& seen, int start, bool forward) {
            seen[start] = 1;
            bool grew = true;
            while (grew) {
                grew = false;
                for (const Arc& a : g.arcs) {
                    int u = forward ? a.from : a.to;
                    int v = forward ? a.to : a.from;
                    if (seen[u] && !seen[v]) {
                        seen[v] = 1;
                        grew = true;
                    }
                }
            }
        };
        flood(fwd, g.src, true);
        flood(bwd, g.snk, false);
        std::erase_if(g.arcs, [&](const Arc& a) {
            return !(fwd[a.from] && bwd[a.from] && fwd[a.to] && bwd[a.to]);
        });
        return g;
    }
};

struct ProbeResult {
    bool below_exists = false;  // some event has ratio < q
    bool attained = false;      // ratio q itself is the infimum witness
};

// Integer Bellman-Ford probe at q = p/d: arc weights w*d - p. An event with
// ratio < q exists iff a negative cycle exists or dist(snk) + p < 0;
// attainment means dist(snk) + p == 0 or a zero-weight tight cycle.
ProbeResult probe_ratio(const EventGraph& g, long long p, long long d) {
    const long long inf = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> dist(g.nodes, inf);
    dist[g.src] = 0;
    bool changed = false;
    for (int it = 0; it < g.nodes; ++it) {
        changed = false;
        for (const auto& a : g.arcs) {
            if (dist[a.from] >= inf) continue;
            long long cand = dist[a.from] + a.w * d - p;
            if (cand < dist[a.to]) {
                dist[a.to] = cand;
                changed = true;
            }
        }
        if (!changed) break;
    }
    ProbeResult r;
    if (changed) {  // still relaxing after |V| passes: negative cycle
        r.below_exists = true;
        return r;
    }
    if (dist[g.snk] < inf && dist[g.snk] + p < 0) {
        r.below_exists = true;
        return r;
    }
    if (dist[g.snk] < inf && dist[g.snk] + p == 0) r.attained = true;

    // zero-mean cycle: cycle of tight arcs (excluding the virtual nodes)
    if (!r.attained) {
        std::vector<std::vector<int>> adj(g.nodes);
        for (const auto& a : g.arcs) {
            if (a.from == g.src || a.to == g.snk) continue;
            if (dist[a.from] < inf && dist[a.from] + a.w * d - p == dist[a.to])
                adj[a.from].push_back(a.to);
        }
        std::vector<int> color(g.nodes, 0);
        auto dfs = [&](auto&& self, int v) -> bool {
            color[v] = 1;
            for (int w : adj[v]) {
                if (color[w] == 1) return true;
                if (color[w] == 0 && self(self, w)) return true;
            }
            color[v] = 2;
            return false;
        };
        for (int v = 0; v < g.nodes && !r.attained; ++v)
            if (color[v] == 0 && dfs(dfs, v)) r.attained = true;
    }
    return r;
}

} // namespace

Ratio lambda_parameter(const RscCode& code, int search_horizon) {
    code.validate();
    Trellis t = Trellis::build(code);
    if (search_horizon < 4 * t.num_states)
        throw ValidationError("lambda_parameter: search_horizon must be >= 4*num_states = " +
                              std::to_string(4 * t.num_states));
    EventGraph g = EventGraph::build(t);
    if (g.arcs.empty()) throw ValidationError("lambda_parameter: no events exist");

    // Stern-Brocot walk on (0/1, 5/1); every mediant is probed exactly, so the
    // search lands on the infimum, a small rational, in a few dozen steps.
    long long lo_n = 0, lo_d = 1, hi_n = 5, hi_d = 1;
    const long long max_steps = 16LL * search_horizon;
    for (long long step = 0; step < max_steps; ++step) {
        long long mn = lo_n + hi_n, md = lo_d + hi_d;
        ProbeResult pr = probe_ratio(g, mn, md);
        if (!pr.below_exists && pr.attained) return Ratio::of(mn, md);
        if (pr.below_exists) {
            hi_n = mn;
            hi_d = md;
        } else {
            lo_n = mn;
            lo_d = md;
        }
    }
    throw ResourceError("lambda_parameter: not certified within the horizon; rerun with a larger "
                        "search_horizon");
}

} // namespace qcturbo
