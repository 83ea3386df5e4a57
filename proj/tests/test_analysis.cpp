#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "qcturbo/analysis.hpp"
#include "qcturbo/rng.hpp"
#include "test_support.hpp"

using namespace qcturbo;

namespace {

const QcSpec kExample5x5{5, 5, {3, 2, 0, 4, 1}, {0, 2, 1, 3, 4}};

Permutation example_perm() { return build_qc_permutation(kExample5x5); }

std::vector<std::uint8_t> random_bits(int n, std::uint64_t seed, int min_weight = 0) {
    Rng rng(seed);
    std::vector<std::uint8_t> v(static_cast<std::size_t>(n));
    for (;;) {
        int w = 0;
        for (auto& b : v) w += (b = static_cast<std::uint8_t>(rng.next_bit()));
        if (w >= min_weight) return v;
    }
}

// the full definition of the chain weight, summed straight from x and y
int pi_weight_by_definition(const Chain& c, int n) {
    const int l = static_cast<int>(c.x.size()) - 1;
    int w = circular_distance(c.x[0], c.x[static_cast<std::size_t>(l)], n);
    for (int i = 1; 2 * i < l; ++i)
        w += circular_distance(c.x[static_cast<std::size_t>(2 * i - 1)], c.x[static_cast<std::size_t>(2 * i)], n);
    for (int i = 0; 2 * i + 1 <= l; ++i)
        w += circular_distance(c.y[static_cast<std::size_t>(2 * i)], c.y[static_cast<std::size_t>(2 * i + 1)], n);
    return w;
}

} // namespace

TEST_CASE("circular distance") {
    CHECK(circular_distance(0, 21, 25) == 4);
    CHECK(circular_distance(7, 7, 25) == 0);
    CHECK(circular_distance(3, 10, 25) == 7);
    for (int x = 0; x < 25; ++x)
        for (int y = 0; y < 25; ++y) {
            CHECK(circular_distance(x, y, 25) == circular_distance(y, x, 25));
            CHECK(circular_distance(x, y, 25) <= 12);
        }
    CHECK_THROWS_AS(circular_distance(0, 25, 25), ValidationError);
}

TEST_CASE("minimal residue magnitude at the half point") {
    CHECK(std::abs(minimal_residue(5, 10)) == 5);
    CHECK(std::abs(minimal_residue(-5, 10)) == 5);
    CHECK(minimal_residue(7, 10) == -3);
    CHECK(minimal_residue(3, 10) == 3);
}

TEST_CASE("reference chain through the 5x5 example") {
    Chain c = build_chain(example_perm(), {1, 1, 1}, 0);
    CHECK(c.x == std::vector<int>{0, 13, 14, 21});
    CHECK(c.pi_weight == 7);
    CHECK(c.norm == 3);
    CHECK(pi_weight_by_definition(c, 25) == 7);
}

TEST_CASE("chain under the identity permutation") {
    Permutation id = Permutation::identity(25);
    Chain c = build_chain(id, {1, 1, 1}, 0);
    CHECK(c.x == std::vector<int>{0, 1, 2, 3});  // each step advances one slot
    CHECK(c.pi_weight == 3 + 3);
    CHECK(c.elements_distinct());

    // repeats are allowed by construction
    Chain rep = build_chain(id, {1, -1, 1}, 0);
    CHECK(rep.x == std::vector<int>{0, 1, 0, 1});
    CHECK_FALSE(rep.elements_distinct());
}

TEST_CASE("chain validation") {
    Permutation id = Permutation::identity(10);
    CHECK_THROWS_AS(build_chain(id, {1, 1}, 0), ValidationError);     // even length
    CHECK_THROWS_AS(build_chain(id, {1, 10, 1}, 0), ValidationError); // 10 = 0 mod 10
    CHECK_THROWS_AS(build_chain(id, {}, 0), ValidationError);
    CHECK_THROWS_AS(build_chain(id, {1}, 10), ValidationError);
}

TEST_CASE("pi-weight identity holds for random chains") {
    Permutation p = example_perm();
    Rng rng(15);
    for (int trial = 0; trial < 200; ++trial) {
        int l = 1 + 2 * static_cast<int>(rng.next_below(3));
        std::vector<int> r(static_cast<std::size_t>(l));
        for (auto& v : r) {
            int mag = 1 + static_cast<int>(rng.next_below(12));
            v = rng.next_bit() ? -mag : mag;
        }
        int x0 = static_cast<int>(rng.next_below(25));
        Chain c = build_chain(p, r, x0);
        CHECK(c.pi_weight == pi_weight_by_definition(c, 25));
    }
}

TEST_CASE("m-cycling predicate") {
    Permutation p = example_perm();
    CHECK(m_cycles_at(p, {1, 1, 1}, 0, 7));
    CHECK_FALSE(m_cycles_at(p, {1, 1, 1}, 0, 6));
    // chains whose norm already reaches M with a nonzero endpoint gap
    CHECK_FALSE(m_cycles_at(p, {1, 1, 1}, 0, 3));
    CHECK_FALSE(m_cycles_at(p, {5, 1, 1}, 0, 5));
}

TEST_CASE("displacements that are column multiples cycle everywhere on a qc permutation") {
    Permutation p = example_perm();
    for (int x0 = 0; x0 < 25; ++x0) {
        CHECK(m_cycles_at(p, {5}, x0, 10));          // w = 5 + d(x0, x0+5) = 10
        CHECK(m_cycles_at(p, {5, 15, 5}, x0, 20));   // displacements sum to 0 mod 25
    }
}

TEST_CASE("enumeration matches its closed-form count and ceiling") {
    for (int M : {1, 2, 3, 4, 5, 6}) {
        auto rs = enumerate_displacements(M);
        for (const auto& r : rs) {
            CHECK(r.size() % 2 == 1);
            int norm = 0;
            for (int v : r) norm += std::abs(v);
            CHECK(norm < M);
        }
        CHECK(m_cycling_candidate_count(25, M) == 25 * static_cast<long long>(rs.size()));
        CHECK(m_cycling_candidate_count(25, M) <= m_cycling_candidate_ceiling(25, M));
    }
    CHECK(enumerate_displacements(1).empty());
    CHECK(enumerate_displacements(2).size() == 2);  // (+1), (-1)
    CHECK(enumerate_displacements(3).size() == 4);  // (+-1), (+-2)
}

TEST_CASE("exact count against a hand-rolled scan at M=2") {
    Permutation id = Permutation::identity(25);
    // independent oracle: l=1, r = +-1; x1 = x0 +- 1, weight = 1 + d(x0,x1) = 2
    long long oracle = 0;
    for (int x0 = 0; x0 < 25; ++x0)
        for (int r : {1, -1}) {
            int y1 = ((x0 + r) % 25 + 25) % 25;
            if (1 + circular_distance(x0, y1, 25) <= 2) ++oracle;
        }
    CHECK(oracle == 50);
    MCyclingResult res = count_m_cycling_pairs(id, 2);
    CHECK(res.z == oracle);
    CHECK(res.pairs.size() == 50);
}

TEST_CASE("parallel and serial enumeration agree, order included") {
    Permutation p = example_perm();
    for (int M : {2, 3, 4, 5}) {
        MCyclingResult a = count_m_cycling_pairs(p, M);
        MCyclingResult b = count_m_cycling_pairs_serial(p, M);
        REQUIRE(a.z == b.z);
        REQUIRE(a.pairs.size() == b.pairs.size());
        for (std::size_t i = 0; i < a.pairs.size(); ++i) {
            CHECK(a.pairs[i].r == b.pairs[i].r);
            CHECK(a.pairs[i].x0 == b.pairs[i].x0);
        }
    }
}

TEST_CASE("Z is a multiple of n1 on the 5x5 example") {
    Permutation p = example_perm();
    for (int M : {2, 3, 4, 5, 6}) {
        MCyclingResult res = count_m_cycling_pairs(p, M);
        CHECK(res.z % 5 == 0);
        // shift symmetry: hits closed under x0 -> x0 + 5
        std::set<std::pair<std::vector<int>, int>> hits;
        for (const auto& pr : res.pairs) hits.insert({pr.r, pr.x0});
        for (const auto& [r, x0] : hits) CHECK(hits.count({r, (x0 + 5) % 25}) == 1);
    }
}

TEST_CASE("M=1 counts nothing and resource guard trips") {
    Permutation p = example_perm();
    CHECK(count_m_cycling_pairs(p, 1).z == 0);
    CHECK_THROWS_AS(count_m_cycling_pairs(p, 13), ResourceError);
    CHECK_THROWS_AS(count_m_cycling_pairs(p, 13), ResourceError);
    // aliasing guard: M-1 must stay below N/2
    CHECK_THROWS_AS(count_m_cycling_pairs(Permutation::identity(10), 7), ValidationError);
}

TEST_CASE("small codewords force cycling pairs") {
    // exact counting at M = 2w/lambda is infeasible (the candidate set grows
    // as N*3^M/2 and any tiny-code w puts M far beyond the desk-scale cap),
    // so the assertion runs through the early-exit existence scan; M is
    // floor(2w/lambda)+1 so a witness with norm exactly 2w/lambda is not
    // excluded by the strict norm bound of the count
    Ratio lam = lambda_parameter(RscCode{07, 05});
    for (Permutation perm : {Permutation::identity(16), sample_uniform(16, 3),
                             build_qc_permutation(sample_qc(4, 4, 5))}) {
        TurboCode tc = TurboCode::make({07, 05}, perm);
        int w = min_distance_exhaustive(tc).value;
        int M = static_cast<int>(2LL * w * lam.den / lam.num) + 1;
        CHECK(exists_m_cycling_pair(tc.perm, M));
    }
}

TEST_CASE("existence probe agrees with the count and handles the degenerate regime") {
    Permutation p = example_perm();
    for (int M : {2, 3, 4}) {
        bool any = count_m_cycling_pairs(p, M).z > 0;
        CHECK(exists_m_cycling_pair(p, M) == any);
    }
    CHECK_FALSE(exists_m_cycling_pair(p, 1));
    // beyond the exact cap: every length-1 chain cycles once M > N/2 + 1
    CHECK(exists_m_cycling_pair(p, 40));
}

TEST_CASE("z statistics over sampled permutations") {
    ZStatistics st = z_statistics(5, 5, 3, 20, 99);
    CHECK(st.trials == 20);
    CHECK(st.divisibility_violations == 0);
    CHECK(st.mean_within_ceiling);
    CHECK_THROWS_AS(z_statistics(10, 10, 10, 5, 1), ValidationError);  // needs M < n2
    CHECK_THROWS_AS(z_statistics(10, 10, 0, 5, 1), ValidationError);
}

TEST_CASE("trellis weight sums event spans") {
    RscCode code{07, 05};
    CHECK(trellis_weight(code, std::vector<std::uint8_t>(16, 0)) == 0);
    std::vector<std::uint8_t> one(16, 0);
    one[0] = one[3] = 1;
    CHECK(trellis_weight(code, one) == 3);
    std::vector<std::uint8_t> two(32, 0);
    two[0] = two[3] = two[8] = two[11] = 1;
    CHECK(trellis_weight(code, two) == 6);
}

TEST_CASE("exhaustive distance on a tiny code, witness re-encodes") {
    TurboCode tc = TurboCode::make({07, 05}, Permutation::identity(16));
    DistanceReport rep = min_distance_exhaustive(tc);
    CHECK(rep.bound_type == BoundType::exact);
    CHECK(rep.value > 0);
    CHECK(oracle::reencode_weight(tc, rep.witness) == rep.value);

    DistanceReport full = min_distance_low_weight(tc, 16);
    CHECK(full.value == rep.value);

    CHECK_THROWS_AS(min_distance_exhaustive(
                        TurboCode::make({07, 05}, Permutation::identity(22))),
                    ResourceError);
}

TEST_CASE("low-weight search narrows as the cap grows") {
    TurboCode tc = TurboCode::make({07, 05}, example_perm());
    DistanceReport w2 = min_distance_low_weight(tc, 2);
    DistanceReport w3 = min_distance_low_weight(tc, 3);
    CHECK(w2.bound_type == BoundType::upper_bound);
    CHECK(w2.value >= w3.value);
    CHECK(oracle::reencode_weight(tc, w2.witness) == w2.value);
    CHECK(oracle::reencode_weight(tc, w3.witness) == w3.value);
    CHECK_THROWS_AS(min_distance_low_weight(tc, 1), ValidationError);

    DistanceReport serial = min_distance_low_weight_serial(tc, 3);
    CHECK(serial.value == w3.value);
    CHECK(serial.witness == w3.witness);
}

TEST_CASE("punctured weight is honored by the search") {
    TurboCode tc = TurboCode::make({07, 05}, example_perm(), PuncturePattern::alternate);
    DistanceReport rep = min_distance_low_weight(tc, 3);
    CHECK(oracle::reencode_weight(tc, rep.witness) == rep.value);
}

TEST_CASE("frozen distance bound for the shipped 20x20 interleaver") {
    InterleaverFile f = load_interleaver(std::string(QCTURBO_DATA_DIR) +
                                         "/interleavers/qc_n400_20x20.txt");
    TurboCode tc = TurboCode::make({013, 015}, std::move(f.perm));
    DistanceReport rep = min_distance_low_weight(tc, 3);
    // regression value from the first computation; the witness pair wraps
    // through the seam with circular gap 35 = 5 * 7 (the feedback period)
    CHECK(rep.value == 30);
    CHECK(rep.witness == std::vector<int>{0, 365});
    CHECK(oracle::reencode_weight(tc, rep.witness) == 30);
}

TEST_CASE("report serialization") {
    DistanceReport rep;
    rep.method = DistanceMethod::low_weight_search;
    rep.bound_type = BoundType::upper_bound;
    rep.value = 14;
    rep.witness = {99, 105};
    rep.max_input_weight = 2;
    CHECK(rep.serialize() ==
          "method=low_weight_search bound_type=upper_bound value=14 witness=99,105 "
          "max_input_weight=2");
}

TEST_CASE("constructed chains satisfy the weight bound") {
    TurboCode tc = TurboCode::make({07, 05}, example_perm());
    Ratio lam = lambda_parameter(tc.code);
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        auto bits = random_bits(25, seed, 2);
        Chain c = witness_chain_from_codeword(tc, bits, lam);
        CHECK(c.elements_distinct());
        int w = oracle::reencode_weight(tc, [&] {
            std::vector<int> sup;
            for (int i = 0; i < 25; ++i)
                if (bits[static_cast<std::size_t>(i)]) sup.push_back(i);
            return sup;
        }());
        CHECK(static_cast<long long>(c.pi_weight) * lam.num <= 2LL * w * lam.den);
        CHECK(c.pi_weight == pi_weight_by_definition(c, 25));
    }
}

TEST_CASE("a single event on each side yields a two-element chain") {
    TurboCode tc = TurboCode::make({07, 05}, example_perm());
    std::vector<std::uint8_t> bits(25, 0);
    bits[0] = bits[3] = 1;  // closes an event; its image under pi^{-1} is {0, 22}
    Chain c = witness_chain_from_codeword(tc, bits, lambda_parameter(tc.code));
    CHECK(c.x.size() == 2);
    CHECK(c.elements_distinct());
}

TEST_CASE("witness construction rejects weight-one inputs") {
    TurboCode tc = TurboCode::make({07, 05}, example_perm());
    std::vector<std::uint8_t> bits(25, 0);
    bits[7] = 1;
    CHECK_THROWS_AS(witness_chain_from_codeword(tc, bits, lambda_parameter(tc.code)), ValidationError);
    CHECK_THROWS_AS(witness_chain_from_codeword(tc, std::vector<std::uint8_t>(25, 0), lambda_parameter(tc.code)),
                    ValidationError);
}
