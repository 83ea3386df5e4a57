#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qcturbo/permutation.hpp"
#include "qcturbo/simulation.hpp"

using namespace qcturbo;

namespace {

TurboCode table2_code(PuncturePattern p = PuncturePattern::alternate) {
    InterleaverFile f = load_interleaver(std::string(QCTURBO_DATA_DIR) +
                                         "/interleavers/qc_n400_20x20.txt");
    return TurboCode::make({013, 015}, std::move(f.perm), p);
}

} // namespace

TEST_CASE("noise sigma from Eb/N0") {
    CHECK(ebn0_to_sigma(0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ebn0_to_sigma(3.0103, 0.5) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));
    CHECK(ebn0_to_sigma(0.0, 1.0 / 3.0) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-9));
    CHECK_THROWS_AS(ebn0_to_sigma(0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(ebn0_to_sigma(0.0, 1.5), ValidationError);
}

TEST_CASE("bpsk mapping and llr sign convention") {
    auto s = bpsk_modulate({0, 1});
    CHECK(s[0] == 1.0);
    CHECK(s[1] == -1.0);
    // llr = 2y/sigma^2 keeps the sign of the observation at any sigma
    auto llr = channel_llrs({0.3, -0.8}, 1e-3);
    CHECK(llr[0] > 0);
    CHECK(llr[1] < 0);
    std::vector<double> v{1.0};
    Rng rng(1);
    CHECK_THROWS_AS(add_awgn(v, 0.0, rng), ValidationError);
    CHECK_THROWS_AS(channel_llrs(v, -1.0), ValidationError);
}

TEST_CASE("noise variance calibrates to sigma squared") {
    Rng rng(33);
    const double sigma = 0.7;
    const int n = 1'000'000;
    std::vector<double> v(n, 0.0);
    add_awgn(v, sigma, rng);
    double sum = 0, sq = 0;
    for (double x : v) {
        sum += x;
        sq += x * x;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    CHECK(std::abs(var - sigma * sigma) / (sigma * sigma) < 0.01);
}

TEST_CASE("q function") {
    CHECK(qfunc(0.0) == doctest::Approx(0.5));
    CHECK(qfunc(3.0) == doctest::Approx(0.00134989803163).epsilon(1e-6));
}

TEST_CASE("uncoded bpsk matches the gaussian tail") {
    const long long n = 200'000;
    for (double db : {0.0, 2.0, 4.0}) {
        double p = qfunc(std::sqrt(2.0 * std::pow(10.0, db / 10.0)));
        long long errs = uncoded_bpsk_errors(db, n, 77);
        double margin = 3.0 * std::sqrt(n * p * (1 - p));
        CHECK(std::abs(errs - p * n) <= margin);
    }
}

TEST_CASE("noiseless-equivalent run decodes every frame") {
    TurboCode tc = table2_code();
    SimConfig cfg;
    cfg.snr_points_db = {60.0};
    cfg.iterations = 1;
    cfg.seed = 12;
    cfg.max_frames = 1000;
    SimPointResult r = run_point(tc, cfg, 60.0);
    CHECK(r.frames == 1000);
    CHECK(r.block_errors == 0);
    CHECK(r.bit_errors == 0);
    CHECK(r.censored);  // never reached the stopping rule
}

TEST_CASE("worker count does not change the counts") {
    TurboCode tc = table2_code();
    SimConfig cfg;
    cfg.snr_points_db = {1.0};
    cfg.iterations = 4;
    cfg.seed = 2718;
    cfg.min_block_errors = 40;
    cfg.min_bit_errors = 100;
    cfg.max_frames = 2048;

    cfg.workers = 1;
    SimPointResult one = run_point(tc, cfg, 1.0);
    cfg.workers = 8;
    SimPointResult eight = run_point(tc, cfg, 1.0);
    SimPointResult serial = run_point_reference(tc, cfg, 1.0);

    CHECK(one.frames == eight.frames);
    CHECK(one.block_errors == eight.block_errors);
    CHECK(one.bit_errors == eight.bit_errors);
    CHECK(one.frames == serial.frames);
    CHECK(one.block_errors == serial.block_errors);
    CHECK(one.bit_errors == serial.bit_errors);
    CHECK(one.block_errors > 0);  // the point actually exercised errors
}

TEST_CASE("the stopping rule is a conjunction of both thresholds") {
    TurboCode tc = table2_code();
    SimConfig cfg;
    cfg.snr_points_db = {0.0};
    cfg.iterations = 1;
    cfg.seed = 5150;
    cfg.max_frames = 1024;

    // both thresholds reachable in the first batch: stop early
    cfg.min_block_errors = 1;
    cfg.min_bit_errors = 1;
    SimPointResult both = run_point(tc, cfg, 0.0);
    CHECK(both.frames == 512);
    CHECK_FALSE(both.censored);

    // block threshold met, bit threshold unreachable: must run to the cap
    cfg.min_bit_errors = 1'000'000'000;
    SimPointResult bits_short = run_point(tc, cfg, 0.0);
    CHECK(bits_short.frames == 1024);
    CHECK(bits_short.censored);
    CHECK(bits_short.block_errors >= 1);

    // bit threshold met, block threshold unreachable: same
    cfg.min_block_errors = 1'000'000'000;
    cfg.min_bit_errors = 1;
    SimPointResult blocks_short = run_point(tc, cfg, 0.0);
    CHECK(blocks_short.frames == 1024);
    CHECK(blocks_short.censored);
    CHECK(blocks_short.bit_errors >= 1);
}

TEST_CASE("csv format") {
    SimPointResult r;
    r.ebn0_db = 1.5;
    r.frames = 512;
    r.block_errors = 146;
    r.bit_errors = 4860;
    r.wer = 146.0 / 512;
    r.ber = 4860.0 / (512.0 * 400);
    r.censored = false;
    std::ostringstream os;
    write_csv(os, {r});
    CHECK(os.str() ==
          "ebn0_db,frames,block_errors,bit_errors,wer,ber,censored_flag\n"
          "1.5,512,146,4860,2.85156e-01,2.37305e-02,0\n");
}

TEST_CASE("config validation") {
    SimConfig cfg;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);  // no SNR points
    cfg.snr_points_db = {1.0};
    cfg.iterations = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.iterations = 1;
    CHECK_NOTHROW(cfg.validate());
}
