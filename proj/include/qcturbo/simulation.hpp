#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcturbo/rng.hpp"
#include "qcturbo/turbo.hpp"

namespace qcturbo {

/// sigma = sqrt(1 / (2 * rate * 10^(ebn0_db/10))); rate in (0, 1].
double ebn0_to_sigma(double ebn0_db, double rate);

/// Gaussian tail probability Q(x).
double qfunc(double x);

/// bit b -> symbol 1-2b.
std::vector<double> bpsk_modulate(const std::vector<std::uint8_t>& bits);

/// Adds i.i.d. zero-mean Gaussian noise with standard deviation sigma.
void add_awgn(std::vector<double>& symbols, double sigma, Rng& rng);

/// LLR = 2 y / sigma^2; positive means bit 0.
std::vector<double> channel_llrs(const std::vector<double>& noisy, double sigma);

struct SimConfig {
    std::vector<double> snr_points_db;
    int iterations = 32;
    int wraps = 2;
    BcjrMode mode = BcjrMode::log_map;
    long long min_block_errors = 100;
    long long min_bit_errors = 500;
    long long max_frames = 10'000'000;
    std::uint64_t seed = 0;
    int workers = 0;  // 0 = OpenMP default

    void validate() const;
};

struct SimPointResult {
    double ebn0_db = 0;
    long long frames = 0;
    long long block_errors = 0;
    long long bit_errors = 0;
    double wer = 0;
    double ber = 0;
    bool censored = false;  // max_frames hit before the stopping rule
    double wall_seconds = 0;
};

/// Monte Carlo at one SNR point: uniform random frames, encode, puncture,
/// BPSK over AWGN, iterative decode. Stops once block_errors >=
/// min_block_errors AND bit_errors >= min_bit_errors (checked on fixed-size
/// batch boundaries), or at max_frames with the censored flag set. Frame i
/// draws from a stream derived from (seed, i), so counts are identical for
/// any worker count.
SimPointResult run_point(const TurboCode& tc, const SimConfig& config, double ebn0_db);

/// Single-threaded reference with the identical batch schedule; kept for
/// testing, produces bit-identical counts.
SimPointResult run_point_reference(const TurboCode& tc, const SimConfig& config, double ebn0_db);

std::vector<SimPointResult> run_sweep(const TurboCode& tc, const SimConfig& config);

/// CSV, one row per SNR point. Header:
/// ebn0_db,frames,block_errors,bit_errors,wer,ber,censored_flag
/// WER/BER printed in scientific notation with 6 significant digits.
void write_csv(std::ostream& os, const std::vector<SimPointResult>& rows);
std::string csv_string(const std::vector<SimPointResult>& rows);

/// Uncoded BPSK bit errors over `bits` samples at the given Eb/N0 (rate 1).
long long uncoded_bpsk_errors(double ebn0_db, long long bits, std::uint64_t seed);

} // namespace qcturbo
