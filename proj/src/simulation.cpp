#include "qcturbo/simulation.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qcturbo {

double ebn0_to_sigma(double ebn0_db, double rate) {
    if (!(rate > 0.0 && rate <= 1.0))
        throw ValidationError("ebn0_to_sigma: rate must be in (0,1], got " + std::to_string(rate));
    return std::sqrt(1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0)));
}

double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

std::vector<double> bpsk_modulate(const std::vector<std::uint8_t>& bits) {
    std::vector<double> s(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) s[i] = 1.0 - 2.0 * (bits[i] & 1);
    return s;
}

void add_awgn(std::vector<double>& symbols, double sigma, Rng& rng) {
    if (!(sigma > 0.0)) throw ValidationError("awgn: sigma must be positive");
    for (double& s : symbols) s += sigma * rng.next_gaussian();
}

std::vector<double> channel_llrs(const std::vector<double>& noisy, double sigma) {
    if (!(sigma > 0.0)) throw ValidationError("channel_llrs: sigma must be positive");
    std::vector<double> llr(noisy.size());
    const double c = 2.0 / (sigma * sigma);
    for (std::size_t i = 0; i < noisy.size(); ++i) llr[i] = c * noisy[i];
    return llr;
}

void SimConfig::validate() const {
    if (snr_points_db.empty()) throw ValidationError("SimConfig: no SNR points");
    if (iterations < 1) throw ValidationError("SimConfig: iterations must be >= 1");
    if (wraps < 1) throw ValidationError("SimConfig: wraps must be >= 1");
    if (min_block_errors < 1) throw ValidationError("SimConfig: min_block_errors must be >= 1");
    if (min_bit_errors < 0) throw ValidationError("SimConfig: min_bit_errors must be >= 0");
    if (max_frames < 1) throw ValidationError("SimConfig: max_frames must be >= 1");
    if (workers < 0) throw ValidationError("SimConfig: workers must be >= 0");
}

namespace {

constexpr long long kBatchFrames = 512;  // stopping rule checked on batch boundaries

/// Bit errors of one decoded frame; draws are (seed, frame) derived so the
/// schedule cannot influence them. Draw order: N data bits, then one noise
/// sample per transmitted symbol.
int simulate_frame(const TurboCode& tc, const SimConfig& cfg, double sigma,
                   std::uint64_t frame_index) {
    const int n = tc.block_length();
    Rng rng = Rng::from_stream(cfg.seed, frame_index);

    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_bit());

    TurboCodeword cw = turbo_encode(tc, bits);
    std::vector<double> symbols = bpsk_modulate(puncture_codeword(cw, tc.puncture));
    add_awgn(symbols, sigma, rng);
    LlrFrame frame = depuncture(channel_llrs(symbols, sigma), n, tc.puncture);

    DecodeResult dec = turbo_decode(tc, frame, cfg.iterations, cfg.wraps, cfg.mode);
    int errs = 0;
    for (int i = 0; i < n; ++i) errs += dec.bits[static_cast<std::size_t>(i)] != bits[static_cast<std::size_t>(i)];
    return errs;
}

SimPointResult run_point_impl(const TurboCode& tc, const SimConfig& cfg, double ebn0_db,
                              bool parallel) {
    cfg.validate();
    const double sigma = ebn0_to_sigma(ebn0_db, tc.rate());
    const auto t0 = std::chrono::steady_clock::now();

    SimPointResult r;
    r.ebn0_db = ebn0_db;
    std::vector<int> errs(kBatchFrames);

#ifdef _OPENMP
    const int nthreads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#endif

    while (r.frames < cfg.max_frames) {
        const long long count = std::min(kBatchFrames, cfg.max_frames - r.frames);
        const long long base = r.frames;
        if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
            for (long long i = 0; i < count; ++i)
                errs[static_cast<std::size_t>(i)] =
                    simulate_frame(tc, cfg, sigma, static_cast<std::uint64_t>(base + i));
        } else {
            for (long long i = 0; i < count; ++i)
                errs[static_cast<std::size_t>(i)] =
                    simulate_frame(tc, cfg, sigma, static_cast<std::uint64_t>(base + i));
        }
        for (long long i = 0; i < count; ++i) {
            r.bit_errors += errs[static_cast<std::size_t>(i)];
            r.block_errors += errs[static_cast<std::size_t>(i)] > 0;
        }
        r.frames += count;
        if (r.block_errors >= cfg.min_block_errors && r.bit_errors >= cfg.min_bit_errors) break;
    }

    r.censored = !(r.block_errors >= cfg.min_block_errors && r.bit_errors >= cfg.min_bit_errors);
    r.wer = static_cast<double>(r.block_errors) / static_cast<double>(r.frames);
    r.ber = static_cast<double>(r.bit_errors) /
            (static_cast<double>(r.frames) * tc.block_length());
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

} // namespace

SimPointResult run_point(const TurboCode& tc, const SimConfig& config, double ebn0_db) {
    return run_point_impl(tc, config, ebn0_db, true);
}

SimPointResult run_point_reference(const TurboCode& tc, const SimConfig& config, double ebn0_db) {
    return run_point_impl(tc, config, ebn0_db, false);
}

std::vector<SimPointResult> run_sweep(const TurboCode& tc, const SimConfig& config) {
    config.validate();
    std::vector<SimPointResult> rows;
    rows.reserve(config.snr_points_db.size());
    for (double db : config.snr_points_db) rows.push_back(run_point(tc, config, db));
    return rows;
}

void write_csv(std::ostream& os, const std::vector<SimPointResult>& rows) {
    os << "ebn0_db,frames,block_errors,bit_errors,wer,ber,censored_flag\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%g,%lld,%lld,%lld,%.5e,%.5e,%d\n", r.ebn0_db, r.frames,
                      r.block_errors, r.bit_errors, r.wer, r.ber, r.censored ? 1 : 0);
        os << buf;
    }
}

std::string csv_string(const std::vector<SimPointResult>& rows) {
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

long long uncoded_bpsk_errors(double ebn0_db, long long bits, std::uint64_t seed) {
    if (bits < 1) throw ValidationError("uncoded_bpsk_errors: bits must be >= 1");
    const double sigma = ebn0_to_sigma(ebn0_db, 1.0);
    Rng rng(seed);
    long long errs = 0;
    for (long long i = 0; i < bits; ++i) {
        bool bit = rng.next_bit();
        double y = (bit ? -1.0 : 1.0) + sigma * rng.next_gaussian();
        errs += (y < 0.0) != bit;  // decide 1 on negative observation
    }
    return errs;
}

} // namespace qcturbo
