// Times the OpenMP kernels against their serial reference implementations
// and prints the speedup. Run from the repo root:
//   build/tools/bench_kernels [--quick]

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include <omp.h>

#include "qcturbo/analysis.hpp"
#include "qcturbo/permutation.hpp"
#include "qcturbo/simulation.hpp"

using namespace qcturbo;

namespace {

template <typename F>
double time_once(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s) {
    std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %.2fx\n", name, serial_s,
                parallel_s, serial_s / parallel_s);
}

} // namespace

int main(int argc, char** argv) {
    bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    std::printf("threads available: %d\n", omp_get_max_threads());

    Permutation qc = build_qc_permutation(sample_qc(20, 20, 7));
    RscCode code{013, 015};
    TurboCode tc = TurboCode::make(code, qc, PuncturePattern::none);

    {
        int m = quick ? 7 : 9;
        long long z_serial = 0, z_par = 0;
        double ts = time_once([&] { z_serial = count_m_cycling_pairs_serial(qc, m, false).z; });
        double tp = time_once([&] { z_par = count_m_cycling_pairs(qc, m, false).z; });
        if (z_serial != z_par) {
            std::fprintf(stderr, "mismatch: serial Z=%lld parallel Z=%lld\n", z_serial, z_par);
            return 1;
        }
        report("m-cycling enumeration", ts, tp);
    }

    {
        int maxw = quick ? 2 : 3;
        DistanceReport rs, rp;
        double ts = time_once([&] { rs = min_distance_low_weight_serial(tc, maxw); });
        double tp = time_once([&] { rp = min_distance_low_weight(tc, maxw); });
        if (rs.value != rp.value || rs.witness != rp.witness) {
            std::fprintf(stderr, "mismatch: serial %s vs parallel %s\n", rs.serialize().c_str(),
                         rp.serialize().c_str());
            return 1;
        }
        report("low-weight distance search", ts, tp);
    }

    {
        TurboCode punctured = TurboCode::make(code, qc, PuncturePattern::alternate);
        SimConfig cfg;
        cfg.snr_points_db = {1.5};
        cfg.iterations = quick ? 4 : 8;
        cfg.seed = 42;
        cfg.min_block_errors = 1'000'000;  // run to the frame cap
        cfg.min_bit_errors = 0;
        cfg.max_frames = quick ? 128 : 512;
        SimPointResult a, b;
        cfg.workers = 1;
        double ts = time_once([&] { a = run_point_reference(punctured, cfg, 1.5); });
        cfg.workers = 0;
        double tp = time_once([&] { b = run_point(punctured, cfg, 1.5); });
        if (a.bit_errors != b.bit_errors || a.block_errors != b.block_errors) {
            std::fprintf(stderr, "mismatch: serial %lld/%lld vs parallel %lld/%lld\n",
                         a.block_errors, a.bit_errors, b.block_errors, b.bit_errors);
            return 1;
        }
        report("monte carlo decode", ts, tp);
    }
    return 0;
}
