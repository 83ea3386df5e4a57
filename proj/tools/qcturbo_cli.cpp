// Command-line surface for the quasi-cyclic turbo code toolkit.
// Exit codes: 0 success, 2 validation failure, 3 construction failure,
// 4 resource limit, 1 anything else.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcturbo/analysis.hpp"
#include "qcturbo/permutation.hpp"
#include "qcturbo/rsc.hpp"
#include "qcturbo/simulation.hpp"
#include "qcturbo/turbo.hpp"

namespace {

using namespace qcturbo;

void print_perm_summary(std::ostream& os, const Permutation& perm) {
    os << "n " << perm.size() << "\n";
    os << "spread " << (perm.size() >= 2 ? spread(perm) : 0) << "\n";
    if (auto period = detect_qc_period(perm))
        os << "quasi_cyclic yes period " << *period << "\n";
    else
        os << "quasi_cyclic no\n";
}

PuncturePattern parse_puncture(const std::string& s) {
    if (s == "none") return PuncturePattern::none;
    if (s == "alternate") return PuncturePattern::alternate;
    throw ValidationError("puncture must be 'none' or 'alternate', got '" + s + "'");
}

TurboCode load_turbo(const std::string& perm_path, const std::string& gens,
                     const std::string& punct) {
    InterleaverFile f = load_interleaver(perm_path);
    return TurboCode::make(parse_rsc_generators(gens), std::move(f.perm), parse_puncture(punct));
}

void cmd_gen(const std::string& kind, int n1, int n2, int n, int s, std::uint64_t seed,
             int max_attempts, const std::string& out) {
    if (kind == "qc") {
        if (n1 < 1 || n2 < 1) throw ValidationError("gen --kind qc needs --n1 and --n2");
        QcSpec spec = sample_qc(n1, n2, seed);
        save_qc_spec(spec, out);
        std::cout << "wrote " << out << "\n";
        print_perm_summary(std::cout, build_qc_permutation(spec));
        return;
    }
    if (n < 1) throw ValidationError("gen --kind " + kind + " needs --n");
    Permutation perm;
    if (kind == "uniform") {
        perm = sample_uniform(n, seed);
    } else if (kind == "srandom") {
        int s_eff = s > 0 ? s : static_cast<int>(std::sqrt(n / 2.0));
        perm = sample_s_random(n, s_eff, seed, max_attempts);
        std::cout << "s " << s_eff << "\n";
    } else {
        throw ValidationError("gen --kind must be qc, uniform or srandom");
    }
    save_table(perm, out);
    std::cout << "wrote " << out << "\n";
    print_perm_summary(std::cout, perm);
}

void cmd_inspect(const std::string& path) {
    InterleaverFile f = load_interleaver(path);
    std::cout << "kind " << (f.is_qc_form() ? "qc" : "table") << "\n";
    if (f.is_qc_form()) std::cout << "n1 " << f.spec->n1 << "\nn2 " << f.spec->n2 << "\n";
    print_perm_summary(std::cout, f.perm);
    std::cout << "storage_integers " << f.storage_integers() << "\n";
}

void cmd_lambda(const std::string& gens, int horizon) {
    std::cout << lambda_parameter(parse_rsc_generators(gens), horizon).str() << "\n";
}

void cmd_distance(const std::string& perm_path, const std::string& gens,
                  const std::string& method, int max_weight, const std::string& punct) {
    TurboCode tc = load_turbo(perm_path, gens, punct);
    DistanceReport rep;
    if (method == "exhaustive")
        rep = min_distance_exhaustive(tc);
    else if (method == "lowweight")
        rep = min_distance_low_weight(tc, max_weight);
    else
        throw ValidationError("distance --method must be exhaustive or lowweight");
    std::cout << rep.serialize() << "\n";
}

void cmd_zstat(int n1, int n2, int m, int trials, std::uint64_t seed) {
    ZStatistics st = z_statistics(n1, n2, m, trials, seed);
    std::cout << "trials " << st.trials << "\n";
    std::cout << "mean_z " << st.mean_z << "\n";
    std::cout << "divisibility_violations " << st.divisibility_violations << "\n";
    std::cout << "expectation_ceiling " << st.expectation_ceiling << "\n";
    std::cout << "within_ceiling " << (st.mean_within_ceiling ? "yes" : "no") << "\n";
}

void cmd_simulate(const std::string& perm_path, const std::string& gens,
                  const std::vector<double>& snr, int iters, int wraps, const std::string& mode,
                  long long stop_blocks, long long stop_bits, long long max_frames,
                  std::uint64_t seed, int workers, const std::string& punct,
                  const std::string& out) {
    TurboCode tc = load_turbo(perm_path, gens, punct);
    SimConfig cfg;
    cfg.snr_points_db = snr;
    cfg.iterations = iters;
    cfg.wraps = wraps;
    if (mode == "logmap")
        cfg.mode = BcjrMode::log_map;
    else if (mode == "maxlog")
        cfg.mode = BcjrMode::max_log_map;
    else
        throw ValidationError("simulate --mode must be logmap or maxlog");
    cfg.min_block_errors = stop_blocks;
    cfg.min_bit_errors = stop_bits;
    cfg.max_frames = max_frames;
    cfg.seed = seed;
    cfg.workers = workers;
    cfg.validate();

    std::vector<SimPointResult> rows;
    for (double db : cfg.snr_points_db) {
        SimPointResult r = run_point(tc, cfg, db);
        std::cerr << "ebn0 " << db << " dB: frames " << r.frames << " wer " << r.wer << " ("
                  << r.wall_seconds << " s)\n";
        rows.push_back(r);
    }
    std::ofstream os(out);
    if (!os) throw ValidationError("cannot open " + out + " for writing");
    write_csv(os, rows);
    std::cout << csv_string(rows);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-cyclic turbo codes: interleavers, distance analysis, AWGN simulation"};
    app.require_subcommand(1);

    // gen
    std::string g_kind, g_out;
    int g_n1 = 0, g_n2 = 0, g_n = 0, g_s = 0, g_attempts = 100;
    std::uint64_t g_seed = 0;
    auto* gen = app.add_subcommand("gen", "generate an interleaver file");
    gen->add_option("--kind", g_kind, "qc | uniform | srandom")->required();
    gen->add_option("--n1", g_n1, "rows (qc)");
    gen->add_option("--n2", g_n2, "columns (qc)");
    gen->add_option("--n", g_n, "size (uniform/srandom)");
    gen->add_option("--s", g_s, "spread constraint (srandom; default floor(sqrt(N/2)))");
    gen->add_option("--seed", g_seed, "RNG seed (default 0)");
    gen->add_option("--max-attempts", g_attempts, "srandom restart budget (default 100)");
    gen->add_option("--out", g_out, "output path")->required();
    gen->callback([&] { cmd_gen(g_kind, g_n1, g_n2, g_n, g_s, g_seed, g_attempts, g_out); });

    // inspect
    std::string i_perm;
    auto* inspect = app.add_subcommand("inspect", "report on an interleaver file");
    inspect->add_option("--perm", i_perm, "interleaver file")->required();
    inspect->callback([&] { cmd_inspect(i_perm); });

    // lambda
    std::string l_gens;
    int l_horizon = 64;
    auto* lambda = app.add_subcommand("lambda", "weight-per-length floor of an RSC constituent");
    lambda->add_option("--gens", l_gens, "octal generator pair, e.g. 13,15")->required();
    lambda->add_option("--horizon", l_horizon, "certification horizon (default 64)");
    lambda->callback([&] { cmd_lambda(l_gens, l_horizon); });

    // distance
    std::string d_perm, d_gens, d_method = "lowweight", d_punct = "none";
    int d_maxw = 3;
    auto* dist = app.add_subcommand("distance", "minimum-distance search");
    dist->add_option("--perm", d_perm, "interleaver file")->required();
    dist->add_option("--gens", d_gens, "octal generator pair")->required();
    dist->add_option("--method", d_method, "exhaustive | lowweight (default lowweight)");
    dist->add_option("--max-weight", d_maxw, "input-weight cap for lowweight (default 3)");
    dist->add_option("--puncture", d_punct, "none | alternate (default none)");
    dist->callback([&] { cmd_distance(d_perm, d_gens, d_method, d_maxw, d_punct); });

    // zstat
    int z_n1 = 0, z_n2 = 0, z_m = 0, z_trials = 100;
    std::uint64_t z_seed = 0;
    auto* zstat = app.add_subcommand("zstat", "chain-count statistics over sampled qc interleavers");
    zstat->add_option("--n1", z_n1, "rows")->required();
    zstat->add_option("--n2", z_n2, "columns")->required();
    zstat->add_option("--M", z_m, "weight threshold (requires M < n2)")->required();
    zstat->add_option("--trials", z_trials, "sample count (default 100)");
    zstat->add_option("--seed", z_seed, "RNG seed (default 0)");
    zstat->callback([&] { cmd_zstat(z_n1, z_n2, z_m, z_trials, z_seed); });

    // simulate
    std::string s_perm, s_gens, s_mode = "logmap", s_punct = "alternate", s_out;
    std::vector<double> s_snr;
    int s_iters = 32, s_wraps = 2, s_workers = 0;
    long long s_blocks = 100, s_bits = 500, s_maxframes = 10'000'000;
    std::uint64_t s_seed = 1;
    auto* sim = app.add_subcommand("simulate", "word/bit error rate over BPSK on AWGN");
    sim->add_option("--perm", s_perm, "interleaver file")->required();
    sim->add_option("--gens", s_gens, "octal generator pair")->required();
    sim->add_option("--snr", s_snr, "Eb/N0 points in dB, comma separated")
        ->required()
        ->delimiter(',');
    sim->add_option("--iters", s_iters, "decoder iterations (default 32)");
    sim->add_option("--wraps", s_wraps, "tail-biting wraps (default 2)");
    sim->add_option("--mode", s_mode, "logmap | maxlog (default logmap)");
    sim->add_option("--stop-blocks", s_blocks, "stop after this many block errors (default 100)");
    sim->add_option("--stop-bits", s_bits, "and this many bit errors (default 500)");
    sim->add_option("--max-frames", s_maxframes, "per-point frame cap (default 1e7)");
    sim->add_option("--seed", s_seed, "master seed (default 1)");
    sim->add_option("--workers", s_workers, "worker threads, 0 = all (default 0)");
    sim->add_option("--puncture", s_punct, "none | alternate (default alternate)");
    sim->add_option("--out", s_out, "CSV output path")->required();
    sim->callback([&] {
        cmd_simulate(s_perm, s_gens, s_snr, s_iters, s_wraps, s_mode, s_blocks, s_bits,
                     s_maxframes, s_seed, s_workers, s_punct, s_out);
    });

    const std::string footer =
        "Exit codes: 0 success, 2 validation failure, 3 construction failure, 4 resource limit.";
    app.footer(footer);
    for (auto* sc : app.get_subcommands({})) sc->footer(footer);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UnsupportedLengthError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConstructionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
