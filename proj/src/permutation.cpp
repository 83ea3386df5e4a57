#include "qcturbo/permutation.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "qcturbo/rng.hpp"

namespace qcturbo {

namespace {

bool is_bijection(const std::vector<int>& v) {
    std::vector<char> seen(v.size(), 0);
    for (int x : v) {
        if (x < 0 || x >= static_cast<int>(v.size()) || seen[x]) return false;
        seen[x] = 1;
    }
    return true;
}

} // namespace

void QcSpec::validate() const {
    if (n1 < 1 || n2 < 1)
        throw ValidationError("QcSpec: n1 and n2 must be positive, got n1=" +
                              std::to_string(n1) + " n2=" + std::to_string(n2));
    if (static_cast<long long>(n1) * n2 > std::numeric_limits<int>::max())
        throw ValidationError("QcSpec: N = n1*n2 exceeds the addressable index range");
    if (static_cast<int>(sigma.size()) != n2)
        throw ValidationError("QcSpec: sigma has " + std::to_string(sigma.size()) +
                              " entries, expected n2=" + std::to_string(n2));
    if (!is_bijection(sigma))
        throw ValidationError("QcSpec: sigma is not a bijection on {0..n2-1}");
    if (static_cast<int>(shifts.size()) != n2)
        throw ValidationError("QcSpec: X has " + std::to_string(shifts.size()) +
                              " entries, expected n2=" + std::to_string(n2));
    for (int x : shifts)
        if (x < 0 || x >= n1)
            throw ValidationError("QcSpec: X entry " + std::to_string(x) +
                                  " outside {0..n1-1}");
}

Permutation Permutation::from_table(std::vector<int> table) {
    if (table.empty()) throw ValidationError("Permutation: empty table");
    if (!is_bijection(table))
        throw ValidationError("Permutation: table is not a bijection on {0..N-1}");
    Permutation p;
    p.inverse_.assign(table.size(), 0);
    for (int x = 0; x < static_cast<int>(table.size()); ++x) p.inverse_[table[x]] = x;
    p.table_ = std::move(table);
    return p;
}

Permutation Permutation::identity(int n) {
    if (n < 1) throw ValidationError("Permutation: size must be positive");
    std::vector<int> t(n);
    std::iota(t.begin(), t.end(), 0);
    return from_table(std::move(t));
}

void Permutation::check_index(int x) const {
    if (x < 0 || x >= size())
        throw ValidationError("Permutation: index " + std::to_string(x) +
                              " outside {0.." + std::to_string(size() - 1) + "}");
}

int grid_to_index(int i, int j, int n2) {
    if (n2 < 1) throw ValidationError("grid_to_index: n2 must be positive");
    if (j < 0 || j >= n2)
        throw ValidationError("grid_to_index: column " + std::to_string(j) +
                              " outside {0.." + std::to_string(n2 - 1) + "}");
    if (i < 0) throw ValidationError("grid_to_index: negative row index");
    return i * n2 + j;
}

std::pair<int, int> index_to_grid(int x, int n2) {
    if (n2 < 1) throw ValidationError("index_to_grid: n2 must be positive");
    if (x < 0) throw ValidationError("index_to_grid: negative index");
    return {x / n2, x % n2};
}

Permutation build_qc_permutation(const QcSpec& spec) {
    spec.validate();
    const int n = spec.size();
    std::vector<int> table(n);
    for (int i = 0; i < spec.n1; ++i)
        for (int j = 0; j < spec.n2; ++j)
            table[grid_to_index(i, j, spec.n2)] =
                grid_to_index((i + spec.shifts[j]) % spec.n1, spec.sigma[j], spec.n2);
    return Permutation::from_table(std::move(table));
}

bool is_quasi_cyclic(const Permutation& perm, int n2) {
    const int n = perm.size();
    if (n2 < 1 || n % n2 != 0)
        throw ValidationError("is_quasi_cyclic: period " + std::to_string(n2) +
                              " does not divide N=" + std::to_string(n));
    for (int x = 0; x < n; ++x)
        if (perm((x + n2) % n) != (perm(x) + n2) % n) return false;
    return true;
}

std::optional<int> detect_qc_period(const Permutation& perm) {
    const int n = perm.size();
    for (int n2 = 1; n2 < n; ++n2)
        if (n % n2 == 0 && is_quasi_cyclic(perm, n2)) return n2;
    return std::nullopt;
}

QcSpec sample_qc(int n1, int n2, std::uint64_t seed) {
    if (n1 < 1 || n2 < 1) throw ValidationError("sample_qc: n1 and n2 must be positive");
    Rng rng(seed);
    QcSpec spec;
    spec.n1 = n1;
    spec.n2 = n2;
    spec.sigma.resize(n2);
    std::iota(spec.sigma.begin(), spec.sigma.end(), 0);
    rng.shuffle(spec.sigma);
    spec.shifts.resize(n2);
    for (int j = 0; j < n2; ++j)
        spec.shifts[j] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n1)));
    return spec;
}

Permutation sample_uniform(int n, std::uint64_t seed) {
    if (n < 1) throw ValidationError("sample_uniform: size must be positive");
    Rng rng(seed);
    std::vector<int> t(n);
    std::iota(t.begin(), t.end(), 0);
    rng.shuffle(t);
    return Permutation::from_table(std::move(t));
}

Permutation sample_s_random(int n, int S, std::uint64_t seed, int max_attempts) {
    if (n < 1) throw ValidationError("sample_s_random: size must be positive");
    if (S < 1) throw ValidationError("sample_s_random: S must be >= 1");
    if (max_attempts < 1) throw ValidationError("sample_s_random: max_attempts must be >= 1");

    Rng rng(seed);
    std::vector<int> remaining, out(n);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        remaining.resize(n);
        std::iota(remaining.begin(), remaining.end(), 0);
        rng.shuffle(remaining);
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            // first remaining candidate compatible with the last S-1 placed values
            int chosen = -1;
            for (std::size_t k = 0; k < remaining.size(); ++k) {
                int cand = remaining[k];
                bool fits = true;
                for (int j = std::max(0, i - S + 1); j < i; ++j) {
                    if (std::abs(cand - out[j]) <= S) {
                        fits = false;
                        break;
                    }
                }
                if (fits) {
                    chosen = static_cast<int>(k);
                    break;
                }
            }
            if (chosen < 0) {
                ok = false;
            } else {
                out[i] = remaining[chosen];
                remaining.erase(remaining.begin() + chosen);
            }
        }
        if (ok) return Permutation::from_table(out);
    }
    throw ConstructionError("sample_s_random: no permutation with S=" + std::to_string(S) +
                            " found in " + std::to_string(max_attempts) +
                            " attempts (try a smaller S, e.g. floor(sqrt(N/2)))");
}

int spread(const Permutation& perm) {
    const int n = perm.size();
    if (n < 2) throw ValidationError("spread: needs at least two points");
    int best = std::numeric_limits<int>::max();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            int v = (j - i) + std::abs(perm(i) - perm(j));
            if (v < best) best = v;
            if (best == 2) return 2; // 1+1 is the floor
        }
    }
    return best;
}

int InterleaverFile::storage_integers() const {
    return spec ? 2 * spec->n2 : perm.size();
}

namespace {

void write_ints(std::ostream& os, const std::vector<int>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ' ';
        os << v[i];
    }
    os << '\n';
}

std::vector<int> read_ints(std::istream& is, int count, const std::string& what) {
    std::vector<int> v(count);
    for (int i = 0; i < count; ++i)
        if (!(is >> v[i]))
            throw ValidationError("interleaver file: expected " + std::to_string(count) +
                                  " integers for " + what);
    return v;
}

} // namespace

void save_qc_spec(const QcSpec& spec, const std::string& path) {
    spec.validate();
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot open " + path + " for writing");
    os << "qc " << spec.n1 << ' ' << spec.n2 << '\n';
    write_ints(os, spec.sigma);
    write_ints(os, spec.shifts);
    if (!os) throw ValidationError("write failed: " + path);
}

void save_table(const Permutation& perm, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot open " + path + " for writing");
    os << "table " << perm.size() << '\n';
    write_ints(os, perm.table());
    if (!os) throw ValidationError("write failed: " + path);
}

InterleaverFile load_interleaver(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open " + path);
    std::string kind;
    is >> kind;
    InterleaverFile f;
    if (kind == "qc") {
        QcSpec spec;
        if (!(is >> spec.n1 >> spec.n2))
            throw ValidationError("interleaver file: malformed qc header in " + path);
        spec.sigma = read_ints(is, spec.n2, "sigma");
        spec.shifts = read_ints(is, spec.n2, "X");
        spec.validate();
        f.perm = build_qc_permutation(spec);
        f.spec = std::move(spec);
    } else if (kind == "table") {
        int n = 0;
        if (!(is >> n) || n < 1)
            throw ValidationError("interleaver file: malformed table header in " + path);
        f.perm = Permutation::from_table(read_ints(is, n, "table"));
    } else {
        throw ValidationError("interleaver file: unknown kind '" + kind + "' in " + path);
    }
    return f;
}

} // namespace qcturbo
