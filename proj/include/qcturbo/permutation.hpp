#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcturbo/errors.hpp"

namespace qcturbo {

/// Compact description of a bi-dimensional quasi-cyclic interleaver:
/// an n1 x n2 array, column permutation sigma, per-column cyclic shift X.
struct QcSpec {
    int n1 = 0;
    int n2 = 0;
    std::vector<int> sigma;   // permutation of {0..n2-1}
    std::vector<int> shifts;  // X_j, each in {0..n1-1}

    int size() const { return n1 * n2; }

    /// Throws ValidationError naming the violated invariant.
    void validate() const;
};

/// Explicit-table permutation on {0..n-1}; the inverse table is kept so that
/// both directions are O(1) during decoding. Immutable after construction.
class Permutation {
public:
    Permutation() = default;
    static Permutation from_table(std::vector<int> table);
    static Permutation identity(int n);

    int size() const { return static_cast<int>(table_.size()); }

    int apply(int x) const {
        check_index(x);
        return table_[x];
    }
    int inverse_apply(int y) const {
        check_index(y);
        return inverse_[y];
    }

    /// Unchecked lookups for hot loops; callers guarantee 0 <= x < size().
    int operator()(int x) const { return table_[x]; }
    int inv(int y) const { return inverse_[y]; }

    const std::vector<int>& table() const { return table_; }

private:
    void check_index(int x) const;

    std::vector<int> table_;
    std::vector<int> inverse_;
};

/// Row-major index of grid cell (i, j) in an array of width n2.
/// j is range-checked here; i is checked against n1 where n1 is known.
int grid_to_index(int i, int j, int n2);

/// Inverse of grid_to_index.
std::pair<int, int> index_to_grid(int x, int n2);

/// The interleaver pi(phi(i,j)) = phi((i + X_j) mod n1, sigma(j)),
/// materialized as an explicit table.
Permutation build_qc_permutation(const QcSpec& spec);

/// True iff pi(x + n2 mod N) = pi(x) + n2 mod N for every x.
/// n2 must divide the permutation size.
bool is_quasi_cyclic(const Permutation& perm, int n2);

/// Smallest proper divisor n2 of N (1 <= n2 < N) that is a quasi-cyclic
/// period, or nullopt if none is.
std::optional<int> detect_qc_period(const Permutation& perm);

/// Uniform sigma (Fisher-Yates) and i.i.d. uniform shifts; deterministic
/// given the seed. sigma is drawn first, then X_0..X_{n2-1}.
QcSpec sample_qc(int n1, int n2, std::uint64_t seed);

/// Uniform random permutation on {0..n-1}, deterministic given the seed.
Permutation sample_uniform(int n, std::uint64_t seed);

/// Random permutation satisfying |pi(i)-pi(j)| > S for all |i-j| < S,
/// built by randomized sequential fill; up to max_attempts restarts, then
/// ConstructionError. Practical guidance: S around sqrt(N/2).
Permutation sample_s_random(int n, int S, std::uint64_t seed, int max_attempts = 100);

/// min over i != j of |i-j| + |pi(i)-pi(j)|; requires n >= 2.
int spread(const Permutation& perm);

/// Interleaver text files.
///   "qc n1 n2" / sigma line / shifts line        (compact form)
///   "table N"  / table line                      (explicit form)
/// Integers separated by single spaces, one trailing newline per line.
struct InterleaverFile {
    std::optional<QcSpec> spec;  // present for the compact form
    Permutation perm;            // always materialized

    bool is_qc_form() const { return spec.has_value(); }
    /// Payload integers: 2*n2 for the compact form, N for a table.
    int storage_integers() const;
};

void save_qc_spec(const QcSpec& spec, const std::string& path);
void save_table(const Permutation& perm, const std::string& path);
InterleaverFile load_interleaver(const std::string& path);

} // namespace qcturbo
