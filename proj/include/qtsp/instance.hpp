#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qtsp {

// Complete distance matrix over n cities. Entries are nonnegative, the
// diagonal is zero, and asymmetric matrices are allowed (directed edges).
// Immutable after construction and safe to share across threads.
class TspInstance {
public:
    // Validates invariants: n >= 2, square, nonnegative, zero diagonal.
    TspInstance(int n, std::vector<double> dist);

    int n() const { return n_; }
    double dist(int i, int j) const { return dist_[static_cast<std::size_t>(i) * n_ + j]; }
    bool directed() const { return directed_; }
    const std::vector<double>& raw() const { return dist_; }

    // Max / min over off-diagonal entries.
    double max_offdiag() const;
    double min_offdiag() const;

    std::string to_json() const;
    std::string to_csv() const;

    bool operator==(const TspInstance& other) const {
        return n_ == other.n_ && dist_ == other.dist_;
    }

private:
    int n_;
    std::vector<double> dist_;
    bool directed_;
};

// Parses either the JSON format {"n": int, "dist": [[...], ...]} or the
// headerless CSV format (n rows of n comma-separated numbers). The format is
// sniffed from the first non-space character.
TspInstance load_instance(const std::string& text);

// Symmetric random instance with off-diagonal entries uniform in [lo, hi).
// Deterministic for a fixed seed.
TspInstance random_instance(int n, std::uint64_t seed, double lo, double hi);

struct NormalizationRecord {
    enum class Method { MinMax };
    double d_min = 0.0;
    double d_max = 1.0;
    Method method = Method::MinMax;

    // Inverts the normalization for an accumulated cost over `legs` edges:
    // raw = legs * d_min + (d_max - d_min) * normalized.
    double denormalize_cost(double normalized_cost, int legs) const {
        return legs * d_min + (d_max - d_min) * normalized_cost;
    }
};

// Min-max rescaling of the off-diagonal entries into [0, 1]; the diagonal
// stays zero. Throws if the off-diagonal entries are all equal.
std::pair<TspInstance, NormalizationRecord> normalize_minmax(const TspInstance& inst);

// Number of distinct undirected Hamiltonian cycles, (n-1)!/2, for n >= 3.
// 128-bit result; throws std::overflow_error instead of wrapping.
unsigned __int128 path_count(int n);

std::string u128_to_string(unsigned __int128 v);

}  // namespace qtsp
