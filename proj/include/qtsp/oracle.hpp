#pragma once

#include <cstdint>

#include "qtsp/encode.hpp"
#include "qtsp/instance.hpp"

namespace qtsp {

// Exact classical reference solvers used to verify every other pipeline.
struct OracleResult {
    enum class Method { BruteForce, HeldKarp };
    Tour tour;
    double cost = 0.0;
    Method method = Method::BruteForce;
    std::uint64_t explored = 0;  // permutations or DP states visited
};

// Enumerates all (n-1)! tours anchored at city 0; ties broken
// lexicographically. n <= 10.
OracleResult brute_force(const TspInstance& inst);

// Subset DP over (visited set, last city) states with backtracking, n <= 18.
// Costs agree exactly with brute_force on oracle-verifiable sizes.
OracleResult held_karp(const TspInstance& inst);

}  // namespace qtsp
