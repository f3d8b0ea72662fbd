#pragma once

#include <cstdint>
#include <utility>

#include "qtsp/encode.hpp"
#include "qtsp/gatesim.hpp"
#include "qtsp/instance.hpp"

namespace qtsp {

// Distance matrix mapped to Euler phases: phi[j][k] = 2*pi * d~[j][k] / n
// with d~ min-max normalized, so any n-leg tour accumulates < 2*pi total.
struct PhaseMatrix {
    int n = 0;
    std::vector<double> phi;  // row-major n*n
    NormalizationRecord norm;

    double at(int j, int k) const { return phi[static_cast<std::size_t>(j) * n + k]; }
};

PhaseMatrix build_phase_matrix(const TspInstance& inst);

// Bits per city slot in the cycle register.
int bits_per_city(int n);

// Basis index of the encoded cycle over n*bits_per_city(n) qubits. Slot s
// (slot 0 printed leftmost) holds the city visited one step earlier,
// order[(s-1) mod n], so consecutive slots spell the traversed edges.
std::uint64_t build_tour_eigenstate(const Tour& tour);

// Analytic eigenphase of the tour state in [0, 1): sum of traversed edge
// phases divided by 2*pi.
double tour_eigenphase(const PhaseMatrix& pm, const Tour& tour);

struct QpeOutcome {
    int j_hat = 0;               // most frequent precision-register readout
    double theta_hat = 0.0;      // j_hat / 2^m
    double raw_phase = 0.0;      // theta_hat * 2*pi
    double est_cost = 0.0;       // denormalized back to distance units
    Histogram histogram;         // precision-register bitstrings
};

// Full QPE round: cycle register prepared in the tour eigenstate, m-qubit
// precision register Hadamard-ed, controlled powers of the per-slot diagonal
// phases, inverse QFT, measurement. Requires m in [1,12] and
// m + n*bits_per_city(n) <= 22.
QpeOutcome run_qpe(const TspInstance& inst, const Tour& tour, int m, std::int64_t shots,
                   std::uint64_t seed);

// Evaluates every (n-1)! canonical tour through run_qpe and returns the
// argmin of est_cost; ties break toward the lexicographically smaller tour.
// n <= 6.
std::pair<Tour, double> qpe_search(const TspInstance& inst, int m, std::int64_t shots,
                                   std::uint64_t seed);

}  // namespace qtsp
