#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtsp/encode.hpp"
#include "qtsp/gatesim.hpp"
#include "qtsp/instance.hpp"

namespace qtsp {

// Exhaustive table of the QUBO objective over all basis states:
// energies[z] is the energy of the binary vector read from z's bits
// (variable i = bit i).
struct CostDiagonal {
    int num_qubits = 0;
    std::vector<double> energies;
};

CostDiagonal build_cost_diagonal(const QuboModel& q);

// Variational parameters. Canonical: p cost angles followed by p mixer
// angles. HardwareEfficient: layers x num_qubits rotation angles, row-major
// by layer.
struct AnsatzParams {
    enum class Kind { Canonical, HardwareEfficient };
    Kind kind = Kind::Canonical;
    int depth = 0;  // p for canonical, layer count for hardware-efficient
    std::vector<double> values;

    static AnsatzParams canonical(std::vector<double> gammas, std::vector<double> betas);
    static AnsatzParams hardware_efficient(int layers, std::vector<double> thetas);
    int expected_size(int num_qubits) const;
};

// Canonical: uniform superposition, then p rounds of the cost phase
// exp(-i*gamma_j*H_C) and the transverse mixer exp(-i*beta_j*X) per qubit.
// HardwareEfficient: |0..0> through RY layers joined by a linear CNOT chain.
StateVector evolve_ansatz(const CostDiagonal& cost, const AnsatzParams& params);

// <H_C> = sum_z |amp_z|^2 * energies[z].
double expectation(const CostDiagonal& cost, const StateVector& state);

struct OptimTrace {
    std::vector<std::pair<std::vector<double>, double>> iterations;
    int best = 0;  // index of the minimal recorded objective

    std::string to_csv() const;  // iteration,objective
};

// Derivative-free minimization of expectation(evolve_ansatz(.)) under an
// evaluation budget: downhill simplex with seeded random restarts.
// Deterministic per seed; the trace records every evaluation.
std::pair<AnsatzParams, OptimTrace> optimize(const CostDiagonal& cost, const AnsatzParams& init,
                                             int budget, std::uint64_t seed);

struct QaoaResult {
    std::optional<Tour> tour;       // null when no sampled string decodes
    double cost = 0.0;              // tour cost when feasible
    std::string best_bitstring;     // most frequent feasible sample
    double optimized_expectation = 0.0;
    AnsatzParams params;
    OptimTrace trace;
};

// End-to-end pipeline on the n^2-qubit one-hot encoding (n <= 4): build the
// SA-form QUBO, optimize the ansatz, sample `shots` measurements from the
// optimized state, decode the most frequent feasible bitstring.
QaoaResult qaoa_solve(const TspInstance& inst, AnsatzParams::Kind kind, int depth,
                      std::int64_t shots, std::uint64_t seed, int budget = 500);

}  // namespace qtsp
