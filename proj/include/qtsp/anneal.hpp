#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qtsp/encode.hpp"

namespace qtsp {

// Inverse-temperature ramp for the Metropolis sampler.
struct Schedule {
    enum class Kind { Geometric, Linear };
    Kind kind = Kind::Geometric;
    double beta_start = 0.1;
    double beta_end = 50.0;
    int sweeps = 1000;

    double beta_at(int sweep) const;
};

// Schedule derived from the model's own energy scale: beta_start targets
// ~90% acceptance on a typical flip, beta_end freezes the smallest nonzero
// move. sweeps = 1000 * num_spins.
Schedule default_schedule(const IsingModel& model);

struct AnnealResult {
    std::vector<std::int8_t> spins;  // best-seen configuration, not the last
    double energy = 0.0;
    std::vector<double> trace;       // best energy after each sweep; non-increasing
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
};

// Single Metropolis run. Every sweep proposes each spin once in a freshly
// randomized order; a flip is accepted when dE <= 0, otherwise with
// probability exp(-beta * dE). Deterministic for a fixed seed.
AnnealResult anneal(const IsingModel& model, const Schedule& sched, std::uint64_t seed);

// Energy change of flipping spin i, O(n) via row i of J.
double delta_energy(const IsingModel& model, std::span<const std::int8_t> spins, int i);

struct SampleSet {
    std::vector<AnnealResult> results;
    std::vector<std::optional<Tour>> tours;  // decoded per run, null if infeasible
    int feasible_count = 0;
    std::optional<int> best;  // index of the minimum-energy feasible result
};

// `runs` independent anneals with per-run derived seeds; each result is
// decoded through `qubo`'s grid for feasibility counting. Runs execute in
// parallel when threads > 1; output is independent of the thread count.
SampleSet sample(const IsingModel& model, const QuboModel& qubo, const Schedule& sched, int runs,
                 std::uint64_t seed, int threads = 1);

// One JSON object per line:
// {"seed":...,"energy":...,"feasible":...,"tour":[...]|null,"wall_ms":...}
std::string sample_set_to_jsonl(const SampleSet& set, bool include_timings = false);

}  // namespace qtsp
