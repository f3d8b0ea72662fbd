#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtsp/instance.hpp"

namespace qtsp {

enum class Backend { Sa, Qaoa, Qpe, IlpAnneal, BruteForce, HeldKarp };

std::string backend_name(Backend b);
Backend backend_from_name(const std::string& name);

struct BenchRecord {
    Backend backend = Backend::Sa;
    int n = 0;
    int trial = 0;
    bool normalized = false;
    bool feasible = false;
    std::optional<double> cost;
    std::optional<double> optimum;       // oracle value when n <= 10
    std::optional<double> approx_ratio;  // cost / optimum, >= 1
    double wall_ms = 0.0;
    std::uint64_t seed = 0;
};

struct CurveFit {
    enum class Family { Exponential, PowerLaw };  // a*b^n vs a*n^k
    Family family = Family::Exponential;
    double a = 0.0;
    double b_or_k = 0.0;
    double r2 = 0.0;
};

// Solver knobs shared by the studies. Zeros mean "use the backend default".
struct StudyConfig {
    double lo = 1.0;
    double hi = 10.0;
    int sweeps = 0;        // SA schedule override
    int runs = 1;          // SA restarts per solve
    double penalty = 0.0;  // gamma / lambda / ILP penalty override
    int qaoa_depth = 2;
    int qpe_precision = 8;
    std::int64_t shots = 2048;
    int budget = 500;
    int threads = 1;
};

// One solve of one instance; the timing covers the solve call only.
struct SolveOutcome {
    bool feasible = false;
    std::optional<double> cost;
    double wall_ms = 0.0;
};
SolveOutcome solve_once(Backend backend, const TspInstance& inst, const StudyConfig& cfg,
                        std::uint64_t seed);

// Per (size, trial): seeded random instance, optional min-max normalization,
// solve, feasibility record. The violation probability of a size is
// 1 - feasible fraction. Instances depend only on (seed, n, trial), so the
// normalized and raw arms see identical inputs.
//
// The penalty here defaults to n (exact for unit-scale entries) instead of
// the scale-tracking n*max(d); feasibility of the raw arm is the thing under
// study.
std::vector<BenchRecord> violation_study(Backend backend, const std::vector<int>& sizes,
                                         int trials, bool normalized, std::uint64_t seed,
                                         const StudyConfig& cfg = {});

// Wall-time per solve with both families fitted on log-time; the better r2
// wins. Requires at least 3 distinct sizes.
std::pair<std::vector<BenchRecord>, CurveFit> runtime_study(Backend backend,
                                                            const std::vector<int>& sizes,
                                                            int trials, std::uint64_t seed,
                                                            const StudyConfig& cfg = {});

// Adds the oracle optimum and approx_ratio to every record; sizes <= 10.
std::vector<BenchRecord> quality_study(Backend backend, const std::vector<int>& sizes, int trials,
                                       std::uint64_t seed, const StudyConfig& cfg = {});

// Least squares on log-transformed (n, value) pairs for both families.
CurveFit fit_curve(const std::vector<std::pair<double, double>>& points);

enum class ReportFormat { Csv, Json, Svg };

// CSV header: backend,n,trial,seed,normalized,feasible,cost,optimum,approx_ratio,wall_ms
std::string emit_report(const std::vector<BenchRecord>& records,
                        const std::vector<CurveFit>& fits, ReportFormat format,
                        bool include_timings = true);

std::vector<BenchRecord> records_from_csv(const std::string& text);

}  // namespace qtsp
