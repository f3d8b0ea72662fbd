#include "qtsp/qaoa.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qtsp/nelder_mead.hpp"
#include "qtsp/rng.hpp"

namespace qtsp {

CostDiagonal build_cost_diagonal(const QuboModel& q) {
    int nv = q.num_vars();
    if (nv > 20) throw std::invalid_argument("cost diagonal capped at 20 variables");
    CostDiagonal cost;
    cost.num_qubits = nv;
    std::uint64_t dim = std::uint64_t{1} << nv;
    cost.energies.resize(dim);
    std::vector<std::uint8_t> x(nv);
    for (std::uint64_t z = 0; z < dim; ++z) {
        for (int i = 0; i < nv; ++i) x[i] = (z >> i) & 1;
        cost.energies[z] = q.energy(x);
    }
    return cost;
}

AnsatzParams AnsatzParams::canonical(std::vector<double> gammas, std::vector<double> betas) {
    if (gammas.size() != betas.size())
        throw std::invalid_argument("canonical ansatz needs matching gamma/beta counts");
    AnsatzParams p;
    p.kind = Kind::Canonical;
    p.depth = static_cast<int>(gammas.size());
    p.values = std::move(gammas);
    p.values.insert(p.values.end(), betas.begin(), betas.end());
    return p;
}

AnsatzParams AnsatzParams::hardware_efficient(int layers, std::vector<double> thetas) {
    AnsatzParams p;
    p.kind = Kind::HardwareEfficient;
    p.depth = layers;
    p.values = std::move(thetas);
    return p;
}

int AnsatzParams::expected_size(int num_qubits) const {
    return kind == Kind::Canonical ? 2 * depth : depth * num_qubits;
}

StateVector evolve_ansatz(const CostDiagonal& cost, const AnsatzParams& params) {
    int q = cost.num_qubits;
    if (static_cast<int>(params.values.size()) != params.expected_size(q))
        throw std::invalid_argument("parameter vector length does not match the ansatz");

    if (params.kind == AnsatzParams::Kind::Canonical) {
        StateVector state(q);
        for (int i = 0; i < q; ++i) state.apply(GateSpec::h(i));
        for (int layer = 0; layer < params.depth; ++layer) {
            double gamma = params.values[layer];
            double beta = params.values[params.depth + layer];
            std::vector<double> phases(cost.energies.size());
            for (std::size_t z = 0; z < phases.size(); ++z) phases[z] = -gamma * cost.energies[z];
            state.apply(GateSpec::diagonal_phase(0, q, std::move(phases)));
            for (int i = 0; i < q; ++i) state.apply(GateSpec::rx(i, 2.0 * beta));
        }
        return state;
    }

    StateVector state(q);  // |0...0>
    for (int layer = 0; layer < params.depth; ++layer) {
        for (int i = 0; i < q; ++i)
            state.apply(GateSpec::ry(i, params.values[static_cast<std::size_t>(layer) * q + i]));
        for (int i = 0; i + 1 < q; ++i) state.apply(GateSpec::cnot(i, i + 1));
    }
    return state;
}

double expectation(const CostDiagonal& cost, const StateVector& state) {
    if (state.num_qubits() != cost.num_qubits)
        throw std::invalid_argument("state dimension does not match cost diagonal");
    const auto& amps = state.amps();
    double acc = 0.0;
    for (std::size_t z = 0; z < amps.size(); ++z) acc += std::norm(amps[z]) * cost.energies[z];
    return acc;
}

std::pair<AnsatzParams, OptimTrace> optimize(const CostDiagonal& cost, const AnsatzParams& init,
                                             int budget, std::uint64_t seed) {
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    int q = cost.num_qubits;
    if (static_cast<int>(init.values.size()) != init.expected_size(q))
        throw std::invalid_argument("parameter vector length does not match the ansatz");

    OptimTrace trace;
    auto objective = [&](const std::vector<double>& values) {
        AnsatzParams p = init;
        p.values = values;
        return expectation(cost, evolve_ansatz(cost, p));
    };
    auto record = [&](const std::vector<double>& values, double f) {
        if (trace.iterations.empty() || f < trace.iterations[trace.best].second)
            trace.best = static_cast<int>(trace.iterations.size());
        trace.iterations.emplace_back(values, f);
    };

    NelderMead solver(objective, record, budget);
    solver.run(init.values, 0.4);

    Rng rng(seed);
    while (solver.remaining() > 0) {
        std::vector<double> start(init.values.size());
        for (double& v : start) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
        solver.run(start, 0.4);
    }

    AnsatzParams best = init;
    best.values = trace.iterations[trace.best].first;
    return {std::move(best), std::move(trace)};
}

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string OptimTrace::to_csv() const {
    std::string out = "iteration,objective\n";
    for (std::size_t i = 0; i < iterations.size(); ++i)
        out += std::to_string(i) + "," + format_double(iterations[i].second) + "\n";
    return out;
}

QaoaResult qaoa_solve(const TspInstance& inst, AnsatzParams::Kind kind, int depth,
                      std::int64_t shots, std::uint64_t seed, int budget) {
    int n = inst.n();
    if (n > 4) throw std::invalid_argument("qaoa_solve capped at n <= 4 (n^2 qubits)");

    QuboModel qubo = build_qubo_sa_form(inst, default_penalty(inst));
    CostDiagonal cost = build_cost_diagonal(qubo);
    int q = cost.num_qubits;

    AnsatzParams init;
    Rng rng(derive_seed(seed, {0xa05a}));
    if (kind == AnsatzParams::Kind::Canonical) {
        std::vector<double> gammas(depth), betas(depth);
        for (double& g : gammas) g = rng.uniform(0.0, 2.0 * std::numbers::pi);
        for (double& b : betas) b = rng.uniform(0.0, 2.0 * std::numbers::pi);
        init = AnsatzParams::canonical(std::move(gammas), std::move(betas));
    } else {
        std::vector<double> thetas(static_cast<std::size_t>(depth) * q);
        for (double& t : thetas) t = rng.uniform(0.0, 2.0 * std::numbers::pi);
        init = AnsatzParams::hardware_efficient(depth, std::move(thetas));
    }

    QaoaResult result;
    if (depth == 0) {
        result.params = init;
        result.trace.iterations.emplace_back(init.values,
                                             expectation(cost, evolve_ansatz(cost, init)));
    } else {
        auto [params, trace] = optimize(cost, init, budget, derive_seed(seed, {0x0b7}));
        result.params = std::move(params);
        result.trace = std::move(trace);
    }
    StateVector state = evolve_ansatz(cost, result.params);
    result.optimized_expectation = expectation(cost, state);

    Histogram hist = measure(state, shots, derive_seed(seed, {0x5806}));

    // most frequent feasible bitstring; map iteration order breaks count ties
    // toward the lexicographically smallest string
    std::int64_t best_count = -1;
    for (const auto& [key, count] : hist.counts) {
        if (count <= best_count) continue;
        std::vector<std::uint8_t> x(q);
        for (int i = 0; i < q; ++i) x[i] = key[key.size() - 1 - i] == '1';
        DecodeReport report = decode_assignment(qubo, x);
        if (!report.feasible) continue;
        best_count = count;
        result.best_bitstring = key;
        result.tour = report.tour;
    }
    if (result.tour) result.cost = tour_cost(inst, *result.tour);
    return result;
}

}  // namespace qtsp
