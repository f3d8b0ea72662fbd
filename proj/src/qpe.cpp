#include "qtsp/qpe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "qtsp/rng.hpp"

namespace qtsp {

PhaseMatrix build_phase_matrix(const TspInstance& inst) {
    auto [normalized, record] = normalize_minmax(inst);
    int n = inst.n();
    PhaseMatrix pm;
    pm.n = n;
    pm.norm = record;
    pm.phi.resize(static_cast<std::size_t>(n) * n);
    double scale = 2.0 * std::numbers::pi / n;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            pm.phi[static_cast<std::size_t>(j) * n + k] = scale * normalized.dist(j, k);
    return pm;
}

int bits_per_city(int n) {
    int b = 1;
    while ((1 << b) < n) ++b;
    return b;
}

std::uint64_t build_tour_eigenstate(const Tour& tour) {
    int n = tour.n();
    if (!is_valid_tour(tour, n)) throw std::invalid_argument("invalid tour");
    int b = bits_per_city(n);
    std::uint64_t index = 0;
    for (int s = 0; s < n; ++s) {
        std::uint64_t value = static_cast<std::uint64_t>(tour.order[(s - 1 + n) % n]);
        // slot 0 is printed leftmost, i.e. occupies the highest qubits
        index |= value << ((n - 1 - s) * b);
    }
    return index;
}

double tour_eigenphase(const PhaseMatrix& pm, const Tour& tour) {
    int n = tour.n();
    if (n != pm.n) throw std::invalid_argument("tour does not match phase matrix");
    double total = 0.0;
    for (int t = 0; t < n; ++t) total += pm.at(tour.order[t], tour.order[(t + 1) % n]);
    double theta = total / (2.0 * std::numbers::pi);
    return theta - std::floor(theta);
}

namespace {

// Diagonal factor acting on slot s: phases indexed by the slot's city value,
// column order[s] of the phase matrix. On the eigenstate (slot s holds
// order[s-1]) this contributes the phase of edge order[s-1] -> order[s].
std::vector<double> slot_phase_table(const PhaseMatrix& pm, int dest_city, int b) {
    std::vector<double> phases(std::size_t{1} << b, 0.0);
    for (int k = 0; k < pm.n; ++k) phases[k] = pm.at(k, dest_city);
    return phases;
}

}  // namespace

QpeOutcome run_qpe(const TspInstance& inst, const Tour& tour, int m, std::int64_t shots,
                   std::uint64_t seed) {
    if (m < 1 || m > 12) throw std::invalid_argument("precision qubits must be in [1, 12]");
    int n = inst.n();
    if (!is_valid_tour(tour, n)) throw std::invalid_argument("invalid tour");
    int b = bits_per_city(n);
    int lower = n * b;
    int total = lower + m;
    if (total > 22)
        throw std::invalid_argument("qubit budget exceeded: needs " + std::to_string(total));

    PhaseMatrix pm = build_phase_matrix(inst);

    StateVector state = StateVector::basis(total, build_tour_eigenstate(tour));
    for (int j = 0; j < m; ++j) state.apply(GateSpec::h(lower + j));

    for (int j = 0; j < m; ++j) {
        std::uint64_t power = std::uint64_t{1} << j;
        for (int s = 0; s < n; ++s) {
            int slot_start = (n - 1 - s) * b;
            state.apply(GateSpec::controlled_diagonal_power(
                lower + j, slot_start, b, slot_phase_table(pm, tour.order[s], b), power));
        }
    }

    state.apply(GateSpec::inverse_qft(lower, m));

    Histogram full = measure(state, shots, seed);

    QpeOutcome outcome;
    outcome.histogram.shots = full.shots;
    // precision qubits are the highest indices: the first m bitstring chars
    for (const auto& [key, count] : full.counts)
        outcome.histogram.counts[key.substr(0, m)] += count;

    std::int64_t best_count = -1;
    for (const auto& [key, count] : outcome.histogram.counts) {
        if (count > best_count) {
            best_count = count;
            outcome.j_hat = static_cast<int>(std::stoul(key, nullptr, 2));
        }
    }
    outcome.theta_hat = static_cast<double>(outcome.j_hat) / static_cast<double>(1 << m);
    outcome.raw_phase = outcome.theta_hat * 2.0 * std::numbers::pi;
    outcome.est_cost = pm.norm.denormalize_cost(outcome.theta_hat * n, n);
    return outcome;
}

std::pair<Tour, double> qpe_search(const TspInstance& inst, int m, std::int64_t shots,
                                   std::uint64_t seed) {
    int n = inst.n();
    if (n > 6) throw std::invalid_argument("qpe_search capped at n <= 6");

    std::vector<int> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 1);

    Tour best_tour;
    double best_cost = 0.0;
    bool first = true;
    std::uint64_t tour_index = 0;
    do {
        Tour tour;
        tour.order.resize(n);
        tour.order[0] = 0;
        std::copy(rest.begin(), rest.end(), tour.order.begin() + 1);
        QpeOutcome outcome =
            run_qpe(inst, tour, m, shots, derive_seed(seed, {tour_index++}));
        // strict improvement keeps the lexicographically smallest tour on ties
        if (first || outcome.est_cost < best_cost) {
            first = false;
            best_cost = outcome.est_cost;
            best_tour = std::move(tour);
        }
    } while (std::next_permutation(rest.begin(), rest.end()));

    return {best_tour, best_cost};
}

}  // namespace qtsp
