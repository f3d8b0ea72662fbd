#include "qtsp/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qtsp {

OracleResult brute_force(const TspInstance& inst) {
    int n = inst.n();
    if (n > 10) throw std::invalid_argument("brute_force capped at n <= 10");
    std::vector<int> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 1);

    OracleResult result;
    result.method = OracleResult::Method::BruteForce;
    Tour tour;
    tour.order.resize(n);
    tour.order[0] = 0;
    double best = std::numeric_limits<double>::infinity();
    Tour best_tour;
    do {
        std::copy(rest.begin(), rest.end(), tour.order.begin() + 1);
        double cost = tour_cost(inst, tour);
        ++result.explored;
        // next_permutation walks lexicographically, so strict improvement
        // keeps the lexicographically smallest tour among ties
        if (cost < best) {
            best = cost;
            best_tour = tour;
        }
    } while (std::next_permutation(rest.begin(), rest.end()));

    result.tour = std::move(best_tour);
    result.cost = best;
    return result;
}

OracleResult held_karp(const TspInstance& inst) {
    int n = inst.n();
    if (n > 18) throw std::invalid_argument("held_karp capped at n <= 18");

    OracleResult result;
    result.method = OracleResult::Method::HeldKarp;

    if (n == 2) {
        result.tour.order = {0, 1};
        result.cost = tour_cost(inst, result.tour);
        result.explored = 2;
        return result;
    }

    // dp[mask][last]: cheapest path 0 -> ... -> last visiting exactly the
    // cities of mask (over cities 1..n-1; bit k stands for city k+1)
    int rest = n - 1;
    std::size_t num_masks = std::size_t{1} << rest;
    const double inf = std::numeric_limits<double>::max();
    std::vector<double> dp(num_masks * rest, inf);
    std::vector<std::int16_t> parent(num_masks * rest, -1);
    auto at = [rest](std::size_t mask, int last) { return mask * rest + last; };

    for (int last = 0; last < rest; ++last) {
        dp[at(std::size_t{1} << last, last)] = inst.dist(0, last + 1);
        ++result.explored;
    }
    for (std::size_t mask = 1; mask < num_masks; ++mask) {
        for (int last = 0; last < rest; ++last) {
            if (!(mask & (std::size_t{1} << last))) continue;
            double base = dp[at(mask, last)];
            if (base == inf) continue;
            for (int next = 0; next < rest; ++next) {
                if (mask & (std::size_t{1} << next)) continue;
                std::size_t nmask = mask | (std::size_t{1} << next);
                double cand = base + inst.dist(last + 1, next + 1);
                if (cand < dp[at(nmask, next)]) {
                    dp[at(nmask, next)] = cand;
                    parent[at(nmask, next)] = static_cast<std::int16_t>(last);
                }
                ++result.explored;
            }
        }
    }

    std::size_t full = num_masks - 1;
    double best = inf;
    int best_last = -1;
    for (int last = 0; last < rest; ++last) {
        double cand = dp[at(full, last)] + inst.dist(last + 1, 0);
        if (cand < best) {
            best = cand;
            best_last = last;
        }
    }

    Tour tour;
    tour.order.resize(n);
    std::size_t mask = full;
    int last = best_last;
    for (int pos = n - 1; pos >= 1; --pos) {
        tour.order[pos] = last + 1;
        int prev = parent[at(mask, last)];
        mask &= ~(std::size_t{1} << last);
        last = prev;
    }
    tour.order[0] = 0;

    // Canonicalize against the reversed orientation so symmetric instances
    // report the same float cost as brute_force's lexicographic scan even
    // when the two orientations round differently.
    Tour reversed;
    reversed.order.resize(n);
    reversed.order[0] = 0;
    for (int i = 1; i < n; ++i) reversed.order[i] = tour.order[n - i];
    double cost_fwd = tour_cost(inst, tour);
    double cost_rev = tour_cost(inst, reversed);
    if (cost_rev < cost_fwd || (cost_rev == cost_fwd && reversed < tour)) {
        result.tour = std::move(reversed);
        result.cost = cost_rev;
    } else {
        result.tour = std::move(tour);
        result.cost = cost_fwd;
    }
    return result;
}

}  // namespace qtsp
