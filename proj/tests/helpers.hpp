#pragma once

// Shared test fixtures and independent reference implementations. Everything
// here recomputes expected values from first principles so the library paths
// under test are never their own oracle.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qtsp/encode.hpp"
#include "qtsp/instance.hpp"

namespace qtsp::testing {

// The 3-city matrix used across the examples: triangle 0-1-2 costs 1+3+2=6.
inline TspInstance triangle_instance() {
    return TspInstance(3, {0, 1, 2, 1, 0, 3, 2, 3, 0});
}

// Direct evaluation of the step/city grid Hamiltonian
//   sum_{k != l} sum_i W_kl a[i][k] a[i+1][l]
//   + gamma * (row one-hot squares + column one-hot squares)
// from the bit grid itself; independent of QuboModel.
inline double sa_form_energy_direct(const TspInstance& inst, double gamma,
                                    const std::vector<std::uint8_t>& a) {
    int n = inst.n();
    auto at = [&](int step, int city) { return a[step * n + city]; };
    double obj = 0.0;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            if (k == l) continue;
            for (int i = 0; i < n; ++i) obj += inst.dist(k, l) * at(i, k) * at((i + 1) % n, l);
        }
    double cons = 0.0;
    for (int i = 0; i < n; ++i) {
        int sum = 0;
        for (int k = 0; k < n; ++k) sum += at(i, k);
        cons += (sum - 1.0) * (sum - 1.0);
    }
    for (int k = 0; k < n; ++k) {
        int sum = 0;
        for (int i = 0; i < n; ++i) sum += at(i, k);
        cons += (sum - 1.0) * (sum - 1.0);
    }
    return obj + gamma * cons;
}

// Direct evaluation of the boundary-pinned formulation over the full
// (N+1)x(N+1) cell grid (cell = t*(N+1) + i, city N aliasing city 0).
inline double dwave_form_energy_direct(const TspInstance& inst, double lambda,
                                       const std::vector<std::uint8_t>& cells) {
    int n = inst.n();
    int m = n + 1;
    auto at = [&](int t, int i) { return cells[t * m + i]; };
    auto d = [&](int i, int j) { return inst.dist(i == n ? 0 : i, j == n ? 0 : j); };
    double tour = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int t = 0; t < n; ++t) tour += d(i, j) * at(t, i) * at(t + 1, j);
    double cons = 0.0;
    for (int i = 0; i < m; ++i) {
        int sum = 0;
        for (int t = 0; t < m; ++t) sum += at(t, i);
        cons += (sum - 1.0) * (sum - 1.0);
    }
    for (int t = 0; t < m; ++t) {
        int sum = 0;
        for (int i = 0; i < m; ++i) sum += at(t, i);
        cons += (sum - 1.0) * (sum - 1.0);
    }
    return tour + lambda * cons;
}

// Is the (steps x cities) bit grid a permutation matrix?
inline bool is_permutation_grid(const std::vector<std::uint8_t>& a, int steps, int cities) {
    for (int t = 0; t < steps; ++t) {
        int sum = 0;
        for (int k = 0; k < cities; ++k) sum += a[t * cities + k];
        if (sum != 1) return false;
    }
    for (int k = 0; k < cities; ++k) {
        int sum = 0;
        for (int t = 0; t < steps; ++t) sum += a[t * cities + k];
        if (sum != 1) return false;
    }
    return true;
}

// One-hot grid of a visiting order, row = step, col = city.
inline std::vector<std::uint8_t> grid_from_tour(const Tour& tour) {
    int n = tour.n();
    std::vector<std::uint8_t> a(n * n, 0);
    for (int t = 0; t < n; ++t) a[t * n + tour.order[t]] = 1;
    return a;
}

// Naive O(d^2) inverse-QFT reference: X_j = 2^{-w/2} sum_k x_k e^{-2pi i jk/d}.
inline std::vector<std::complex<double>> naive_inverse_qft(
    const std::vector<std::complex<double>>& x) {
    std::size_t d = x.size();
    std::vector<std::complex<double>> out(d);
    for (std::size_t j = 0; j < d; ++j) {
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < d; ++k)
            acc += x[k] * std::polar(1.0, -2.0 * std::numbers::pi * double(j) * double(k) /
                                              static_cast<double>(d));
        out[j] = acc / std::sqrt(static_cast<double>(d));
    }
    return out;
}

}  // namespace qtsp::testing
