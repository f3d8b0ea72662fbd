#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qtsp/encode.hpp"
#include "qtsp/instance.hpp"

namespace qtsp {

// Linear constraint over the unified variable space: x_ij edge variables
// first (indices [0, n(n-1))), then the MTZ order variables u_i.
struct LinearConstraint {
    enum class Rel { Le, Eq, Ge };
    std::vector<std::pair<int, double>> coeffs;
    Rel rel = Rel::Eq;
    double rhs = 0.0;
    std::string label;
};

// Integer-programming view of the TSP: edge binaries x_ij (i != j), and for
// MTZ the order variables u_i in [2, n] for every non-anchor city.
struct IlpModel {
    enum class Formulation { Mtz, Dfj };

    Formulation formulation = Formulation::Mtz;
    int n = 0;
    std::vector<double> objective;  // over x variables
    std::vector<LinearConstraint> constraints;
    std::vector<std::pair<int, int>> u_bounds;  // [lo, hi] per u variable

    // x_ij for i != j, row-major with the diagonal skipped.
    int x_index(int i, int j) const;
    std::pair<int, int> x_edge(int index) const;
    int num_x() const { return n * (n - 1); }
    // u variables exist for cities 1..n-1 (city 0 is the anchor, the paper's
    // city 1); u_index(city) is an index into the unified space.
    int num_u() const { return formulation == Formulation::Mtz ? n - 1 : 0; }
    int u_index(int city) const { return num_x() + (city - 1); }
    int num_vars() const { return num_x() + num_u(); }

    // Human-readable LP-style text (objective, constraints, bounds).
    std::string to_lp_text() const;
};

// min sum c_ij x_ij with degree constraints and the order-variable subtour
// cuts u_j - u_i >= 1 - (n-1)(1 - x_ij) over non-anchor city pairs. n >= 3.
IlpModel build_mtz(const TspInstance& inst);

// Degree constraints plus subtour-elimination cuts
// sum_{i,j in S} x_ij <= |S|-1 for every proper subset with 2 <= |S| <=
// max_subset. The enumeration budget caps at n <= 12 for max_subset = n-1.
IlpModel build_dfj(const TspInstance& inst, int max_subset);

struct IlpViolation {
    enum class Kind { Constraint, Bound, Subtour };
    Kind kind = Kind::Constraint;
    int index = -1;              // constraint or u-variable index
    std::vector<int> cycle;      // certifying cycle for subtour reports
    std::string text;
};

// Evaluates every constraint. For MTZ without a supplied u, a witness is
// derived from the successor chain out of the anchor; subtours that make no
// witness possible are reported directly with their certifying cycle.
// Violations are data, not errors.
std::vector<IlpViolation> check_feasible(const IlpModel& model, std::span<const std::uint8_t> x,
                                         const std::vector<int>* u = nullptr);

// Follows successors from the anchor; null unless x encodes one Hamiltonian
// cycle through city 0.
std::optional<Tour> tour_from_x(const IlpModel& model, std::span<const std::uint8_t> x);

// Edge binaries of a tour in the model's x layout.
std::vector<std::uint8_t> x_from_tour(const IlpModel& model, const Tour& tour);

// Penalty-form polynomial E = sum C_i x_i + sum J_ij x_i x_j + offset over
// binaries only. MTZ u variables are one-hot encoded over {2..n}; inequality
// constraints get one-hot integer slacks sized to the feasible range; every
// constraint is squared and weighted by `penalty`.
struct PolyObjective {
    int num_vars = 0;
    std::vector<double> linear;
    std::vector<double> quad;  // dense symmetric, zero diagonal
    double offset = 0.0;

    // layout: [x vars][u one-hot blocks][slack one-hot blocks]
    int num_x = 0;
    int num_u = 0;
    int u_block_start = 0;
    int u_slots = 0;  // one-hot width per u variable (values 2..n)

    double energy(std::span<const std::uint8_t> bits) const;
};

PolyObjective to_polynomial(const IlpModel& model, double penalty);

// Spin-model view of the polynomial for the annealing backend.
IsingModel poly_to_ising(const PolyObjective& poly);

}  // namespace qtsp
