#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qtsp/instance.hpp"

namespace qtsp {

// A visiting order of cities; tours are closed (Hamilton cycles), the return
// leg to order[0] is implicit.
struct Tour {
    std::vector<int> order;

    int n() const { return static_cast<int>(order.size()); }
    bool operator==(const Tour& other) const { return order == other.order; }
    bool operator<(const Tour& other) const { return order < other.order; }
};

// Sum of traversed edges including the closing leg.
double tour_cost(const TspInstance& inst, const Tour& tour);

// Checks that `order` is a permutation of 0..n-1.
bool is_valid_tour(const Tour& tour, int n);

// Maps grid cells (step t, city k) onto flat variable indices. Cells pinned
// by boundary conditions carry no variable; their values live in `fixed`.
struct VarGrid {
    int steps = 0;
    int cities = 0;
    std::vector<int> var_of_cell;      // steps*cities entries; -1 when fixed
    std::vector<int> cell_of_var;      // one cell per variable
    std::map<int, int> fixed;          // cell index -> pinned value {0,1}

    int cell(int t, int k) const { return t * cities + k; }
    int var(int t, int k) const { return var_of_cell[cell(t, k)]; }
    int num_vars() const { return static_cast<int>(cell_of_var.size()); }
};

// Quadratic binary model, E(x) = x^T Q x + offset, minimized. Q is stored
// dense and symmetric: quadratic coefficients are split evenly across (i,j)
// and (j,i), linear coefficients sit on the diagonal.
class QuboModel {
public:
    QuboModel(int num_vars, double offset = 0.0);

    int num_vars() const { return num_vars_; }
    double offset() const { return offset_; }
    double q(int i, int j) const { return q_[static_cast<std::size_t>(i) * num_vars_ + j]; }

    // Adds c * x_i * x_j (i != j, split symmetrically) or c * x_i (i == j).
    void add_term(int i, int j, double c);
    void add_offset(double c) { offset_ += c; }

    double energy(std::span<const std::uint8_t> x) const;

    bool has_grid() const { return grid_.steps > 0; }
    const VarGrid& grid() const { return grid_; }
    void set_grid(VarGrid grid) { grid_ = std::move(grid); }

    double penalty_weight() const { return penalty_weight_; }
    void set_penalty_weight(double w) { penalty_weight_ = w; }

    // {"num_vars":int,"offset":real,"terms":[[i,j,coeff],...]} with i <= j;
    // the coefficient of an (i,j) pair is the full product coefficient.
    std::string to_json() const;
    static QuboModel from_json(const std::string& text);

private:
    int num_vars_;
    std::vector<double> q_;
    double offset_;
    VarGrid grid_;
    double penalty_weight_ = 0.0;
};

// Spin model, E(s) = s^T J s + h^T s + offset over s in {-1,+1}^n, minimized.
// J is symmetric with zero diagonal.
struct IsingModel {
    int num_spins = 0;
    std::vector<double> j;  // dense num_spins^2, symmetric, zero diagonal
    std::vector<double> h;
    double offset = 0.0;

    double coupling(int a, int b) const { return j[static_cast<std::size_t>(a) * num_spins + b]; }
    double energy(std::span<const std::int8_t> spins) const;
};

// Penalty weight that makes any single constraint violation cost more than
// any achievable tour improvement: n * max off-diagonal distance.
double default_penalty(const TspInstance& inst);

// n^2-variable model over a (step, city) grid with wraparound steps:
// H = sum_{k != l} sum_i W_kl a_{i,k} a_{i+1,l}
//   + gamma * [ sum_i (sum_k a_{i,k} - 1)^2 + sum_k (sum_i a_{i,k} - 1)^2 ].
QuboModel build_qubo_sa_form(const TspInstance& inst, double gamma);

// (N+1)x(N+1)-cell model with city N identified with city 0 and boundary
// pins x_{0,0} = x_{N,N} = 1 substituted into Q and the offset:
// H = sum_{i,j} d_ij sum_{t<N} x_{i,t} x_{j,t+1}
//   + lambda * [ per-city and per-step one-hot penalties over {0..N} ].
QuboModel build_qubo_dwave_form(const TspInstance& inst, double lambda);

// x_i = (1 + s_i)/2 substitution; energies match exactly for every binary
// vector and its spin image.
IsingModel qubo_to_ising(const QuboModel& q);

// One-hot feasibility report for a decoded grid assignment.
struct DecodeReport {
    std::optional<Tour> tour;
    std::vector<int> row_violations;  // steps whose city sum != 1
    std::vector<int> col_violations;  // cities whose step sum != 1
    bool feasible = false;
};

// Reshapes x through the model's grid (re-inserting pinned cells) and
// extracts the tour when every row and column sums to one. Infeasibility is
// data, not an error.
DecodeReport decode_assignment(const QuboModel& q, std::span<const std::uint8_t> x);

}  // namespace qtsp
