#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "qtsp/anneal.hpp"
#include "qtsp/ilp.hpp"
#include "qtsp/oracle.hpp"
#include "qtsp/rng.hpp"

using namespace qtsp;
using namespace qtsp::testing;

namespace {

std::vector<std::uint8_t> x_of_mask(const IlpModel& model, std::uint32_t mask) {
    std::vector<std::uint8_t> x(model.num_x());
    for (int v = 0; v < model.num_x(); ++v) x[v] = (mask >> v) & 1;
    return x;
}

// greedy per-constraint slack completion: the cheapest way to finish a
// partial (x, u) assignment into the polynomial's binary space
std::vector<std::uint8_t> poly_bits(const IlpModel& model, const PolyObjective& poly,
                                    const std::vector<std::uint8_t>& x,
                                    const std::vector<int>& u) {
    std::vector<std::uint8_t> bits(poly.num_vars, 0);
    std::copy(x.begin(), x.end(), bits.begin());
    for (int uv = 0; uv < poly.num_u; ++uv)
        bits[poly.u_block_start + uv * poly.u_slots + (u[uv] - 2)] = 1;
    // slack blocks sit after the u blocks; choose each block's best slot
    int slack_base = poly.u_block_start + poly.num_u * poly.u_slots;
    int cursor = slack_base;
    for (const auto& c : model.constraints) {
        if (c.rel == LinearConstraint::Rel::Eq) continue;
        double lhs = 0.0;
        for (const auto& [var, coeff] : c.coeffs)
            lhs += coeff * (var < model.num_x() ? double(x[var]) : double(u[var - model.num_x()]));
        double target = c.rel == LinearConstraint::Rel::Ge ? lhs - c.rhs : c.rhs - lhs;
        // block width: scan until the next block would start (reconstructed
        // the same way to_polynomial sized it)
        double lo = -c.rhs, hi = -c.rhs;
        for (const auto& [var, coeff] : c.coeffs) {
            double vmin = var < model.num_x() ? 0.0 : 2.0;
            double vmax = var < model.num_x() ? 1.0 : double(model.n);
            lo += coeff * (coeff >= 0 ? vmin : vmax);
            hi += coeff * (coeff >= 0 ? vmax : vmin);
        }
        int smax = std::max(0, (int)std::llround(c.rel == LinearConstraint::Rel::Ge ? hi : -lo));
        int best = std::clamp((int)std::llround(target), 0, smax);
        bits[cursor + best] = 1;
        cursor += smax + 1;
    }
    return bits;
}

}  // namespace

TEST_SUITE("ilp") {

TEST_CASE("mtz model counts for four cities") {
    TspInstance inst = random_instance(4, 1, 1.0, 10.0);
    IlpModel model = build_mtz(inst);
    CHECK(model.num_x() == 12);
    CHECK(model.num_u() == 3);
    int degree = 0, mtz = 0;
    for (const auto& c : model.constraints) {
        if (c.label.rfind("degree", 0) == 0) ++degree;
        if (c.label.rfind("mtz", 0) == 0) ++mtz;
    }
    CHECK(degree == 8);
    CHECK(mtz == 6);
    CHECK(model.u_bounds.size() == 3);
    for (auto [lo, hi] : model.u_bounds) {
        CHECK(lo == 2);
        CHECK(hi == 4);
    }
    CHECK_THROWS_AS(build_mtz(random_instance(2, 1, 1.0, 2.0)), std::invalid_argument);
}

TEST_CASE("a tour with its visiting positions satisfies mtz") {
    TspInstance inst = random_instance(4, 2, 1.0, 10.0);
    IlpModel model = build_mtz(inst);
    Tour tour{{0, 1, 2, 3}};
    std::vector<int> u = {2, 3, 4};
    CHECK(check_feasible(model, x_from_tour(model, tour), &u).empty());
    CHECK(check_feasible(model, x_from_tour(model, tour)).empty());
}

TEST_CASE("two 2-cycles are infeasible and the cycle is certified") {
    TspInstance inst = random_instance(4, 3, 1.0, 10.0);
    IlpModel model = build_mtz(inst);
    std::vector<std::uint8_t> x(model.num_x(), 0);
    x[model.x_index(0, 1)] = 1;
    x[model.x_index(1, 0)] = 1;
    x[model.x_index(2, 3)] = 1;
    x[model.x_index(3, 2)] = 1;

    auto violations = check_feasible(model, x);
    REQUIRE_FALSE(violations.empty());
    bool subtour_found = false;
    for (const auto& v : violations) {
        if (v.kind != IlpViolation::Kind::Subtour) continue;
        subtour_found = true;
        std::set<int> cycle(v.cycle.begin(), v.cycle.end());
        CHECK(cycle == std::set<int>{2, 3});
    }
    CHECK(subtour_found);

    // with an explicit u no witness works: summing around the 2-3 cycle
    // contradicts the constraints, so some mtz row must fire
    for (int u2 = 2; u2 <= 4; ++u2)
        for (int u3 = 2; u3 <= 4; ++u3) {
            std::vector<int> u = {2, u2, u3};
            bool mtz_violated = false;
            for (const auto& v : check_feasible(model, x, &u))
                if (v.text.rfind("mtz", 0) == 0) mtz_violated = true;
            CHECK(mtz_violated);
        }
}

TEST_CASE("degree violations are listed") {
    TspInstance inst = random_instance(4, 4, 1.0, 10.0);
    IlpModel model = build_mtz(inst);
    std::vector<std::uint8_t> x(model.num_x(), 0);  // nothing selected
    auto violations = check_feasible(model, x);
    int degree_rows = 0;
    for (const auto& v : violations)
        if (v.text.rfind("degree", 0) == 0) ++degree_rows;
    CHECK(degree_rows == 8);
}

TEST_CASE("dfj model counts and basic feasibility") {
    TspInstance inst = random_instance(4, 5, 1.0, 10.0);
    IlpModel model = build_dfj(inst, 3);
    int degree = 0, subtour = 0;
    for (const auto& c : model.constraints) {
        if (c.label.rfind("degree", 0) == 0) ++degree;
        if (c.label.rfind("subtour", 0) == 0) ++subtour;
    }
    CHECK(degree == 8);
    CHECK(subtour == 10);  // C(4,2) + C(4,3)

    Tour tour{{0, 2, 1, 3}};
    CHECK(check_feasible(model, x_from_tour(model, tour)).empty());

    std::vector<std::uint8_t> x(model.num_x(), 0);
    x[model.x_index(0, 1)] = 1;
    x[model.x_index(1, 0)] = 1;
    x[model.x_index(2, 3)] = 1;
    x[model.x_index(3, 2)] = 1;
    bool s01 = false;
    for (const auto& v : check_feasible(model, x))
        if (v.text.rfind("subtour{0,1}", 0) == 0) s01 = true;
    CHECK(s01);

    CHECK_THROWS_AS(build_dfj(inst, 4), std::invalid_argument);
}

TEST_CASE("dfj-feasible optimum equals brute force for four cities") {
    TspInstance inst = random_instance(4, 6, 1.0, 10.0);
    IlpModel model = build_dfj(inst, 3);
    double best = 1e300;
    for (std::uint32_t mask = 0; mask < (1u << 12); ++mask) {
        auto x = x_of_mask(model, mask);
        if (!check_feasible(model, x).empty()) continue;
        double cost = 0.0;
        for (int v = 0; v < 12; ++v) cost += model.objective[v] * x[v];
        best = std::min(best, cost);
    }
    CHECK(best == doctest::Approx(brute_force(inst).cost).epsilon(1e-9));
}

TEST_CASE("mtz and dfj feasible sets are exactly the directed tours") {
    for (int n : {4, 5}) {
        TspInstance inst = random_instance(n, 7 + n, 1.0, 10.0);
        IlpModel mtz = build_mtz(inst);
        IlpModel dfj = build_dfj(inst, n - 1);
        std::uint64_t tours_found = 0;
        for (std::uint32_t mask = 0; mask < (1u << mtz.num_x()); ++mask) {
            auto x = x_of_mask(mtz, mask);
            // shared degree rows decide most masks cheaply
            bool degrees_ok = true;
            for (int i = 0; i < n && degrees_ok; ++i) {
                int out = 0, in = 0;
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    out += x[mtz.x_index(i, j)];
                    in += x[mtz.x_index(j, i)];
                }
                degrees_ok = out == 1 && in == 1;
            }
            bool is_tour = tour_from_x(mtz, x).has_value();
            if (!degrees_ok) {
                CHECK_FALSE(is_tour);
                continue;
            }
            bool mtz_ok = check_feasible(mtz, x).empty();
            bool dfj_ok = check_feasible(dfj, x).empty();
            CHECK(mtz_ok == is_tour);
            CHECK(dfj_ok == is_tour);
            if (is_tour) ++tours_found;
        }
        std::uint64_t expected = 1;
        for (int k = 2; k < n; ++k) expected *= k;
        CHECK(tours_found == expected);  // (n-1)! directed tours
    }
}

TEST_CASE("polynomial expansion of a single equality constraint") {
    TspInstance inst = random_instance(3, 1, 1.0, 10.0);
    IlpModel model;
    model.formulation = IlpModel::Formulation::Dfj;  // no u variables
    model.n = 3;
    model.objective.assign(model.num_x(), 0.0);
    LinearConstraint c;
    c.rel = LinearConstraint::Rel::Eq;
    c.rhs = 1.0;
    c.coeffs = {{0, 1.0}, {1, 1.0}};
    c.label = "pair";
    model.constraints.push_back(c);

    double rho = 4.0;
    PolyObjective poly = to_polynomial(model, rho);
    CHECK(poly.linear[0] == doctest::Approx(-rho));
    CHECK(poly.linear[1] == doctest::Approx(-rho));
    CHECK(poly.quad[0 * poly.num_vars + 1] == doctest::Approx(rho));
    CHECK(poly.quad[1 * poly.num_vars + 0] == doctest::Approx(rho));
    CHECK(poly.offset == doctest::Approx(rho));
}

TEST_CASE("unconstrained objective passes through") {
    TspInstance inst = random_instance(3, 2, 1.0, 10.0);
    IlpModel model;
    model.formulation = IlpModel::Formulation::Dfj;
    model.n = 3;
    model.objective.assign(model.num_x(), 0.0);
    for (int v = 0; v < model.num_x(); ++v) model.objective[v] = 1.0 + v;
    PolyObjective poly = to_polynomial(model, 2.0);
    for (int v = 0; v < model.num_x(); ++v) CHECK(poly.linear[v] == 1.0 + v);
    for (double q : poly.quad) CHECK(q == 0.0);
    CHECK(poly.offset == 0.0);
}

TEST_CASE("polynomial energies: feasible = objective, infeasible >= objective + penalty") {
    TspInstance inst = random_instance(4, 9, 1.0, 10.0);
    IlpModel model = build_mtz(inst);
    double penalty = 4 * inst.max_offdiag();
    PolyObjective poly = to_polynomial(model, penalty);

    int checked_feasible = 0;
    for (std::uint32_t mask = 0; mask < (1u << 12); ++mask) {
        auto x = x_of_mask(model, mask);
        for (int u1 = 2; u1 <= 4; ++u1)
            for (int u2 = 2; u2 <= 4; ++u2)
                for (int u3 = 2; u3 <= 4; ++u3) {
                    std::vector<int> u = {u1, u2, u3};
                    double objective = 0.0;
                    for (int v = 0; v < 12; ++v) objective += model.objective[v] * x[v];
                    double energy = poly.energy(poly_bits(model, poly, x, u));
                    if (check_feasible(model, x, &u).empty()) {
                        ++checked_feasible;
                        CHECK(std::abs(energy - objective) <= 1e-9);
                    } else {
                        CHECK(energy >= objective + penalty - 1e-9);
                    }
                }
    }
    CHECK(checked_feasible >= 6);  // every directed tour admits >= 1 witness
}

TEST_CASE("mtz polynomial through the annealer recovers the optimum") {
    TspInstance inst = random_instance(4, 10, 1.0, 10.0);
    IlpModel model = build_mtz(inst);
    PolyObjective poly = to_polynomial(model, default_penalty(inst));
    IsingModel ising = poly_to_ising(poly);

    // spot-check the spin model agrees with the polynomial
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint8_t> bits(poly.num_vars);
        std::vector<std::int8_t> spins(poly.num_vars);
        for (int i = 0; i < poly.num_vars; ++i) {
            bits[i] = rng.next_u64() & 1;
            spins[i] = bits[i] ? 1 : -1;
        }
        CHECK(std::abs(poly.energy(bits) - ising.energy(spins)) <= 1e-6);
    }

    double optimum = brute_force(inst).cost;
    int hits = 0;
    Schedule sched = default_schedule(ising);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        double best = 1e300;
        for (int run = 0; run < 10; ++run) {
            AnnealResult res = anneal(ising, sched, derive_seed(seed, {(std::uint64_t)run}));
            std::vector<std::uint8_t> x(model.num_x());
            for (int v = 0; v < model.num_x(); ++v) x[v] = res.spins[v] > 0;
            auto tour = tour_from_x(model, x);
            if (tour) best = std::min(best, tour_cost(inst, *tour));
        }
        if (best == doctest::Approx(optimum).epsilon(1e-9)) ++hits;
    }
    CHECK(hits >= 2);
}

TEST_CASE("lp text export is human-readable") {
    TspInstance inst = random_instance(4, 11, 1.0, 10.0);
    std::string text = build_mtz(inst).to_lp_text();
    CHECK(text.find("minimize") != std::string::npos);
    CHECK(text.find("subject to") != std::string::npos);
    CHECK(text.find("mtz[1][2]") != std::string::npos);
    CHECK(text.find("bounds") != std::string::npos);
    CHECK(text.find("u_1") != std::string::npos);
}

}  // TEST_SUITE
