#include "qtsp/ilp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qtsp {

int IlpModel::x_index(int i, int j) const {
    if (i == j || i < 0 || j < 0 || i >= n || j >= n)
        throw std::out_of_range("x variable index out of range");
    return i * (n - 1) + (j < i ? j : j - 1);
}

std::pair<int, int> IlpModel::x_edge(int index) const {
    int i = index / (n - 1);
    int r = index % (n - 1);
    int j = r < i ? r : r + 1;
    return {i, j};
}

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void add_degree_constraints(IlpModel& model) {
    int n = model.n;
    for (int i = 0; i < n; ++i) {
        LinearConstraint out;
        out.rel = LinearConstraint::Rel::Eq;
        out.rhs = 1.0;
        out.label = "degree-out[" + std::to_string(i) + "]";
        for (int j = 0; j < n; ++j)
            if (j != i) out.coeffs.emplace_back(model.x_index(i, j), 1.0);
        model.constraints.push_back(std::move(out));
    }
    for (int j = 0; j < n; ++j) {
        LinearConstraint in;
        in.rel = LinearConstraint::Rel::Eq;
        in.rhs = 1.0;
        in.label = "degree-in[" + std::to_string(j) + "]";
        for (int i = 0; i < n; ++i)
            if (i != j) in.coeffs.emplace_back(model.x_index(i, j), 1.0);
        model.constraints.push_back(std::move(in));
    }
}

}  // namespace

IlpModel build_mtz(const TspInstance& inst) {
    int n = inst.n();
    if (n < 3) throw std::invalid_argument("MTZ needs n >= 3");
    IlpModel model;
    model.formulation = IlpModel::Formulation::Mtz;
    model.n = n;
    model.objective.resize(model.num_x());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) model.objective[model.x_index(i, j)] = inst.dist(i, j);

    add_degree_constraints(model);

    // u_j - u_i - (n-1) x_ij >= 2 - n over non-anchor pairs
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) {
            if (i == j) continue;
            LinearConstraint c;
            c.rel = LinearConstraint::Rel::Ge;
            c.rhs = 2.0 - n;
            c.label = "mtz[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            c.coeffs.emplace_back(model.u_index(j), 1.0);
            c.coeffs.emplace_back(model.u_index(i), -1.0);
            c.coeffs.emplace_back(model.x_index(i, j), -(n - 1.0));
            model.constraints.push_back(std::move(c));
        }

    model.u_bounds.assign(n - 1, {2, n});
    return model;
}

IlpModel build_dfj(const TspInstance& inst, int max_subset) {
    int n = inst.n();
    if (n < 3) throw std::invalid_argument("DFJ needs n >= 3");
    if (max_subset < 2 || max_subset > n - 1)
        throw std::invalid_argument("max_subset must be in [2, n-1]");
    if (n > 12 && max_subset == n - 1)
        throw std::invalid_argument("subset budget exceeded for n > 12");

    IlpModel model;
    model.formulation = IlpModel::Formulation::Dfj;
    model.n = n;
    model.objective.resize(model.num_x());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) model.objective[model.x_index(i, j)] = inst.dist(i, j);

    add_degree_constraints(model);

    // every proper subset S, 2 <= |S| <= max_subset, as a bitmask walk
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
        int size = std::popcount(mask);
        if (size < 2 || size > max_subset) continue;
        LinearConstraint c;
        c.rel = LinearConstraint::Rel::Le;
        c.rhs = size - 1.0;
        std::string members;
        for (int i = 0; i < n; ++i) {
            if (!(mask & (std::uint32_t{1} << i))) continue;
            members += (members.empty() ? "" : ",") + std::to_string(i);
            for (int j = 0; j < n; ++j) {
                if (i == j || !(mask & (std::uint32_t{1} << j))) continue;
                c.coeffs.emplace_back(model.x_index(i, j), 1.0);
            }
        }
        c.label = "subtour{" + members + "}";
        model.constraints.push_back(std::move(c));
    }
    return model;
}

namespace {

double constraint_lhs(const LinearConstraint& c, std::span<const std::uint8_t> x,
                      const std::vector<int>& u, int num_x) {
    double acc = 0.0;
    for (const auto& [var, coeff] : c.coeffs)
        acc += coeff * (var < num_x ? static_cast<double>(x[var])
                                    : static_cast<double>(u[var - num_x]));
    return acc;
}

bool constraint_holds(const LinearConstraint& c, double lhs) {
    constexpr double tol = 1e-9;
    switch (c.rel) {
        case LinearConstraint::Rel::Le: return lhs <= c.rhs + tol;
        case LinearConstraint::Rel::Eq: return std::abs(lhs - c.rhs) <= tol;
        case LinearConstraint::Rel::Ge: return lhs >= c.rhs - tol;
    }
    return false;
}

}  // namespace

std::optional<Tour> tour_from_x(const IlpModel& model, std::span<const std::uint8_t> x) {
    int n = model.n;
    std::vector<int> succ(n, -1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || !x[model.x_index(i, j)]) continue;
            if (succ[i] != -1) return std::nullopt;  // out-degree > 1
            succ[i] = j;
        }
    Tour tour;
    tour.order.reserve(n);
    std::vector<bool> seen(n, false);
    int city = 0;
    for (int step = 0; step < n; ++step) {
        if (city < 0 || seen[city]) return std::nullopt;
        seen[city] = true;
        tour.order.push_back(city);
        city = succ[city];
    }
    if (city != 0) return std::nullopt;  // chain does not close
    return tour;
}

std::vector<std::uint8_t> x_from_tour(const IlpModel& model, const Tour& tour) {
    std::vector<std::uint8_t> x(model.num_x(), 0);
    int n = tour.n();
    for (int t = 0; t < n; ++t)
        x[model.x_index(tour.order[t], tour.order[(t + 1) % n])] = 1;
    return x;
}

std::vector<IlpViolation> check_feasible(const IlpModel& model, std::span<const std::uint8_t> x,
                                         const std::vector<int>* u) {
    if (static_cast<int>(x.size()) != model.num_x())
        throw std::invalid_argument("x length does not match the model");
    if (u && static_cast<int>(u->size()) != model.num_u())
        throw std::invalid_argument("u length does not match the model");

    std::vector<IlpViolation> violations;
    std::vector<int> witness;
    bool have_u = u != nullptr;

    if (model.formulation == IlpModel::Formulation::Mtz && !have_u) {
        // derive the witness from visiting positions along the successor
        // chain; impossible exactly when x carries a subtour missing the
        // anchor, which is reported with its cycle
        witness.assign(model.num_u(), 2);
        std::vector<int> succ(model.n, -1), indeg(model.n, 0);
        bool degrees_ok = true;
        for (int i = 0; i < model.n && degrees_ok; ++i) {
            for (int j = 0; j < model.n; ++j) {
                if (i == j || !x[model.x_index(i, j)]) continue;
                if (succ[i] != -1) degrees_ok = false;
                succ[i] = j;
                ++indeg[j];
            }
        }
        for (int i = 0; i < model.n; ++i)
            if (succ[i] == -1 || indeg[i] != 1) degrees_ok = false;

        if (degrees_ok) {
            std::vector<bool> on_anchor_cycle(model.n, false);
            int city = 0, pos = 1;
            do {
                on_anchor_cycle[city] = true;
                if (city != 0) witness[city - 1] = pos;
                city = succ[city];
                ++pos;
            } while (city != 0 && pos <= model.n);

            for (int start = 0; start < model.n; ++start) {
                if (on_anchor_cycle[start]) continue;
                // walk the off-anchor cycle through `start`
                IlpViolation v;
                v.kind = IlpViolation::Kind::Subtour;
                int c = start;
                do {
                    v.cycle.push_back(c);
                    on_anchor_cycle[c] = true;
                    c = succ[c];
                } while (c != start);
                std::string cities;
                for (int member : v.cycle)
                    cities += (cities.empty() ? "" : ",") + std::to_string(member);
                v.text = "subtour without the anchor: {" + cities + "}";
                violations.push_back(std::move(v));
            }
        }
        have_u = true;
    } else if (have_u) {
        witness = *u;
    } else {
        witness.assign(model.num_u(), 0);
    }

    for (std::size_t idx = 0; idx < model.constraints.size(); ++idx) {
        const LinearConstraint& c = model.constraints[idx];
        double lhs = constraint_lhs(c, x, witness, model.num_x());
        if (constraint_holds(c, lhs)) continue;
        IlpViolation v;
        v.kind = IlpViolation::Kind::Constraint;
        v.index = static_cast<int>(idx);
        v.text = c.label + ": lhs=" + format_double(lhs);
        violations.push_back(std::move(v));
    }

    for (int uv = 0; uv < model.num_u(); ++uv) {
        int value = witness[uv];
        auto [lo, hi] = model.u_bounds[uv];
        if (value < lo || value > hi) {
            IlpViolation v;
            v.kind = IlpViolation::Kind::Bound;
            v.index = uv;
            v.text = "u[" + std::to_string(uv + 1) + "]=" + std::to_string(value) +
                     " outside [" + std::to_string(lo) + "," + std::to_string(hi) + "]";
            violations.push_back(std::move(v));
        }
    }
    return violations;
}

std::string IlpModel::to_lp_text() const {
    std::ostringstream out;
    out << "minimize\n ";
    bool first = true;
    for (int v = 0; v < num_x(); ++v) {
        if (objective[v] == 0.0) continue;
        auto [i, j] = x_edge(v);
        out << (first ? " " : " + ") << format_double(objective[v]) << " x_" << i << "_" << j;
        first = false;
    }
    out << "\nsubject to\n";
    for (const auto& c : constraints) {
        out << " " << c.label << ":";
        for (const auto& [var, coeff] : c.coeffs) {
            out << (coeff >= 0 ? " + " : " - ") << format_double(std::abs(coeff));
            if (var < num_x()) {
                auto [i, j] = x_edge(var);
                out << " x_" << i << "_" << j;
            } else {
                out << " u_" << (var - num_x() + 1);
            }
        }
        const char* rel = c.rel == LinearConstraint::Rel::Le   ? "<="
                          : c.rel == LinearConstraint::Rel::Eq ? "="
                                                               : ">=";
        out << " " << rel << " " << format_double(c.rhs) << "\n";
    }
    if (num_u() > 0) {
        out << "bounds\n";
        for (int uv = 0; uv < num_u(); ++uv)
            out << " " << u_bounds[uv].first << " <= u_" << (uv + 1) << " <= "
                << u_bounds[uv].second << "\n";
    }
    out << "binary\n  x_i_j for all i != j\n";
    return out.str();
}

namespace {

// Accumulates weight * (sum coeff_k b_k + constant)^2 into the polynomial.
void add_squared_penalty(PolyObjective& poly, const std::map<int, double>& terms, double constant,
                         double weight) {
    for (auto it = terms.begin(); it != terms.end(); ++it) {
        auto [vi, ci] = *it;
        poly.linear[vi] += weight * (ci * ci + 2.0 * constant * ci);
        for (auto jt = std::next(it); jt != terms.end(); ++jt) {
            auto [vj, cj] = *jt;
            poly.quad[static_cast<std::size_t>(vi) * poly.num_vars + vj] += weight * ci * cj;
            poly.quad[static_cast<std::size_t>(vj) * poly.num_vars + vi] += weight * ci * cj;
        }
    }
    poly.offset += weight * constant * constant;
}

}  // namespace

PolyObjective to_polynomial(const IlpModel& model, double penalty) {
    if (!(penalty > 0.0)) throw std::invalid_argument("penalty must be positive");
    int n = model.n;
    int num_x = model.num_x();
    int num_u = model.num_u();
    int u_slots = n - 1;  // one-hot over values {2..n}

    // inequality slacks sized to the feasible range of lhs - rhs (Ge) or
    // rhs - lhs (Le), with x in {0,1} and u in [2, n]
    std::vector<int> slack_slots(model.constraints.size(), 0);
    std::vector<int> slack_start(model.constraints.size(), -1);
    int next_var = num_x + num_u * u_slots;
    for (std::size_t idx = 0; idx < model.constraints.size(); ++idx) {
        const LinearConstraint& c = model.constraints[idx];
        if (c.rel == LinearConstraint::Rel::Eq) continue;
        double lo = -c.rhs, hi = -c.rhs;
        for (const auto& [var, coeff] : c.coeffs) {
            double vmin = 0.0, vmax = 1.0;
            if (var >= num_x) {
                vmin = 2.0;
                vmax = static_cast<double>(n);
            }
            lo += coeff * (coeff >= 0 ? vmin : vmax);
            hi += coeff * (coeff >= 0 ? vmax : vmin);
        }
        double range = c.rel == LinearConstraint::Rel::Ge ? hi : -lo;
        int smax = std::max(0, static_cast<int>(std::llround(range)));
        slack_slots[idx] = smax + 1;  // one-hot over {0..smax}
        slack_start[idx] = next_var;
        next_var += slack_slots[idx];
    }

    PolyObjective poly;
    poly.num_vars = next_var;
    poly.num_x = num_x;
    poly.num_u = num_u;
    poly.u_block_start = num_x;
    poly.u_slots = u_slots;
    poly.linear.assign(next_var, 0.0);
    poly.quad.assign(static_cast<std::size_t>(next_var) * next_var, 0.0);

    for (int v = 0; v < num_x; ++v) poly.linear[v] += model.objective[v];

    auto u_var = [&](int uv, int value) { return num_x + uv * u_slots + (value - 2); };

    // one-hot validity for each u block
    for (int uv = 0; uv < num_u; ++uv) {
        std::map<int, double> terms;
        for (int value = 2; value <= n; ++value) terms[u_var(uv, value)] = 1.0;
        add_squared_penalty(poly, terms, -1.0, penalty);
    }

    for (std::size_t idx = 0; idx < model.constraints.size(); ++idx) {
        const LinearConstraint& c = model.constraints[idx];
        std::map<int, double> terms;
        for (const auto& [var, coeff] : c.coeffs) {
            if (var < num_x) {
                terms[var] += coeff;
            } else {
                int uv = var - num_x;
                for (int value = 2; value <= n; ++value)
                    terms[u_var(uv, value)] += coeff * value;
            }
        }
        double constant = -c.rhs;
        if (c.rel != LinearConstraint::Rel::Eq) {
            // (lhs - rhs) - slack = 0 for Ge, (rhs - lhs) - slack = 0 for Le
            if (c.rel == LinearConstraint::Rel::Le) {
                for (auto& [var, coeff] : terms) coeff = -coeff;
                constant = c.rhs;
            }
            for (int s = 1; s < slack_slots[idx]; ++s) terms[slack_start[idx] + s] += -1.0 * s;
            std::map<int, double> validity;
            for (int s = 0; s < slack_slots[idx]; ++s) validity[slack_start[idx] + s] = 1.0;
            add_squared_penalty(poly, validity, -1.0, penalty);
        }
        add_squared_penalty(poly, terms, constant, penalty);
    }
    return poly;
}

double PolyObjective::energy(std::span<const std::uint8_t> bits) const {
    if (static_cast<int>(bits.size()) != num_vars)
        throw std::invalid_argument("bit vector length does not match the polynomial");
    double e = offset;
    for (int i = 0; i < num_vars; ++i) {
        if (!bits[i]) continue;
        e += linear[i];
        const double* row = quad.data() + static_cast<std::size_t>(i) * num_vars;
        double acc = 0.0;
        for (int j = 0; j < num_vars; ++j)
            if (bits[j]) acc += row[j];
        e += acc;
    }
    return e;
}

IsingModel poly_to_ising(const PolyObjective& poly) {
    QuboModel q(poly.num_vars, poly.offset);
    for (int i = 0; i < poly.num_vars; ++i) {
        if (poly.linear[i] != 0.0) q.add_term(i, i, poly.linear[i]);
        for (int j = i + 1; j < poly.num_vars; ++j) {
            double c = poly.quad[static_cast<std::size_t>(i) * poly.num_vars + j] +
                       poly.quad[static_cast<std::size_t>(j) * poly.num_vars + i];
            if (c != 0.0) q.add_term(i, j, c);
        }
    }
    return qubo_to_ising(q);
}

}  // namespace qtsp
