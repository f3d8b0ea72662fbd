#include "qtsp/encode.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace qtsp {

double tour_cost(const TspInstance& inst, const Tour& tour) {
    int n = tour.n();
    if (n != inst.n()) throw std::invalid_argument("tour length does not match instance");
    for (int c : tour.order)
        if (c < 0 || c >= inst.n()) throw std::invalid_argument("tour references unknown city");
    double cost = 0.0;
    for (int t = 0; t < n; ++t) cost += inst.dist(tour.order[t], tour.order[(t + 1) % n]);
    return cost;
}

bool is_valid_tour(const Tour& tour, int n) {
    if (tour.n() != n) return false;
    std::vector<bool> seen(n, false);
    for (int c : tour.order) {
        if (c < 0 || c >= n || seen[c]) return false;
        seen[c] = true;
    }
    return true;
}

QuboModel::QuboModel(int num_vars, double offset)
    : num_vars_(num_vars),
      q_(static_cast<std::size_t>(num_vars) * num_vars, 0.0),
      offset_(offset) {
    if (num_vars < 0) throw std::invalid_argument("negative variable count");
}

void QuboModel::add_term(int i, int j, double c) {
    if (i < 0 || j < 0 || i >= num_vars_ || j >= num_vars_)
        throw std::out_of_range("QUBO term index out of range");
    if (i == j) {
        q_[static_cast<std::size_t>(i) * num_vars_ + i] += c;
    } else {
        q_[static_cast<std::size_t>(i) * num_vars_ + j] += c / 2.0;
        q_[static_cast<std::size_t>(j) * num_vars_ + i] += c / 2.0;
    }
}

double QuboModel::energy(std::span<const std::uint8_t> x) const {
    if (static_cast<int>(x.size()) != num_vars_)
        throw std::invalid_argument("assignment length does not match num_vars");
    double e = offset_;
    for (int i = 0; i < num_vars_; ++i) {
        if (!x[i]) continue;
        const double* row = q_.data() + static_cast<std::size_t>(i) * num_vars_;
        double acc = 0.0;
        for (int j = 0; j < num_vars_; ++j)
            if (x[j]) acc += row[j];
        e += acc;
    }
    return e;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string QuboModel::to_json() const {
    // nlohmann would serialize coefficients through its own float formatting;
    // build the terms array by hand so values round-trip shortest-exact.
    std::string out = "{\"num_vars\":" + std::to_string(num_vars_) +
                      ",\"offset\":" + format_double(offset_) + ",\"terms\":[";
    bool first = true;
    for (int i = 0; i < num_vars_; ++i) {
        for (int j = i; j < num_vars_; ++j) {
            double c = (i == j) ? q(i, i) : q(i, j) + q(j, i);
            if (c == 0.0) continue;
            if (!first) out += ',';
            first = false;
            out += "[" + std::to_string(i) + "," + std::to_string(j) + "," + format_double(c) + "]";
        }
    }
    out += "]}";
    return out;
}

QuboModel QuboModel::from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("QUBO JSON parse failure: ") + e.what());
    }
    QuboModel model(doc.at("num_vars").get<int>(), doc.at("offset").get<double>());
    for (const auto& term : doc.at("terms")) {
        int i = term.at(0).get<int>();
        int j = term.at(1).get<int>();
        model.add_term(i, j, term.at(2).get<double>());
    }
    return model;
}

double IsingModel::energy(std::span<const std::int8_t> spins) const {
    if (static_cast<int>(spins.size()) != num_spins)
        throw std::invalid_argument("spin vector length does not match num_spins");
    double e = offset;
    for (int a = 0; a < num_spins; ++a) {
        const double* row = j.data() + static_cast<std::size_t>(a) * num_spins;
        double acc = 0.0;
        for (int b = 0; b < num_spins; ++b) acc += row[b] * spins[b];
        e += spins[a] * acc + h[a] * spins[a];
    }
    return e;
}

double default_penalty(const TspInstance& inst) { return inst.n() * inst.max_offdiag(); }

namespace {

// Adds gamma * (sum of vars - 1)^2 expanded over binaries:
// +gamma on each cross pair, -gamma on each diagonal, +gamma constant.
void add_one_hot_penalty(QuboModel& model, const std::vector<int>& vars, double gamma) {
    for (std::size_t a = 0; a < vars.size(); ++a) {
        model.add_term(vars[a], vars[a], -gamma);
        for (std::size_t b = a + 1; b < vars.size(); ++b)
            model.add_term(vars[a], vars[b], 2.0 * gamma);
    }
    model.add_offset(gamma);
}

}  // namespace

QuboModel build_qubo_sa_form(const TspInstance& inst, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    int n = inst.n();
    QuboModel model(n * n);
    model.set_penalty_weight(gamma);

    VarGrid grid;
    grid.steps = n;
    grid.cities = n;
    grid.var_of_cell.resize(static_cast<std::size_t>(n) * n);
    grid.cell_of_var.resize(static_cast<std::size_t>(n) * n);
    for (int c = 0; c < n * n; ++c) {
        grid.var_of_cell[c] = c;
        grid.cell_of_var[c] = c;
    }

    auto var = [&](int step, int city) { return step * n + city; };

    // objective: W_kl a_{i,k} a_{i+1,l}, step index wraps (closed tour)
    for (int i = 0; i < n; ++i) {
        int next = (i + 1) % n;
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                if (k == l) continue;
                model.add_term(var(i, k), var(next, l), inst.dist(k, l));
            }
    }

    // one city per step and one step per city
    for (int i = 0; i < n; ++i) {
        std::vector<int> row(n);
        for (int k = 0; k < n; ++k) row[k] = var(i, k);
        add_one_hot_penalty(model, row, gamma);
    }
    for (int k = 0; k < n; ++k) {
        std::vector<int> col(n);
        for (int i = 0; i < n; ++i) col[i] = var(i, k);
        add_one_hot_penalty(model, col, gamma);
    }

    model.set_grid(std::move(grid));
    return model;
}

QuboModel build_qubo_dwave_form(const TspInstance& inst, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    int n = inst.n();
    int m = n + 1;  // cities and steps run over {0..N}, city N aliases city 0

    // Build over all m*m grid cells first, then substitute the pins.
    int cells = m * m;
    std::vector<double> full_q(static_cast<std::size_t>(cells) * cells, 0.0);
    double full_offset = 0.0;
    auto cell = [&](int t, int i) { return t * m + i; };
    auto add_full = [&](int a, int b, double c) {
        if (a == b) {
            full_q[static_cast<std::size_t>(a) * cells + a] += c;
        } else {
            full_q[static_cast<std::size_t>(a) * cells + b] += c / 2.0;
            full_q[static_cast<std::size_t>(b) * cells + a] += c / 2.0;
        }
    };
    auto d = [&](int i, int j) { return inst.dist(i == n ? 0 : i, j == n ? 0 : j); };

    // tour legs t -> t+1 (no wraparound: step N is the pinned return)
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double dij = d(i, j);
            if (dij == 0.0) continue;
            for (int t = 0; t < n; ++t) add_full(cell(t, i), cell(t + 1, j), dij);
        }

    // each city visited once across all steps; each step holds one city
    for (int i = 0; i < m; ++i) {
        for (int t = 0; t < m; ++t) {
            add_full(cell(t, i), cell(t, i), -2.0 * lambda);  // -lambda from each of two squares
        }
    }
    for (int i = 0; i < m; ++i)
        for (int t1 = 0; t1 < m; ++t1)
            for (int t2 = t1 + 1; t2 < m; ++t2)
                add_full(cell(t1, i), cell(t2, i), 2.0 * lambda);
    for (int t = 0; t < m; ++t)
        for (int i1 = 0; i1 < m; ++i1)
            for (int i2 = i1 + 1; i2 < m; ++i2)
                add_full(cell(t, i1), cell(t, i2), 2.0 * lambda);
    full_offset += 2.0 * m * lambda;

    // pins: x_{city 0, t=0} = 1 and x_{city N, t=N} = 1
    std::map<int, int> fixed;
    fixed[cell(0, 0)] = 1;
    fixed[cell(n, n)] = 1;

    VarGrid grid;
    grid.steps = m;
    grid.cities = m;
    grid.var_of_cell.assign(cells, -1);
    for (int c = 0; c < cells; ++c) {
        if (fixed.count(c)) continue;
        grid.var_of_cell[c] = static_cast<int>(grid.cell_of_var.size());
        grid.cell_of_var.push_back(c);
    }
    grid.fixed = fixed;

    QuboModel model(grid.num_vars());
    model.set_penalty_weight(lambda);

    // substitute: free x free stays quadratic, free x pinned folds into the
    // diagonal, pinned x pinned folds into the offset
    for (int a = 0; a < cells; ++a) {
        double qaa = full_q[static_cast<std::size_t>(a) * cells + a];
        auto fa = fixed.find(a);
        if (fa == fixed.end()) {
            if (qaa != 0.0) model.add_term(grid.var_of_cell[a], grid.var_of_cell[a], qaa);
        } else if (fa->second == 1) {
            model.add_offset(qaa);
        }
        for (int b = a + 1; b < cells; ++b) {
            double c = full_q[static_cast<std::size_t>(a) * cells + b] +
                       full_q[static_cast<std::size_t>(b) * cells + a];
            if (c == 0.0) continue;
            auto fb = fixed.find(b);
            bool a_fixed = fa != fixed.end();
            bool b_fixed = fb != fixed.end();
            if (!a_fixed && !b_fixed) {
                model.add_term(grid.var_of_cell[a], grid.var_of_cell[b], c);
            } else if (a_fixed && b_fixed) {
                if (fa->second == 1 && fb->second == 1) model.add_offset(c);
            } else if (a_fixed) {
                if (fa->second == 1) model.add_term(grid.var_of_cell[b], grid.var_of_cell[b], c);
            } else {
                if (fb->second == 1) model.add_term(grid.var_of_cell[a], grid.var_of_cell[a], c);
            }
        }
    }
    model.add_offset(full_offset);
    model.set_grid(std::move(grid));
    return model;
}

IsingModel qubo_to_ising(const QuboModel& q) {
    int n = q.num_vars();
    IsingModel ising;
    ising.num_spins = n;
    ising.j.assign(static_cast<std::size_t>(n) * n, 0.0);
    ising.h.assign(n, 0.0);
    ising.offset = q.offset();
    for (int a = 0; a < n; ++a) {
        double qaa = q.q(a, a);
        ising.h[a] += qaa / 2.0;
        ising.offset += qaa / 2.0;
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            double qab = q.q(a, b);  // half of the product coefficient
            ising.j[static_cast<std::size_t>(a) * n + b] += qab / 4.0;
            ising.h[a] += qab / 2.0;  // covers both (a,b) and (b,a) shares for x_a
            ising.offset += qab / 4.0;
        }
    }
    return ising;
}

DecodeReport decode_assignment(const QuboModel& q, std::span<const std::uint8_t> x) {
    if (!q.has_grid()) throw std::logic_error("model carries no variable grid to decode");
    if (static_cast<int>(x.size()) != q.num_vars())
        throw std::invalid_argument("assignment length does not match num_vars");
    const VarGrid& grid = q.grid();

    std::vector<std::uint8_t> cells(static_cast<std::size_t>(grid.steps) * grid.cities, 0);
    for (int v = 0; v < grid.num_vars(); ++v) cells[grid.cell_of_var[v]] = x[v];
    for (const auto& [c, value] : grid.fixed) cells[c] = static_cast<std::uint8_t>(value);

    DecodeReport report;
    std::vector<int> city_at_step(grid.steps, -1);
    for (int t = 0; t < grid.steps; ++t) {
        int sum = 0;
        for (int k = 0; k < grid.cities; ++k) {
            if (cells[grid.cell(t, k)]) {
                ++sum;
                city_at_step[t] = k;
            }
        }
        if (sum != 1) report.row_violations.push_back(t);
    }
    for (int k = 0; k < grid.cities; ++k) {
        int sum = 0;
        for (int t = 0; t < grid.steps; ++t) sum += cells[grid.cell(t, k)];
        if (sum != 1) report.col_violations.push_back(k);
    }
    report.feasible = report.row_violations.empty() && report.col_violations.empty();
    if (report.feasible) {
        // The D-Wave form has one more step than cities: the final step
        // repeats the start and is dropped from the tour.
        int tour_len = grid.fixed.empty() ? grid.steps : grid.steps - 1;
        Tour tour;
        tour.order.assign(city_at_step.begin(), city_at_step.begin() + tour_len);
        report.tour = std::move(tour);
    }
    return report;
}

}  // namespace qtsp
