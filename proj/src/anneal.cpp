#include "qtsp/anneal.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "qtsp/rng.hpp"

namespace qtsp {

double Schedule::beta_at(int sweep) const {
    if (sweeps <= 1) return beta_end;
    double f = static_cast<double>(sweep) / (sweeps - 1);
    if (kind == Kind::Geometric) return beta_start * std::pow(beta_end / beta_start, f);
    return beta_start + (beta_end - beta_start) * f;
}

Schedule default_schedule(const IsingModel& model) {
    // Probe |dE| on random configurations with a fixed internal stream so the
    // schedule is a pure function of the model.
    Rng rng(0x5ca1ab1edeadbeefULL);
    int n = model.num_spins;
    std::vector<std::int8_t> spins(n);
    double sum_abs = 0.0;
    std::size_t count = 0;
    double min_nonzero = std::numeric_limits<double>::infinity();
    int probes = std::max(4, 256 / std::max(1, n));
    for (int p = 0; p < probes; ++p) {
        for (int i = 0; i < n; ++i) spins[i] = rng.next_u64() & 1 ? 1 : -1;
        for (int i = 0; i < n; ++i) {
            double de = std::abs(delta_energy(model, spins, i));
            sum_abs += de;
            ++count;
            if (de > 1e-12) min_nonzero = std::min(min_nonzero, de);
        }
    }
    double mean_abs = count ? sum_abs / count : 0.0;
    Schedule sched;
    sched.kind = Schedule::Kind::Geometric;
    sched.beta_start = mean_abs > 1e-12 ? 0.1 / mean_abs : 0.1;
    sched.beta_end = std::isfinite(min_nonzero) ? 50.0 / min_nonzero : 50.0;
    if (sched.beta_end <= sched.beta_start) sched.beta_end = sched.beta_start * 1e4;
    sched.sweeps = 1000 * std::max(1, n);
    return sched;
}

double delta_energy(const IsingModel& model, std::span<const std::int8_t> spins, int i) {
    if (i < 0 || i >= model.num_spins) throw std::out_of_range("spin index out of range");
    const double* row = model.j.data() + static_cast<std::size_t>(i) * model.num_spins;
    double field = model.h[i];
    double acc = 0.0;
    for (int b = 0; b < model.num_spins; ++b) acc += row[b] * spins[b];
    // row i has zero diagonal, and J is symmetric: spin i couples with 2*J_ib
    return -2.0 * spins[i] * (2.0 * acc + field);
}

AnnealResult anneal(const IsingModel& model, const Schedule& sched, std::uint64_t seed) {
    if (model.num_spins < 1) throw std::invalid_argument("model needs at least one spin");
    if (!(sched.beta_start < sched.beta_end)) throw std::invalid_argument("beta_start must be < beta_end");
    if (sched.sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");
    auto t0 = std::chrono::steady_clock::now();

    Rng rng(seed);
    int n = model.num_spins;
    std::vector<std::int8_t> spins(n);
    for (int i = 0; i < n; ++i) spins[i] = rng.next_u64() & 1 ? 1 : -1;

    double energy = model.energy(spins);
    std::vector<std::int8_t> best_spins = spins;
    double best_energy = energy;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    AnnealResult result;
    result.trace.reserve(sched.sweeps);
    for (int sweep = 0; sweep < sched.sweeps; ++sweep) {
        double beta = sched.beta_at(sweep);
        rng.shuffle(order);
        for (int i : order) {
            double de = delta_energy(model, spins, i);
            if (de <= 0.0 || rng.uniform() < std::exp(-beta * de)) {
                spins[i] = static_cast<std::int8_t>(-spins[i]);
                energy += de;
                if (energy < best_energy) {
                    best_energy = energy;
                    best_spins = spins;
                }
            }
        }
        result.trace.push_back(best_energy);
    }

    // re-evaluate from scratch to drop incremental rounding drift
    result.spins = std::move(best_spins);
    result.energy = model.energy(result.spins);
    result.seed = seed;
    result.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

SampleSet sample(const IsingModel& model, const QuboModel& qubo, const Schedule& sched, int runs,
                 std::uint64_t seed, int threads) {
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (qubo.num_vars() != model.num_spins)
        throw std::invalid_argument("qubo and ising variable counts differ");

    SampleSet set;
    set.results.resize(runs);
    set.tours.resize(runs);

    auto run_range = [&](int begin, int end) {
        for (int r = begin; r < end; ++r) {
            std::uint64_t run_seed = derive_seed(seed, {static_cast<std::uint64_t>(r)});
            set.results[r] = anneal(model, sched, run_seed);
            std::vector<std::uint8_t> x(model.num_spins);
            for (int i = 0; i < model.num_spins; ++i)
                x[i] = set.results[r].spins[i] > 0 ? 1 : 0;
            DecodeReport report = decode_assignment(qubo, x);
            if (report.feasible) set.tours[r] = std::move(report.tour);
        }
    };

    threads = std::max(1, std::min(threads, runs));
    if (threads == 1) {
        run_range(0, runs);
    } else {
        std::vector<std::thread> pool;
        int chunk = (runs + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            int begin = t * chunk;
            int end = std::min(runs, begin + chunk);
            if (begin < end) pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    for (int r = 0; r < runs; ++r) {
        if (!set.tours[r]) continue;
        ++set.feasible_count;
        if (!set.best || set.results[r].energy < set.results[*set.best].energy) set.best = r;
    }
    return set;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string sample_set_to_jsonl(const SampleSet& set, bool include_timings) {
    std::string out;
    for (std::size_t r = 0; r < set.results.size(); ++r) {
        const AnnealResult& res = set.results[r];
        out += "{\"seed\":" + std::to_string(res.seed) +
               ",\"energy\":" + format_double(res.energy) +
               ",\"feasible\":" + (set.tours[r] ? "true" : "false") + ",\"tour\":";
        if (set.tours[r]) {
            out += '[';
            const auto& order = set.tours[r]->order;
            for (std::size_t i = 0; i < order.size(); ++i) {
                if (i) out += ',';
                out += std::to_string(order[i]);
            }
            out += ']';
        } else {
            out += "null";
        }
        out += ",\"wall_ms\":" + format_double(include_timings ? res.wall_ms : 0.0) + "}\n";
    }
    return out;
}

}  // namespace qtsp
