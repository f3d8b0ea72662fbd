#include "qtsp/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qtsp/anneal.hpp"
#include "qtsp/encode.hpp"
#include "qtsp/ilp.hpp"
#include "qtsp/oracle.hpp"
#include "qtsp/qaoa.hpp"
#include "qtsp/qpe.hpp"
#include "qtsp/rng.hpp"

namespace qtsp {

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::Sa: return "sa";
        case Backend::Qaoa: return "qaoa";
        case Backend::Qpe: return "qpe";
        case Backend::IlpAnneal: return "ilp-anneal";
        case Backend::BruteForce: return "brute-force";
        case Backend::HeldKarp: return "held-karp";
    }
    return "?";
}

Backend backend_from_name(const std::string& name) {
    if (name == "sa") return Backend::Sa;
    if (name == "qaoa") return Backend::Qaoa;
    if (name == "qpe") return Backend::Qpe;
    if (name == "ilp-anneal") return Backend::IlpAnneal;
    if (name == "brute-force" || name == "bf") return Backend::BruteForce;
    if (name == "held-karp" || name == "hk") return Backend::HeldKarp;
    throw std::invalid_argument("unknown backend: " + name);
}

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

SolveOutcome solve_sa(const TspInstance& inst, const StudyConfig& cfg, std::uint64_t seed) {
    double gamma = cfg.penalty > 0.0 ? cfg.penalty : default_penalty(inst);
    QuboModel qubo = build_qubo_sa_form(inst, gamma);
    IsingModel ising = qubo_to_ising(qubo);
    Schedule sched = default_schedule(ising);
    if (cfg.sweeps > 0) sched.sweeps = cfg.sweeps;

    Timer timer;
    SampleSet set = sample(ising, qubo, sched, cfg.runs, seed, cfg.threads);
    SolveOutcome out;
    out.wall_ms = timer.ms();
    out.feasible = set.best.has_value();
    if (set.best) out.cost = tour_cost(inst, *set.tours[*set.best]);
    return out;
}

SolveOutcome solve_ilp_anneal(const TspInstance& inst, const StudyConfig& cfg,
                              std::uint64_t seed) {
    IlpModel model = build_mtz(inst);
    double penalty = cfg.penalty > 0.0 ? cfg.penalty : inst.n() * inst.max_offdiag();
    PolyObjective poly = to_polynomial(model, penalty);
    IsingModel ising = poly_to_ising(poly);
    Schedule sched = default_schedule(ising);
    if (cfg.sweeps > 0) sched.sweeps = cfg.sweeps;

    Timer timer;
    SolveOutcome out;
    for (int r = 0; r < cfg.runs; ++r) {
        AnnealResult result = anneal(ising, sched, derive_seed(seed, {static_cast<std::uint64_t>(r)}));
        std::vector<std::uint8_t> bits(poly.num_vars);
        for (int i = 0; i < poly.num_vars; ++i) bits[i] = result.spins[i] > 0;
        std::vector<std::uint8_t> x(bits.begin(), bits.begin() + poly.num_x);
        auto tour = tour_from_x(model, x);
        if (!tour) continue;
        double cost = tour_cost(inst, *tour);
        if (!out.feasible || cost < *out.cost) out.cost = cost;
        out.feasible = true;
    }
    out.wall_ms = timer.ms();
    return out;
}

}  // namespace

SolveOutcome solve_once(Backend backend, const TspInstance& inst, const StudyConfig& cfg,
                        std::uint64_t seed) {
    SolveOutcome out;
    switch (backend) {
        case Backend::Sa:
            return solve_sa(inst, cfg, seed);
        case Backend::IlpAnneal:
            return solve_ilp_anneal(inst, cfg, seed);
        case Backend::Qaoa: {
            Timer timer;
            QaoaResult result = qaoa_solve(inst, AnsatzParams::Kind::Canonical, cfg.qaoa_depth,
                                           cfg.shots, seed, cfg.budget);
            out.wall_ms = timer.ms();
            out.feasible = result.tour.has_value();
            if (result.tour) out.cost = result.cost;
            return out;
        }
        case Backend::Qpe: {
            Timer timer;
            Tour tour = qpe_search(inst, cfg.qpe_precision, cfg.shots, seed).first;
            out.wall_ms = timer.ms();
            out.feasible = true;
            out.cost = tour_cost(inst, tour);
            return out;
        }
        case Backend::BruteForce: {
            Timer timer;
            OracleResult result = brute_force(inst);
            out.wall_ms = timer.ms();
            out.feasible = true;
            out.cost = result.cost;
            return out;
        }
        case Backend::HeldKarp: {
            Timer timer;
            OracleResult result = held_karp(inst);
            out.wall_ms = timer.ms();
            out.feasible = true;
            out.cost = result.cost;
            return out;
        }
    }
    return out;
}

namespace {

BenchRecord make_record(Backend backend, int n, int trial, bool normalized,
                        const SolveOutcome& outcome, std::uint64_t seed) {
    BenchRecord rec;
    rec.backend = backend;
    rec.n = n;
    rec.trial = trial;
    rec.normalized = normalized;
    rec.feasible = outcome.feasible;
    if (outcome.feasible) rec.cost = outcome.cost;
    rec.wall_ms = outcome.wall_ms;
    rec.seed = seed;
    return rec;
}

void sort_records(std::vector<BenchRecord>& records) {
    std::stable_sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
        if (a.n != b.n) return a.n < b.n;
        return a.trial < b.trial;
    });
}

}  // namespace

std::vector<BenchRecord> violation_study(Backend backend, const std::vector<int>& sizes,
                                         int trials, bool normalized, std::uint64_t seed,
                                         const StudyConfig& cfg) {
    std::vector<BenchRecord> records;
    for (int n : sizes) {
        for (int trial = 0; trial < trials; ++trial) {
            std::uint64_t inst_seed =
                derive_seed(seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)});
            TspInstance inst = random_instance(n, inst_seed, cfg.lo, cfg.hi);
            StudyConfig local = cfg;
            if (local.penalty <= 0.0) local.penalty = n;  // exact for unit-scale entries
            std::uint64_t solve_seed = derive_seed(inst_seed, {0x501e});
            SolveOutcome outcome;
            if (normalized) {
                outcome = solve_once(backend, normalize_minmax(inst).first, local, solve_seed);
            } else {
                outcome = solve_once(backend, inst, local, solve_seed);
            }
            records.push_back(make_record(backend, n, trial, normalized, outcome, solve_seed));
        }
    }
    sort_records(records);
    return records;
}

CurveFit fit_curve(const std::vector<std::pair<double, double>>& points) {
    std::set<double> distinct;
    for (const auto& [x, y] : points) distinct.insert(x);
    if (distinct.size() < 3)
        throw std::invalid_argument("insufficient sizes: curve fit needs >= 3 distinct sizes");

    // least squares of log(y) against x (exponential) and log x (power law)
    auto linfit = [](const std::vector<double>& xs, const std::vector<double>& ys) {
        double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        double denom = n * sxx - sx * sx;
        double slope = (n * sxy - sx * sy) / denom;
        double intercept = (sy - slope * sx) / n;
        double mean = sy / n;
        double ss_tot = 0, ss_res = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double pred = intercept + slope * xs[i];
            ss_res += (ys[i] - pred) * (ys[i] - pred);
            ss_tot += (ys[i] - mean) * (ys[i] - mean);
        }
        double r2 = ss_tot > 0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
        return std::tuple<double, double, double>(intercept, slope, r2);
    };

    std::vector<double> xs, lxs, lys;
    for (const auto& [x, y] : points) {
        double clamped = std::max(y, 1e-9);  // timer floor, keeps logs finite
        xs.push_back(x);
        lxs.push_back(std::log(x));
        lys.push_back(std::log(clamped));
    }
    auto [ie, se, r2e] = linfit(xs, lys);
    auto [ip, sp, r2p] = linfit(lxs, lys);

    CurveFit fit;
    if (r2e >= r2p) {
        fit.family = CurveFit::Family::Exponential;
        fit.a = std::exp(ie);
        fit.b_or_k = std::exp(se);
        fit.r2 = r2e;
    } else {
        fit.family = CurveFit::Family::PowerLaw;
        fit.a = std::exp(ip);
        fit.b_or_k = sp;
        fit.r2 = r2p;
    }
    return fit;
}

std::pair<std::vector<BenchRecord>, CurveFit> runtime_study(Backend backend,
                                                            const std::vector<int>& sizes,
                                                            int trials, std::uint64_t seed,
                                                            const StudyConfig& cfg) {
    std::vector<BenchRecord> records;
    for (int n : sizes) {
        for (int trial = 0; trial < trials; ++trial) {
            std::uint64_t inst_seed =
                derive_seed(seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)});
            TspInstance inst = random_instance(n, inst_seed, cfg.lo, cfg.hi);
            SolveOutcome outcome = solve_once(backend, inst, cfg, derive_seed(inst_seed, {0x501e}));
            records.push_back(
                make_record(backend, n, trial, false, outcome, derive_seed(inst_seed, {0x501e})));
        }
    }
    sort_records(records);

    // fit on per-size medians; single solves at small n are timer-noisy
    std::map<int, std::vector<double>> by_size;
    for (const auto& rec : records) by_size[rec.n].push_back(rec.wall_ms);
    std::vector<std::pair<double, double>> points;
    for (auto& [n, times] : by_size) {
        std::sort(times.begin(), times.end());
        points.emplace_back(static_cast<double>(n), times[times.size() / 2]);
    }
    return {std::move(records), fit_curve(points)};
}

std::vector<BenchRecord> quality_study(Backend backend, const std::vector<int>& sizes, int trials,
                                       std::uint64_t seed, const StudyConfig& cfg) {
    std::vector<BenchRecord> records;
    for (int n : sizes) {
        if (n > 10) throw std::invalid_argument("quality_study sizes capped at n <= 10");
        for (int trial = 0; trial < trials; ++trial) {
            std::uint64_t inst_seed =
                derive_seed(seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)});
            TspInstance inst = random_instance(n, inst_seed, cfg.lo, cfg.hi);
            std::uint64_t solve_seed = derive_seed(inst_seed, {0x501e});
            SolveOutcome outcome = solve_once(backend, inst, cfg, solve_seed);
            BenchRecord rec = make_record(backend, n, trial, false, outcome, solve_seed);
            rec.optimum = brute_force(inst).cost;
            if (rec.cost) rec.approx_ratio = *rec.cost / *rec.optimum;
            records.push_back(std::move(rec));
        }
    }
    sort_records(records);
    return records;
}

namespace {

std::string record_to_csv_row(const BenchRecord& rec, bool include_timings) {
    std::string row = backend_name(rec.backend) + "," + std::to_string(rec.n) + "," +
                      std::to_string(rec.trial) + "," + std::to_string(rec.seed) + "," +
                      (rec.normalized ? "1" : "0") + "," + (rec.feasible ? "1" : "0") + ",";
    if (rec.cost) row += format_double(*rec.cost);
    row += ",";
    if (rec.optimum) row += format_double(*rec.optimum);
    row += ",";
    if (rec.approx_ratio) row += format_double(*rec.approx_ratio);
    row += ",";
    row += format_double(include_timings ? rec.wall_ms : 0.0);
    return row;
}

std::string render_svg(const std::vector<BenchRecord>& records, const std::vector<CurveFit>& fits);

}  // namespace

std::string emit_report(const std::vector<BenchRecord>& records, const std::vector<CurveFit>& fits,
                        ReportFormat format, bool include_timings) {
    switch (format) {
        case ReportFormat::Csv: {
            std::string out =
                "backend,n,trial,seed,normalized,feasible,cost,optimum,approx_ratio,wall_ms\n";
            for (const auto& rec : records) out += record_to_csv_row(rec, include_timings) + "\n";
            return out;
        }
        case ReportFormat::Json: {
            std::string out = "{\"records\":[";
            for (std::size_t i = 0; i < records.size(); ++i) {
                const auto& rec = records[i];
                if (i) out += ',';
                out += "{\"backend\":\"" + backend_name(rec.backend) +
                       "\",\"n\":" + std::to_string(rec.n) +
                       ",\"trial\":" + std::to_string(rec.trial) +
                       ",\"seed\":" + std::to_string(rec.seed) +
                       ",\"normalized\":" + (rec.normalized ? "true" : "false") +
                       ",\"feasible\":" + (rec.feasible ? "true" : "false") + ",\"cost\":" +
                       (rec.cost ? format_double(*rec.cost) : "null") + ",\"optimum\":" +
                       (rec.optimum ? format_double(*rec.optimum) : "null") +
                       ",\"approx_ratio\":" +
                       (rec.approx_ratio ? format_double(*rec.approx_ratio) : "null") +
                       ",\"wall_ms\":" + format_double(include_timings ? rec.wall_ms : 0.0) + "}";
            }
            out += "],\"fits\":[";
            for (std::size_t i = 0; i < fits.size(); ++i) {
                if (i) out += ',';
                out += std::string("{\"family\":\"") +
                       (fits[i].family == CurveFit::Family::Exponential ? "exponential"
                                                                        : "power-law") +
                       "\",\"a\":" + format_double(fits[i].a) +
                       ",\"b_or_k\":" + format_double(fits[i].b_or_k) +
                       ",\"r2\":" + format_double(fits[i].r2) + "}";
            }
            out += "]}";
            return out;
        }
        case ReportFormat::Svg:
            if (records.empty())
                throw std::invalid_argument("svg report needs at least one record");
            return render_svg(records, fits);
    }
    throw std::invalid_argument("unknown report format");
}

std::vector<BenchRecord> records_from_csv(const std::string& text) {
    std::vector<BenchRecord> records;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        while (cells.size() < 10) cells.push_back("");
        BenchRecord rec;
        rec.backend = backend_from_name(cells[0]);
        rec.n = std::stoi(cells[1]);
        rec.trial = std::stoi(cells[2]);
        rec.seed = std::stoull(cells[3]);
        rec.normalized = cells[4] == "1";
        rec.feasible = cells[5] == "1";
        if (!cells[6].empty()) rec.cost = std::stod(cells[6]);
        if (!cells[7].empty()) rec.optimum = std::stod(cells[7]);
        if (!cells[8].empty()) rec.approx_ratio = std::stod(cells[8]);
        if (!cells[9].empty()) rec.wall_ms = std::stod(cells[9]);
        records.push_back(std::move(rec));
    }
    return records;
}

namespace {

// Minimal self-contained line plot: one polyline per backend series.
// Time on the y axis is log-scaled; the hardware complexities from the
// literature can only ever appear as dashed reference lines, never as data.
std::string render_svg(const std::vector<BenchRecord>& records, const std::vector<CurveFit>& fits) {
    bool timed = std::any_of(records.begin(), records.end(),
                             [](const BenchRecord& r) { return r.wall_ms > 0.0; });

    // series key: backend (+ normalization arm when both appear)
    bool split_norm = false;
    for (const auto& r : records)
        if (r.normalized) split_norm = true;

    std::map<std::string, std::map<int, std::pair<double, int>>> series;  // name -> n -> (sum, count)
    for (const auto& rec : records) {
        std::string name = backend_name(rec.backend);
        if (split_norm) name += rec.normalized ? " (normalized)" : " (raw)";
        double value = timed ? rec.wall_ms : (rec.feasible ? 0.0 : 1.0);
        auto& slot = series[name][rec.n];
        slot.first += value;
        slot.second += 1;
    }

    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    auto y_of = [&](double mean) { return timed ? std::log10(std::max(mean, 1e-6)) : mean; };
    for (const auto& [name, pts] : series)
        for (const auto& [n, agg] : pts) {
            double y = y_of(agg.first / agg.second);
            x_min = std::min(x_min, static_cast<double>(n));
            x_max = std::max(x_max, static_cast<double>(n));
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    if (x_max <= x_min) x_max = x_min + 1;
    if (y_max <= y_min) y_max = y_min + 1;

    const double w = 640, h = 400, ml = 60, mr = 160, mt = 30, mb = 40;
    auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (w - ml - mr); };
    auto sy = [&](double y) { return h - mb - (y - y_min) / (y_max - y_min) * (h - mt - mb); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (ml + (w - ml - mr) / 2) << "\" y=\"" << h - 8
        << "\" font-size=\"13\" text-anchor=\"middle\">graph size n</text>\n";
    out << "<text x=\"14\" y=\"" << (mt + (h - mt - mb) / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << (mt + (h - mt - mb) / 2) << ")\">"
        << (timed ? "wall time [ms, log scale]" : "violation probability") << "</text>\n";

    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    int color_idx = 0;
    double legend_y = mt + 10;
    for (const auto& [name, pts] : series) {
        const char* color = colors[color_idx++ % 6];
        std::ostringstream poly;
        for (const auto& [n, agg] : pts)
            poly << sx(n) << "," << sy(y_of(agg.first / agg.second)) << " ";
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
            << poly.str() << "\"/>\n";
        out << "<text x=\"" << w - mr + 10 << "\" y=\"" << legend_y << "\" font-size=\"12\" fill=\""
            << color << "\">" << name << "</text>\n";
        legend_y += 16;
    }

    if (timed) {
        // dashed reference slopes from the hardware literature, anchored at
        // the first series point; purely decorative context
        double n0 = x_min, y0 = y_min;
        struct Ref {
            const char* label;
            double (*f)(double, double);
        } refs[] = {
            {"O(2 log n) ref", [](double n, double n_ref) {
                 return std::log10((2.0 * std::log(n)) / (2.0 * std::log(n_ref)));
             }},
            {"O(n^1.5) ref", [](double n, double n_ref) {
                 return 1.5 * std::log10(n / n_ref);
             }},
        };
        for (const auto& ref : refs) {
            std::ostringstream poly;
            for (double n = x_min; n <= x_max + 1e-9; n += (x_max - x_min) / 32.0)
                poly << sx(n) << "," << sy(y0 + ref.f(n, n0)) << " ";
            out << "<polyline fill=\"none\" stroke=\"#999999\" stroke-width=\"1\" "
                   "stroke-dasharray=\"4 3\" points=\""
                << poly.str() << "\"/>\n";
            out << "<text x=\"" << w - mr + 10 << "\" y=\"" << legend_y
                << "\" font-size=\"11\" fill=\"#999999\">" << ref.label << "</text>\n";
            legend_y += 14;
        }
    }

    for (const auto& fit : fits) {
        out << "<text x=\"" << w - mr + 10 << "\" y=\"" << legend_y << "\" font-size=\"11\">fit: "
            << (fit.family == CurveFit::Family::Exponential ? "a*b^n, b=" : "a*n^k, k=")
            << format_double(fit.b_or_k) << ", r2=" << format_double(fit.r2) << "</text>\n";
        legend_y += 14;
    }

    out << "</svg>\n";
    return out.str();
}

}  // namespace

}  // namespace qtsp
