// qtsp: generate, encode, solve, verify and benchmark TSP instances across
// the annealing, gate-simulation and integer-programming pipelines.
//
// Exit codes: 0 success, 1 solve finished without any feasible result,
// 2 usage error.

#include <charconv>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qtsp/anneal.hpp"
#include "qtsp/bench.hpp"
#include "qtsp/encode.hpp"
#include "qtsp/ilp.hpp"
#include "qtsp/instance.hpp"
#include "qtsp/oracle.hpp"
#include "qtsp/qaoa.hpp"
#include "qtsp/qpe.hpp"
#include "qtsp/rng.hpp"

namespace {

using namespace qtsp;

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

void write_output(const std::optional<std::string>& path, const std::string& content) {
    if (path) write_file(*path, content);
}

TspInstance load_from_path(const std::string& path) { return load_instance(read_file(path)); }

std::string tour_json(const Tour& tour) {
    std::string out = "[";
    for (std::size_t i = 0; i < tour.order.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(tour.order[i]);
    }
    return out + "]";
}

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> sizes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto dots = item.find("..");
        if (dots != std::string::npos) {
            int lo = std::stoi(item.substr(0, dots));
            int hi = std::stoi(item.substr(dots + 2));
            for (int n = lo; n <= hi; ++n) sizes.push_back(n);
        } else if (!item.empty()) {
            sizes.push_back(std::stoi(item));
        }
    }
    if (sizes.empty()) throw CLI::ValidationError("--sizes", "no sizes given");
    return sizes;
}

struct GlobalOpts {
    std::uint64_t seed = 0;
    int threads = 1;
    bool timings = false;
};

int run_cli(int argc, char** argv) {
    CLI::App app{"TSP toolkit: QUBO/Ising annealing, QAOA and QPE simulation, "
                 "integer programming, exact oracles and benchmark studies"};
    app.require_subcommand(1);
    app.fallthrough();
    app.failure_message(CLI::FailureMessage::help);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "master seed; all randomness derives from it")
        ->capture_default_str();
    app.add_option("--threads", g.threads, "parallel annealing runs")->capture_default_str();
    app.add_flag("--timings", g.timings,
                 "include measured wall times in machine output (breaks byte-for-byte "
                 "reproducibility)");

    int exit_code = 0;

    // ---- gen ----------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a random symmetric instance");
    int gen_n = 6;
    double gen_lo = 1.0, gen_hi = 10.0;
    std::optional<std::string> gen_out;
    gen->add_option("--n", gen_n, "city count")->required();
    gen->add_option("--lo", gen_lo, "distance lower bound")->capture_default_str();
    gen->add_option("--hi", gen_hi, "distance upper bound")->capture_default_str();
    gen->add_option("--out", gen_out, "output path (JSON)");
    gen->callback([&] {
        TspInstance inst = random_instance(gen_n, g.seed, gen_lo, gen_hi);
        std::string json = inst.to_json();
        write_output(gen_out, json);
        if (!gen_out) std::cout << json << "\n";
        else std::cout << "wrote " << *gen_out << " (n=" << gen_n << ")\n";
    });

    // ---- encode -------------------------------------------------------
    auto* encode = app.add_subcommand("encode", "emit a QUBO model as JSON");
    std::string enc_instance, enc_form = "sa";
    double enc_penalty = 0.0;
    std::optional<std::string> enc_out;
    encode->add_option("--instance", enc_instance, "instance file")->required();
    encode->add_option("--form", enc_form, "sa | dwave")->capture_default_str();
    encode->add_option("--penalty", enc_penalty, "gamma / lambda (default n*max d)");
    encode->add_option("--out", enc_out, "output path");
    encode->callback([&] {
        TspInstance inst = load_from_path(enc_instance);
        double penalty = enc_penalty > 0.0 ? enc_penalty : default_penalty(inst);
        QuboModel model = enc_form == "dwave" ? build_qubo_dwave_form(inst, penalty)
                                              : build_qubo_sa_form(inst, penalty);
        std::string json = model.to_json();
        write_output(enc_out, json);
        if (!enc_out) std::cout << json << "\n";
        else
            std::cout << "wrote " << *enc_out << " (" << model.num_vars() << " variables, penalty "
                      << format_double(penalty) << ")\n";
    });

    // ---- solve --------------------------------------------------------
    auto* solve = app.add_subcommand("solve", "run a solver pipeline");
    solve->require_subcommand(1);

    auto* sa = solve->add_subcommand("sa", "simulated annealing on the n^2 one-hot QUBO");
    std::string sa_instance;
    double sa_gamma = 0.0;
    int sa_runs = 20, sa_sweeps = 0;
    std::string sa_schedule = "geometric";
    std::optional<std::string> sa_out, sa_samples_out;
    sa->add_option("--instance", sa_instance, "instance file")->required();
    sa->add_option("--gamma", sa_gamma, "penalty weight (default n*max d)");
    sa->add_option("--runs", sa_runs, "independent restarts")->capture_default_str();
    sa->add_option("--sweeps", sa_sweeps, "override schedule sweeps");
    sa->add_option("--schedule", sa_schedule, "geometric | linear")->capture_default_str();
    sa->add_option("--out", sa_out, "result JSON path");
    sa->add_option("--samples-out", sa_samples_out, "JSON-lines sample set path");
    sa->callback([&] {
        TspInstance inst = load_from_path(sa_instance);
        double gamma = sa_gamma > 0.0 ? sa_gamma : default_penalty(inst);
        QuboModel qubo = build_qubo_sa_form(inst, gamma);
        IsingModel ising = qubo_to_ising(qubo);
        Schedule sched = default_schedule(ising);
        if (sa_sweeps > 0) sched.sweeps = sa_sweeps;
        if (sa_schedule == "linear") sched.kind = Schedule::Kind::Linear;
        SampleSet set = sample(ising, qubo, sched, sa_runs, g.seed, g.threads);

        std::string json =
            "{\"command\":\"solve sa\",\"config\":{\"instance\":\"" + sa_instance +
            "\",\"gamma\":" + format_double(gamma) + ",\"runs\":" + std::to_string(sa_runs) +
            ",\"schedule\":{\"kind\":\"" +
            (sched.kind == Schedule::Kind::Geometric ? "geometric" : "linear") +
            "\",\"beta_start\":" + format_double(sched.beta_start) +
            ",\"beta_end\":" + format_double(sched.beta_end) +
            ",\"sweeps\":" + std::to_string(sched.sweeps) +
            "},\"seed\":" + std::to_string(g.seed) + "},\"feasible_count\":" +
            std::to_string(set.feasible_count);
        if (set.best) {
            const Tour& tour = *set.tours[*set.best];
            json += ",\"best\":{\"tour\":" + tour_json(tour) +
                    ",\"cost\":" + format_double(tour_cost(inst, tour)) +
                    ",\"energy\":" + format_double(set.results[*set.best].energy) + "}";
        } else {
            json += ",\"best\":null";
        }
        json += "}";
        write_output(sa_out, json);
        if (sa_samples_out) write_file(*sa_samples_out, sample_set_to_jsonl(set, g.timings));

        if (set.best) {
            const Tour& tour = *set.tours[*set.best];
            std::cout << "feasible " << set.feasible_count << "/" << sa_runs << ", best cost "
                      << format_double(tour_cost(inst, tour)) << ", tour " << tour_json(tour)
                      << "\n";
        } else {
            std::cout << "no feasible sample in " << sa_runs << " runs\n";
            exit_code = 1;
        }
    });

    auto* qaoa = solve->add_subcommand("qaoa", "variational search on the n^2-qubit encoding");
    std::string qaoa_instance, qaoa_ansatz = "canonical";
    int qaoa_depth = 2, qaoa_budget = 500;
    std::int64_t qaoa_shots = 2048;
    std::optional<std::string> qaoa_out, qaoa_trace_out;
    qaoa->add_option("--instance", qaoa_instance, "instance file")->required();
    qaoa->add_option("--ansatz", qaoa_ansatz, "canonical | hwe")->capture_default_str();
    qaoa->add_option("--depth", qaoa_depth, "p (canonical) or layer count (hwe)")
        ->capture_default_str();
    qaoa->add_option("--shots", qaoa_shots, "measurement shots")->capture_default_str();
    qaoa->add_option("--budget", qaoa_budget, "objective evaluation budget")
        ->capture_default_str();
    qaoa->add_option("--out", qaoa_out, "result JSON path");
    qaoa->add_option("--trace-out", qaoa_trace_out, "optimizer trace CSV path");
    qaoa->callback([&] {
        TspInstance inst = load_from_path(qaoa_instance);
        auto kind = qaoa_ansatz == "hwe" ? AnsatzParams::Kind::HardwareEfficient
                                         : AnsatzParams::Kind::Canonical;
        QaoaResult result = qaoa_solve(inst, kind, qaoa_depth, qaoa_shots, g.seed, qaoa_budget);

        std::string json = "{\"command\":\"solve qaoa\",\"config\":{\"instance\":\"" +
                           qaoa_instance + "\",\"ansatz\":\"" + qaoa_ansatz +
                           "\",\"depth\":" + std::to_string(qaoa_depth) +
                           ",\"shots\":" + std::to_string(qaoa_shots) +
                           ",\"budget\":" + std::to_string(qaoa_budget) +
                           ",\"seed\":" + std::to_string(g.seed) + "},\"expectation\":" +
                           format_double(result.optimized_expectation);
        if (result.tour) {
            json += ",\"tour\":" + tour_json(*result.tour) +
                    ",\"cost\":" + format_double(result.cost) + ",\"bitstring\":\"" +
                    result.best_bitstring + "\"}";
        } else {
            json += ",\"tour\":null}";
        }
        write_output(qaoa_out, json);
        if (qaoa_trace_out) write_file(*qaoa_trace_out, result.trace.to_csv());

        if (result.tour) {
            std::cout << "tour " << tour_json(*result.tour) << ", cost "
                      << format_double(result.cost) << ", <H_C> "
                      << format_double(result.optimized_expectation) << "\n";
        } else {
            std::cout << "no feasible bitstring sampled\n";
            exit_code = 1;
        }
    });

    auto* qpe = solve->add_subcommand("qpe", "phase-estimation search over canonical tours");
    std::string qpe_instance;
    int qpe_m = 8;
    std::int64_t qpe_shots = 8192;
    std::optional<std::string> qpe_out;
    qpe->add_option("--instance", qpe_instance, "instance file")->required();
    qpe->add_option("--m", qpe_m, "precision qubits")->capture_default_str();
    qpe->add_option("--shots", qpe_shots, "measurement shots")->capture_default_str();
    qpe->add_option("--out", qpe_out, "result JSON path");
    qpe->callback([&] {
        TspInstance inst = load_from_path(qpe_instance);
        auto [tour, est_cost] = qpe_search(inst, qpe_m, qpe_shots, g.seed);
        QpeOutcome outcome = run_qpe(inst, tour, qpe_m, qpe_shots, derive_seed(g.seed, {0xbe57}));

        std::string json = "{\"command\":\"solve qpe\",\"config\":{\"instance\":\"" +
                           qpe_instance + "\",\"m\":" + std::to_string(qpe_m) +
                           ",\"shots\":" + std::to_string(qpe_shots) +
                           ",\"seed\":" + std::to_string(g.seed) +
                           "},\"tour\":" + tour_json(tour) +
                           ",\"theta\":" + format_double(outcome.theta_hat) +
                           ",\"j\":" + std::to_string(outcome.j_hat) +
                           ",\"est_cost\":" + format_double(est_cost) + ",\"histogram\":{";
        bool first = true;
        for (const auto& [key, count] : outcome.histogram.counts) {
            if (!first) json += ',';
            first = false;
            json += "\"" + key + "\":" + std::to_string(count);
        }
        json += "}}";
        write_output(qpe_out, json);
        std::cout << "tour " << tour_json(tour) << ", est cost " << format_double(est_cost)
                  << " (theta=" << format_double(outcome.theta_hat) << ", j=" << outcome.j_hat
                  << ")\n";
    });

    auto* ilp = solve->add_subcommand("ilp", "MTZ/DFJ model through the annealing backend");
    std::string ilp_instance, ilp_form = "mtz";
    double ilp_penalty = 0.0;
    int ilp_runs = 20, ilp_sweeps = 0, ilp_max_subset = 0;
    std::optional<std::string> ilp_out, ilp_lp_out;
    ilp->add_option("--instance", ilp_instance, "instance file")->required();
    ilp->add_option("--formulation", ilp_form, "mtz | dfj")->capture_default_str();
    ilp->add_option("--penalty", ilp_penalty, "constraint penalty (default n*max d)");
    ilp->add_option("--runs", ilp_runs, "annealing restarts")->capture_default_str();
    ilp->add_option("--sweeps", ilp_sweeps, "override schedule sweeps");
    ilp->add_option("--max-subset", ilp_max_subset, "DFJ subtour subset cap (default n-1)");
    ilp->add_option("--out", ilp_out, "result JSON path");
    ilp->add_option("--lp-out", ilp_lp_out, "LP-style text export path");
    ilp->callback([&] {
        TspInstance inst = load_from_path(ilp_instance);
        IlpModel model = ilp_form == "dfj"
                             ? build_dfj(inst, ilp_max_subset > 0 ? ilp_max_subset : inst.n() - 1)
                             : build_mtz(inst);
        if (ilp_lp_out) write_file(*ilp_lp_out, model.to_lp_text());
        double penalty = ilp_penalty > 0.0 ? ilp_penalty : default_penalty(inst);
        PolyObjective poly = to_polynomial(model, penalty);
        IsingModel ising = poly_to_ising(poly);
        Schedule sched = default_schedule(ising);
        if (ilp_sweeps > 0) sched.sweeps = ilp_sweeps;

        std::optional<Tour> best;
        double best_cost = 0.0;
        int feasible_count = 0;
        for (int r = 0; r < ilp_runs; ++r) {
            AnnealResult res = anneal(ising, sched, derive_seed(g.seed, {(std::uint64_t)r}));
            std::vector<std::uint8_t> x(poly.num_x);
            for (int i = 0; i < poly.num_x; ++i) x[i] = res.spins[i] > 0;
            auto tour = tour_from_x(model, x);
            if (!tour) continue;
            ++feasible_count;
            double cost = tour_cost(inst, *tour);
            if (!best || cost < best_cost) {
                best = tour;
                best_cost = cost;
            }
        }

        std::string json = "{\"command\":\"solve ilp\",\"config\":{\"instance\":\"" +
                           ilp_instance + "\",\"formulation\":\"" + ilp_form +
                           "\",\"penalty\":" + format_double(penalty) +
                           ",\"runs\":" + std::to_string(ilp_runs) +
                           ",\"seed\":" + std::to_string(g.seed) +
                           "},\"variables\":" + std::to_string(poly.num_vars) +
                           ",\"feasible_count\":" + std::to_string(feasible_count);
        if (best) {
            json += ",\"best\":{\"tour\":" + tour_json(*best) +
                    ",\"cost\":" + format_double(best_cost) + "}}";
        } else {
            json += ",\"best\":null}";
        }
        write_output(ilp_out, json);

        if (best) {
            std::cout << "feasible " << feasible_count << "/" << ilp_runs << ", best cost "
                      << format_double(best_cost) << ", tour " << tour_json(*best) << "\n";
        } else {
            std::cout << "no feasible sample in " << ilp_runs << " runs\n";
            exit_code = 1;
        }
    });

    // ---- oracle -------------------------------------------------------
    auto* oracle = app.add_subcommand("oracle", "exact classical solvers");
    oracle->require_subcommand(1);
    for (const char* name : {"bf", "hk"}) {
        bool is_bf = std::string(name) == "bf";
        auto* sub = oracle->add_subcommand(
            name, is_bf ? "brute-force enumeration (n <= 10)" : "Held-Karp DP (n <= 18)");
        auto instance = std::make_shared<std::string>();
        auto out = std::make_shared<std::optional<std::string>>();
        sub->add_option("--instance", *instance, "instance file")->required();
        sub->add_option("--out", *out, "result JSON path");
        sub->callback([&, instance, out, is_bf] {
            TspInstance inst = load_from_path(*instance);
            OracleResult result = is_bf ? brute_force(inst) : held_karp(inst);
            std::string json = std::string("{\"command\":\"oracle ") + (is_bf ? "bf" : "hk") +
                               "\",\"config\":{\"instance\":\"" + *instance +
                               "\",\"seed\":" + std::to_string(g.seed) +
                               "},\"tour\":" + tour_json(result.tour) +
                               ",\"cost\":" + format_double(result.cost) +
                               ",\"explored\":" + std::to_string(result.explored) + "}";
            write_output(*out, json);
            std::cout << "cost " << format_double(result.cost) << ", tour "
                      << tour_json(result.tour) << "\n";
        });
    }

    // ---- bench --------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "studies over seeded instance suites");
    bench->require_subcommand(1);

    auto* violation = bench->add_subcommand("violation", "feasibility vs size study");
    std::string vio_backend = "sa", vio_sizes = "8,9,10", vio_normalize = "both";
    int vio_trials = 10, vio_sweeps = 2000, vio_runs = 1;
    std::optional<std::string> vio_out;
    violation->add_option("--backend", vio_backend, "sa | ilp-anneal")->capture_default_str();
    violation->add_option("--sizes", vio_sizes, "comma list or a..b range")
        ->capture_default_str();
    violation->add_option("--trials", vio_trials, "instances per size")->capture_default_str();
    violation->add_option("--normalize", vio_normalize, "on | off | both")->capture_default_str();
    violation->add_option("--sweeps", vio_sweeps, "SA sweep budget (tight by design)")
        ->capture_default_str();
    violation->add_option("--runs", vio_runs, "restarts per instance")->capture_default_str();
    violation->add_option("--out", vio_out, "records CSV path");
    violation->callback([&] {
        StudyConfig cfg;
        cfg.sweeps = vio_sweeps;
        cfg.runs = vio_runs;
        cfg.threads = g.threads;
        Backend backend = backend_from_name(vio_backend);
        std::vector<int> sizes = parse_sizes(vio_sizes);
        std::vector<BenchRecord> records;
        if (vio_normalize == "both" || vio_normalize == "off") {
            auto part = violation_study(backend, sizes, vio_trials, false, g.seed, cfg);
            records.insert(records.end(), part.begin(), part.end());
        }
        if (vio_normalize == "both" || vio_normalize == "on") {
            auto part = violation_study(backend, sizes, vio_trials, true, g.seed, cfg);
            records.insert(records.end(), part.begin(), part.end());
        }
        std::string csv = emit_report(records, {}, ReportFormat::Csv, g.timings);
        write_output(vio_out, csv);
        if (!vio_out) std::cout << csv;
        for (int n : sizes) {
            int raw = 0, norm = 0;
            for (const auto& rec : records) {
                if (rec.n != n || !rec.feasible) continue;
                (rec.normalized ? norm : raw) += 1;
            }
            std::cout << "n=" << n << ": feasible " << raw << "/" << vio_trials
                      << " raw, " << norm << "/" << vio_trials << " normalized\n";
        }
    });

    auto* runtime = bench->add_subcommand("runtime", "wall-time scaling with curve fit");
    std::string rt_backend = "hk", rt_sizes = "10..16";
    int rt_trials = 3;
    std::optional<std::string> rt_out, rt_fit_out;
    runtime->add_option("--backend", rt_backend, "backend name")->capture_default_str();
    runtime->add_option("--sizes", rt_sizes, "comma list or a..b range")->capture_default_str();
    runtime->add_option("--trials", rt_trials, "instances per size")->capture_default_str();
    runtime->add_option("--out", rt_out, "records CSV path");
    runtime->add_option("--fit-out", rt_fit_out, "fit JSON path");
    runtime->callback([&] {
        StudyConfig cfg;
        cfg.threads = g.threads;
        auto [records, fit] =
            runtime_study(backend_from_name(rt_backend), parse_sizes(rt_sizes), rt_trials, g.seed, cfg);
        write_output(rt_out, emit_report(records, {fit}, ReportFormat::Csv, g.timings));
        std::string fit_json =
            std::string("{\"family\":\"") +
            (fit.family == CurveFit::Family::Exponential ? "exponential" : "power-law") +
            "\",\"a\":" + format_double(fit.a) + ",\"b_or_k\":" + format_double(fit.b_or_k) +
            ",\"r2\":" + format_double(fit.r2) + "}";
        if (rt_fit_out) write_file(*rt_fit_out, fit_json);
        std::cout << (fit.family == CurveFit::Family::Exponential ? "exponential fit, base "
                                                                  : "power-law fit, exponent ")
                  << format_double(fit.b_or_k) << ", r2 " << format_double(fit.r2) << "\n";
    });

    auto* quality = bench->add_subcommand("quality", "approximation ratios against the oracle");
    std::string ql_backend = "sa", ql_sizes = "6";
    int ql_trials = 20, ql_sweeps = 0, ql_runs = 1;
    std::optional<std::string> ql_out;
    quality->add_option("--backend", ql_backend, "backend name")->capture_default_str();
    quality->add_option("--sizes", ql_sizes, "comma list or a..b range (<= 10)")
        ->capture_default_str();
    quality->add_option("--trials", ql_trials, "instances per size")->capture_default_str();
    quality->add_option("--sweeps", ql_sweeps, "SA sweep override");
    quality->add_option("--runs", ql_runs, "restarts per instance")->capture_default_str();
    quality->add_option("--out", ql_out, "records CSV path");
    quality->callback([&] {
        StudyConfig cfg;
        cfg.sweeps = ql_sweeps;
        cfg.runs = ql_runs;
        cfg.threads = g.threads;
        auto records =
            quality_study(backend_from_name(ql_backend), parse_sizes(ql_sizes), ql_trials, g.seed, cfg);
        std::string csv = emit_report(records, {}, ReportFormat::Csv, g.timings);
        write_output(ql_out, csv);
        if (!ql_out) std::cout << csv;
        double sum = 0.0;
        int count = 0;
        for (const auto& rec : records)
            if (rec.approx_ratio) {
                sum += *rec.approx_ratio;
                ++count;
            }
        if (count)
            std::cout << "mean approx ratio " << format_double(sum / count) << " over " << count
                      << " feasible records\n";
    });

    // ---- report -------------------------------------------------------
    auto* report = app.add_subcommand("report", "re-render saved records");
    std::string rep_in, rep_format = "svg";
    std::optional<std::string> rep_out;
    report->add_option("--in", rep_in, "records CSV path")->required();
    report->add_option("--format", rep_format, "csv | json | svg")->capture_default_str();
    report->add_option("--out", rep_out, "output path");
    report->callback([&] {
        auto records = records_from_csv(read_file(rep_in));
        ReportFormat format = rep_format == "csv"    ? ReportFormat::Csv
                              : rep_format == "json" ? ReportFormat::Json
                                                     : ReportFormat::Svg;
        std::string out = emit_report(records, {}, format, true);
        write_output(rep_out, out);
        if (!rep_out) std::cout << out;
        else std::cout << "wrote " << *rep_out << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
