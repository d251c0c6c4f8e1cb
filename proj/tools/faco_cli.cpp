#include "run_record.hpp"

#include "faco/faco.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using faco::cli::json;

struct Options {
    faco::FacoParams params;
    std::size_t ants = 0;
    CLI::Option *ants_opt = nullptr;
    CLI::Option *time_opt = nullptr;
    double time_limit = 0;
    bool no_ls = false;
    std::size_t runs = 1;
    std::string best_known;
    std::string output;
    bool trace = false;
};

std::size_t default_threads() {
    if (const char *env = std::getenv("FACO_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception &) {
        }
        std::cerr << "warning: ignoring invalid FACO_THREADS='" << env << "'\n";
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void add_solver_options(CLI::App *app, Options &o) {
    auto &p = o.params;
    p.threads = default_threads();
    o.ants_opt = app->add_option("--ants", o.ants, "Ants per iteration (default: 4*sqrt(n) rounded up to a multiple of 64)");
    app->add_option("--iterations", p.iterations, "Iterations per run")->capture_default_str();
    app->add_option("--rho", p.rho, "Pheromone retention in [0, 1]")->capture_default_str();
    app->add_option("--beta", p.beta, "Heuristic exponent")->capture_default_str();
    app->add_option("--cl-size", p.cl_size, "Candidate list size")->capture_default_str();
    app->add_option("--bl-size", p.bl_size, "Backup list size")->capture_default_str();
    app->add_option("--min-new-edges", p.min_new_edges, "New edges before copying from the source")
        ->capture_default_str();
    app->add_option("--p-best", p.p_best, "Probability used for the lower trail limit")->capture_default_str();
    app->add_option("--gb-source-prob", p.gb_source_prob, "Probability of using the global best as source")
        ->capture_default_str();
    app->add_option("--seed", p.seed, "Master seed; run r uses seed + r")->capture_default_str();
    app->add_option("--threads", p.threads, "Worker threads (default: FACO_THREADS or all cores)");
    o.time_opt = app->add_option("--time-limit", o.time_limit, "Wall-clock cap per run in seconds");
    app->add_flag("--no-ls", o.no_ls, "Disable the 2-opt applied to every ant");
    app->add_option("--ls-neighbors", p.ls_neighbors, "Neighbors scanned by the 2-opt (0: cl-size)");
    app->add_option("--ls-max-changes", p.ls_max_changes, "2-opt move cap per tour (0: n)");
    app->add_option("--runs", o.runs, "Independent seeded runs")->capture_default_str();
    app->add_option("--best-known", o.best_known, "Best-known cost, or a file of 'name cost' lines");
    app->add_option("--output,-o", o.output, "Write the JSON document here instead of stdout");
    app->add_flag("--trace", o.trace, "Include the per-iteration best-cost trace");
}

void finish_options(Options &o) {
    if (o.ants_opt->count() > 0) {
        if (o.ants < 1) throw faco::ParameterError("--ants must be at least 1");
        o.params.ants = o.ants;
    }
    if (o.time_opt->count() > 0) o.params.time_limit = o.time_limit;
    o.params.local_search = !o.no_ls;
    if (o.params.threads < 1) throw faco::ParameterError("--threads must be at least 1");
    if (o.runs < 1) throw faco::ParameterError("--runs must be at least 1");
}

bool is_number(const std::string &s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

/// Resolves --best-known for `inst`: a plain number, or a sidecar table keyed
/// by instance name.
void apply_best_known(faco::TspInstance &inst, const std::string &value,
                      const std::map<std::string, faco::Cost> *table) {
    if (!value.empty() && is_number(value)) {
        inst.set_best_known(std::stoll(value));
        return;
    }
    if (table) {
        if (auto it = table->find(inst.name()); it != table->end()) inst.set_best_known(it->second);
    }
}

std::vector<faco::cli::RunSummary> run_many(const faco::TspInstance &inst, const faco::FacoParams &base,
                                            std::size_t runs, faco::Route *best_tour) {
    std::vector<faco::cli::RunSummary> out;
    faco::Cost best = 0;
    for (std::size_t r = 0; r < runs; ++r) {
        faco::FacoParams p = base;
        p.seed = base.seed + r;
        auto result = faco::run(inst, p);
        if (best_tour && (r == 0 || result.stats.best_cost < best)) {
            best = result.stats.best_cost;
            *best_tour = result.best;
        }
        out.push_back({p.seed, std::move(result.stats)});
    }
    return out;
}

void emit(const json &doc, const std::string &path) {
    if (path.empty()) {
        std::cout << doc.dump(2) << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << doc.dump(2) << '\n';
}

int cmd_solve(const std::string &instance_path, Options &o, const std::string &tour_out) {
    finish_options(o);
    auto inst = faco::load_tsplib(instance_path);
    std::map<std::string, faco::Cost> table;
    if (!o.best_known.empty() && !is_number(o.best_known)) table = faco::load_best_known(o.best_known);
    apply_best_known(inst, o.best_known, &table);
    o.params.validate(inst.size());

    faco::Route best;
    const auto runs = run_many(inst, o.params, o.runs, &best);
    emit(faco::cli::run_record(inst, o.params, runs, o.trace), o.output);

    if (!tour_out.empty()) {
        std::ofstream f(tour_out);
        if (!f) throw std::runtime_error("cannot write " + tour_out);
        f << faco::format_tour(inst.name(), best.order(), faco::tour_length(inst, best));
    }
    return 0;
}

struct BenchEntry {
    std::string path;
    std::optional<faco::Cost> best_known;
};

std::vector<BenchEntry> read_instance_list(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read instance list " + path);
    const auto base = std::filesystem::path(path).parent_path();
    std::vector<BenchEntry> out;
    std::string line;
    while (std::getline(f, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream in(line);
        BenchEntry e;
        if (!(in >> e.path)) continue;
        std::string cost;
        if (in >> cost) {
            if (!is_number(cost)) throw std::runtime_error("bad best-known cost '" + cost + "' in " + path);
            e.best_known = std::stoll(cost);
        }
        if (std::filesystem::path(e.path).is_relative() && !base.empty()) {
            e.path = (base / e.path).string();
        }
        out.push_back(std::move(e));
    }
    return out;
}

template <typename T>
std::vector<T> sorted_axis(std::vector<T> values, T fallback) {
    if (values.empty()) return {fallback};
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

int cmd_bench(const std::string &list_path, Options &o, std::vector<std::size_t> sweep_new_edges,
              std::vector<double> sweep_rho, std::vector<std::size_t> sweep_ants) {
    finish_options(o);
    const auto entries = read_instance_list(list_path);
    std::map<std::string, faco::Cost> table;
    if (!o.best_known.empty() && !is_number(o.best_known)) table = faco::load_best_known(o.best_known);

    const auto new_edges_axis = sorted_axis(std::move(sweep_new_edges), o.params.min_new_edges);
    const auto rho_axis = sorted_axis(std::move(sweep_rho), o.params.rho);
    std::vector<std::optional<std::size_t>> ants_axis;
    if (sweep_ants.empty()) {
        ants_axis.push_back(o.params.ants);
    } else {
        for (auto a : sorted_axis(std::move(sweep_ants), std::size_t{0})) ants_axis.emplace_back(a);
    }

    json records = json::array();
    json failures = json::array();
    for (const auto &entry : entries) {
        try {
            auto inst = faco::load_tsplib(entry.path);
            if (entry.best_known) inst.set_best_known(entry.best_known);
            apply_best_known(inst, o.best_known, &table);
            for (const auto ants : ants_axis) {
                for (const double rho : rho_axis) {
                    for (const auto new_edges : new_edges_axis) {
                        faco::FacoParams p = o.params;
                        p.ants = ants;
                        p.rho = rho;
                        p.min_new_edges = new_edges;
                        p.validate(inst.size());
                        const auto runs = run_many(inst, p, o.runs, nullptr);
                        records.push_back(faco::cli::run_record(inst, p, runs, o.trace));
                        std::cerr << inst.name() << " ants=" << p.ant_count(inst.size()) << " rho=" << rho
                                  << " min_new_edges=" << new_edges << " done\n";
                    }
                }
            }
        } catch (const std::exception &e) {
            failures.push_back(json{{"instance", entry.path}, {"error", e.what()}});
            std::cerr << "error: " << entry.path << ": " << e.what() << '\n';
        }
    }

    json doc;
    doc["records"] = std::move(records);
    doc["failures"] = failures;
    emit(doc, o.output);
    return failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Focused ant colony optimization for the symmetric Euclidean TSP"};
    app.require_subcommand(1);

    Options solve_opts;
    std::string instance_path;
    std::string tour_out;
    auto *solve = app.add_subcommand("solve", "Solve one instance and print a JSON run record");
    solve->add_option("instance", instance_path, "TSPLIB .tsp file")->required();
    solve->add_option("--tour-out", tour_out, "Write the best tour in TSPLIB .tour format");
    add_solver_options(solve, solve_opts);

    Options bench_opts;
    std::string list_path;
    std::vector<std::size_t> sweep_new_edges;
    std::vector<double> sweep_rho;
    std::vector<std::size_t> sweep_ants;
    auto *bench = app.add_subcommand("bench", "Seeded multi-run benchmark with optional parameter sweeps");
    bench->add_option("--instances", list_path, "File with one instance path per line, optionally followed by its best-known cost")
        ->required();
    bench->add_option("--sweep-min-new-edges", sweep_new_edges, "Values of min_new_edges to sweep")->delimiter(',');
    bench->add_option("--sweep-rho", sweep_rho, "Values of rho to sweep")->delimiter(',');
    bench->add_option("--sweep-ants", sweep_ants, "Ant counts to sweep")->delimiter(',');
    bench_opts.runs = 10;
    add_solver_options(bench, bench_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return cmd_solve(instance_path, solve_opts, tour_out);
        return cmd_bench(list_path, bench_opts, std::move(sweep_new_edges), std::move(sweep_rho),
                         std::move(sweep_ants));
    } catch (const faco::ParseError &e) {
        std::cerr << "parse error: " << e.what() << '\n';
    } catch (const faco::UnsupportedFormatError &e) {
        std::cerr << "unsupported input: " << e.what() << '\n';
    } catch (const faco::ParameterError &e) {
        std::cerr << "parameter error: " << e.what() << '\n';
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return 2;
}
