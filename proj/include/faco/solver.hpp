#pragma once

#include "faco/construction.hpp"
#include "faco/error.hpp"
#include "faco/local_search.hpp"
#include "faco/neighbors.hpp"
#include "faco/pheromone.hpp"
#include "faco/random.hpp"
#include "faco/route.hpp"
#include "faco/tsp_instance.hpp"
#include "faco/worker_pool.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace faco {

/// 4 * sqrt(n) rounded up to the nearest multiple of 64.
inline std::size_t default_ant_count(std::size_t n) {
    if (n < 1) throw ParameterError("n must be positive");
    const double raw = 4.0 * std::sqrt(static_cast<double>(n));
    return 64 * static_cast<std::size_t>(std::ceil(raw / 64.0));
}

struct FacoParams {
    /// Number of ants; unset means default_ant_count(n).
    std::optional<std::size_t> ants;
    std::size_t iterations = 5000;
    double rho = 0.5;
    double beta = 1.0;
    std::size_t cl_size = 16;
    std::size_t bl_size = 64;
    std::size_t min_new_edges = 8;
    double p_best = 0.05;
    double gb_source_prob = 0.01;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    /// Wall-clock cap in seconds, checked between iterations.
    std::optional<double> time_limit;
    /// Apply the checklist 2-opt to every constructed tour.
    bool local_search = true;
    /// Neighbors scanned by the 2-opt per node; 0 means cl_size.
    std::size_t ls_neighbors = 0;
    /// Cap on 2-opt changes per tour; 0 means n.
    std::size_t ls_max_changes = 0;

    std::size_t ant_count(std::size_t n) const { return ants ? *ants : default_ant_count(n); }

    void validate(std::size_t n) const {
        if (ants && *ants < 1) throw ParameterError("ants must be at least 1");
        if (iterations < 1) throw ParameterError("iterations must be at least 1");
        if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("rho must lie in [0, 1]");
        if (!(beta >= 0.0)) throw ParameterError("beta must be non-negative");
        if (cl_size < 2) throw ParameterError("cl_size must be at least 2");
        if (cl_size + bl_size > n - 1) {
            throw ParameterError("cl_size + bl_size = " + std::to_string(cl_size + bl_size) +
                                 " exceeds n - 1 = " + std::to_string(n - 1));
        }
        if (!(p_best > 0.0 && p_best < 1.0)) throw ParameterError("p_best must lie in (0, 1)");
        if (!(gb_source_prob > 0.0 && gb_source_prob <= 1.0)) {
            throw ParameterError("gb_source_prob must lie in (0, 1]");
        }
        if (time_limit && !(*time_limit > 0.0)) throw ParameterError("time_limit must be positive");
    }
};

struct Solution {
    Route route;
    Cost cost = 0;
};

enum class SourceKind { initial, global_best, iteration_best };

/// Best-so-far, latest iteration-best and the current source solution.
class SolutionArchive {
public:
    explicit SolutionArchive(Solution initial)
        : global_best_(std::move(initial)),
          source_view_(global_best_.route),
          source_cost_(global_best_.cost) {}

    const Solution &global_best() const noexcept { return global_best_; }
    const std::optional<Solution> &iteration_best() const noexcept { return iter_best_; }
    const EdgeView &source() const noexcept { return source_view_; }
    Cost source_cost() const noexcept { return source_cost_; }
    SourceKind source_kind() const noexcept { return source_kind_; }

    /// Records the iteration best; returns true when it beats the global best.
    bool record_iteration(const Solution &iter_best) {
        iter_best_ = iter_best;
        if (iter_best.cost < global_best_.cost) {
            global_best_ = iter_best;
            return true;
        }
        return false;
    }

    void set_source(SourceKind kind) {
        const Solution &s =
            kind == SourceKind::iteration_best && iter_best_ ? *iter_best_ : global_best_;
        source_view_.assign(s.route.order());
        source_cost_ = s.cost;
        source_kind_ = kind;
    }

private:
    Solution global_best_;
    std::optional<Solution> iter_best_;
    EdgeView source_view_;
    Cost source_cost_;
    SourceKind source_kind_ = SourceKind::initial;
};

/// Global best with probability `gb_source_prob`, otherwise the latest
/// iteration best. Before any iteration the initial solution is the source.
inline SourceKind choose_source(const SolutionArchive &archive, double gb_source_prob, Rng &rng) {
    if (!archive.iteration_best()) return SourceKind::initial;
    return rng.uniform() < gb_source_prob ? SourceKind::global_best : SourceKind::iteration_best;
}

struct RunStats {
    std::string instance;
    std::size_t n = 0;
    std::size_t ants = 0;
    Cost initial_cost = 0;
    Cost best_cost = 0;
    /// Global-best cost after each completed iteration.
    std::vector<Cost> trace;
    std::optional<double> relative_error;
    std::size_t iterations_completed = 0;
    std::size_t last_improvement_iteration = 0;
    bool truncated = false;

    double total_seconds = 0;
    double init_seconds = 0;
    double construction_seconds = 0;
    double evaporation_seconds = 0;
    double deposition_seconds = 0;
};

struct RunResult {
    Route best;
    RunStats stats;
};

struct IterationSnapshot {
    std::size_t iteration;
    Cost iteration_best;
    Cost global_best;
    const PartialPheromone &pheromone;
    const SolutionArchive &archive;
};

struct RunHooks {
    std::function<void(const IterationSnapshot &)> on_iteration;
};

/// Relative error in percent against a best-known cost.
inline double relative_error_percent(Cost cost, Cost best_known) {
    return static_cast<double>(cost - best_known) / static_cast<double>(best_known) * 100.0;
}

namespace detail {

inline Cost cycle_cost(const TspInstance &inst, std::span<const NodeId> order) noexcept {
    Cost total = inst.cost(order.back(), order.front());
    for (std::size_t k = 0; k + 1 < order.size(); ++k) total += inst.cost(order[k], order[k + 1]);
    return total;
}

struct WorkerScratch {
    AntState ant;
    Route route;
    Checklist checklist;
    Solution best;
    std::size_t best_index = std::numeric_limits<std::size_t>::max();
};

inline double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace detail

/// Seed salt for the per-iteration source-selection stream.
inline constexpr std::uint64_t source_stream = std::numeric_limits<std::uint64_t>::max();

/// Runs the FACO main loop. Every (iteration, ant) pair draws from its own
/// random stream, so results do not depend on the worker count.
inline RunResult run(const TspInstance &inst, const FacoParams &params, const RunHooks &hooks = {}) {
    using clock = std::chrono::steady_clock;
    const std::size_t n = inst.size();
    params.validate(n);
    const std::size_t ants = params.ant_count(n);
    const auto t_start = clock::now();

    RunStats stats;
    stats.instance = inst.name();
    stats.n = n;
    stats.ants = ants;

    const NeighborLists lists = build_neighbor_lists(inst, params.cl_size, params.bl_size);

    Rng init_rng(stream_seed(params.seed, 0, source_stream - 1));
    const auto first = static_cast<NodeId>(init_rng.below(n));
    Solution initial;
    initial.route = improve_initial(nearest_neighbor_tour(inst, lists, first), lists, inst);
    initial.cost = tour_length(inst, initial.route);
    stats.initial_cost = initial.cost;

    const double avg = static_cast<double>(params.cl_size);
    PartialPheromone pheromone(
        lists, compute_limits(initial.cost, params.rho, params.p_best, n, avg));
    pheromone.init_trails();
    SolutionArchive archive(std::move(initial));
    const HeuristicTable heuristic(lists, params.beta);
    const ConstructionContext ctx{inst, lists, pheromone, heuristic};
    const NewEdgeSchedule schedule{params.min_new_edges};

    WorkerPool pool(params.threads);
    std::vector<detail::WorkerScratch> scratch(pool.size());
    for (auto &s : scratch) s.checklist.resize(n);

    TwoOptOptions ls_opts;
    ls_opts.neighbor_count = params.ls_neighbors;
    ls_opts.max_changes = params.ls_max_changes;

    stats.init_seconds = detail::seconds_since(t_start);
    stats.trace.reserve(params.iterations);

    for (std::size_t it = 1; it <= params.iterations; ++it) {
        if (params.time_limit && detail::seconds_since(t_start) >= *params.time_limit) {
            stats.truncated = true;
            break;
        }

        const auto t_build = clock::now();
        for (auto &s : scratch) s.best_index = std::numeric_limits<std::size_t>::max();
        pool.for_each(ants, [&](std::size_t w, std::size_t j) {
            auto &s = scratch[w];
            Rng rng(stream_seed(params.seed, it, j));
            const auto start = static_cast<NodeId>(rng.below(n));
            construct_solution(archive.source(), start, schedule.calc_num_new_edges(), ctx, rng,
                               s.ant);
            s.route.assign_unchecked(std::span<const NodeId>(s.ant.route));
            if (params.local_search) {
                s.checklist.push_all(s.ant.checklist);
                two_opt_checklist(s.route, s.checklist, lists, inst, ls_opts);
                s.checklist.clear();
            }
            const Cost cost = detail::cycle_cost(inst, s.route.order());
            if (s.best_index == std::numeric_limits<std::size_t>::max() || cost < s.best.cost ||
                (cost == s.best.cost && j < s.best_index)) {
                s.best.route = s.route;
                s.best.cost = cost;
                s.best_index = j;
            }
        });
        stats.construction_seconds += detail::seconds_since(t_build);

        const detail::WorkerScratch *winner = nullptr;
        for (const auto &s : scratch) {
            if (s.best_index == std::numeric_limits<std::size_t>::max()) continue;
            if (!winner || s.best.cost < winner->best.cost ||
                (s.best.cost == winner->best.cost && s.best_index < winner->best_index)) {
                winner = &s;
            }
        }
        if (archive.record_iteration(winner->best)) {
            pheromone.set_limits(compute_limits(archive.global_best().cost, params.rho,
                                                params.p_best, n, avg));
            stats.last_improvement_iteration = it;
        }

        const auto t_evap = clock::now();
        const std::size_t parts = pool.size();
        pool.for_each(parts, [&](std::size_t, std::size_t p) {
            const auto lo = static_cast<NodeId>(n * p / parts);
            const auto hi = static_cast<NodeId>(n * (p + 1) / parts);
            pheromone.evaporate_nodes(lo, hi);
        });
        stats.evaporation_seconds += detail::seconds_since(t_evap);

        const auto t_dep = clock::now();
        Rng source_rng(stream_seed(params.seed, it, source_stream));
        archive.set_source(choose_source(archive, params.gb_source_prob, source_rng));
        pheromone.deposit(archive.source(), 1.0 / static_cast<double>(archive.source_cost()));
        stats.deposition_seconds += detail::seconds_since(t_dep);

        stats.trace.push_back(archive.global_best().cost);
        stats.iterations_completed = it;
        if (hooks.on_iteration) {
            hooks.on_iteration(IterationSnapshot{it, winner->best.cost, archive.global_best().cost,
                                                 pheromone, archive});
        }
    }

    stats.best_cost = archive.global_best().cost;
    if (inst.best_known()) {
        stats.relative_error = relative_error_percent(stats.best_cost, *inst.best_known());
    }
    stats.total_seconds = detail::seconds_since(t_start);
    return RunResult{archive.global_best().route, std::move(stats)};
}

}  // namespace faco
