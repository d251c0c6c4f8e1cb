#pragma once

#include "faco/solver.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace faco::cli {

using json = nlohmann::ordered_json;

struct RunSummary {
    std::uint64_t seed = 0;
    RunStats stats;
};

struct Aggregate {
    std::size_t runs = 0;
    Cost best_cost = 0;
    Cost worst_cost = 0;
    double mean_cost = 0;
    std::optional<double> mean_error;
    std::optional<double> best_error;
    std::optional<double> worst_error;
    double mean_seconds = 0;
};

inline Aggregate aggregate(const std::vector<RunSummary> &runs) {
    Aggregate agg;
    agg.runs = runs.size();
    if (runs.empty()) return agg;
    agg.best_cost = runs.front().stats.best_cost;
    agg.worst_cost = runs.front().stats.best_cost;
    double cost_sum = 0;
    double err_sum = 0;
    double sec_sum = 0;
    bool have_error = true;
    for (const auto &r : runs) {
        agg.best_cost = std::min(agg.best_cost, r.stats.best_cost);
        agg.worst_cost = std::max(agg.worst_cost, r.stats.best_cost);
        cost_sum += static_cast<double>(r.stats.best_cost);
        sec_sum += r.stats.total_seconds;
        if (r.stats.relative_error) {
            err_sum += *r.stats.relative_error;
            agg.best_error = std::min(agg.best_error.value_or(*r.stats.relative_error),
                                      *r.stats.relative_error);
            agg.worst_error = std::max(agg.worst_error.value_or(*r.stats.relative_error),
                                       *r.stats.relative_error);
        } else {
            have_error = false;
        }
    }
    const auto count = static_cast<double>(runs.size());
    agg.mean_cost = cost_sum / count;
    agg.mean_seconds = sec_sum / count;
    if (have_error) {
        agg.mean_error = err_sum / count;
    } else {
        agg.best_error.reset();
        agg.worst_error.reset();
    }
    return agg;
}

template <typename T>
json nullable(const std::optional<T> &v) {
    return v ? json(*v) : json(nullptr);
}

inline json params_to_json(const FacoParams &p, std::size_t n) {
    json j;
    j["ants"] = p.ant_count(n);
    j["iterations"] = p.iterations;
    j["rho"] = p.rho;
    j["beta"] = p.beta;
    j["cl_size"] = p.cl_size;
    j["bl_size"] = p.bl_size;
    j["min_new_edges"] = p.min_new_edges;
    j["p_best"] = p.p_best;
    j["gb_source_prob"] = p.gb_source_prob;
    j["local_search"] = p.local_search;
    j["ls_neighbors"] = p.ls_neighbors == 0 ? p.cl_size : p.ls_neighbors;
    j["ls_max_changes"] = p.ls_max_changes == 0 ? n : p.ls_max_changes;
    j["threads"] = p.threads;
    j["time_limit"] = nullable(p.time_limit);
    return j;
}

inline json timing_to_json(const RunStats &s) {
    json t;
    t["total_seconds"] = s.total_seconds;
    t["init_seconds"] = s.init_seconds;
    t["construction_ls_seconds"] = s.construction_seconds;
    t["evaporation_seconds"] = s.evaporation_seconds;
    t["deposition_seconds"] = s.deposition_seconds;
    return t;
}

inline json run_to_json(std::size_t index, const RunSummary &r, bool with_trace) {
    json j;
    j["run"] = index;
    j["seed"] = r.seed;
    j["initial_cost"] = r.stats.initial_cost;
    j["best_cost"] = r.stats.best_cost;
    j["relative_error"] = nullable(r.stats.relative_error);
    j["iterations_completed"] = r.stats.iterations_completed;
    j["last_improvement_iteration"] = r.stats.last_improvement_iteration;
    j["truncated"] = r.stats.truncated;
    j["timing"] = timing_to_json(r.stats);
    j["trace"] = with_trace ? json(r.stats.trace) : json(nullptr);
    return j;
}

inline json aggregate_to_json(const Aggregate &a) {
    json j;
    j["runs"] = a.runs;
    j["best_cost"] = a.best_cost;
    j["worst_cost"] = a.worst_cost;
    j["mean_cost"] = a.mean_cost;
    j["mean_error"] = nullable(a.mean_error);
    j["best_error"] = nullable(a.best_error);
    j["worst_error"] = nullable(a.worst_error);
    j["timing"] = json{{"mean_seconds", a.mean_seconds}};
    return j;
}

/// One instance under one parameter set, with every run and the aggregate.
inline json run_record(const TspInstance &inst, const FacoParams &params,
                       const std::vector<RunSummary> &runs, bool with_trace) {
    json j;
    j["instance"] = inst.name();
    j["n"] = inst.size();
    j["weight_kind"] = std::string(to_string(inst.weight_kind()));
    j["best_known"] = nullable(inst.best_known());
    j["params"] = params_to_json(params, inst.size());
    j["seed"] = params.seed;
    json list = json::array();
    for (std::size_t r = 0; r < runs.size(); ++r) list.push_back(run_to_json(r, runs[r], with_trace));
    j["runs"] = std::move(list);
    j["aggregate"] = aggregate_to_json(aggregate(runs));
    return j;
}

}  // namespace faco::cli
