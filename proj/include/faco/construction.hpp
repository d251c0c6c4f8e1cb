#pragma once

#include "faco/error.hpp"
#include "faco/neighbors.hpp"
#include "faco/pheromone.hpp"
#include "faco/random.hpp"
#include "faco/route.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace faco {

/// eta^beta for every candidate edge, with eta = 1 / cost. Zero-cost edges
/// (duplicate points) get the weight of a 1e-9 cost edge.
class HeuristicTable {
public:
    HeuristicTable(const NeighborLists &lists, double beta)
        : cl_size_(lists.cl_size()), beta_(beta), weights_(lists.size() * lists.cl_size()) {
        for (std::size_t u = 0; u < lists.size(); ++u) {
            const auto costs = lists.candidate_costs(static_cast<NodeId>(u));
            for (std::size_t s = 0; s < cl_size_; ++s) {
                const double d = std::max(static_cast<double>(costs[s]), 1e-9);
                weights_[u * cl_size_ + s] = std::pow(1.0 / d, beta);
            }
        }
    }

    double beta() const noexcept { return beta_; }
    double weight(NodeId u, std::size_t slot) const noexcept {
        return weights_[static_cast<std::size_t>(u) * cl_size_ + slot];
    }

private:
    std::size_t cl_size_;
    double beta_;
    std::vector<double> weights_;
};

/// Visited markers cleared in O(1) by bumping an epoch counter.
class VisitMarks {
public:
    explicit VisitMarks(std::size_t n = 0) : stamp_(n, 0) {}

    void reset(std::size_t n) {
        if (stamp_.size() != n) {
            stamp_.assign(n, 0);
            epoch_ = 1;
            return;
        }
        if (++epoch_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
    }

    bool test(NodeId u) const noexcept { return stamp_[static_cast<std::size_t>(u)] == epoch_; }
    void set(NodeId u) noexcept { stamp_[static_cast<std::size_t>(u)] = epoch_; }

private:
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 1;
};

/// Working state of one ant. Reused across constructions by the same worker.
struct AntState {
    std::vector<NodeId> route;
    VisitMarks visited;
    std::size_t new_edges = 0;
    std::size_t min_new_edges = 0;
    /// Arrival endpoint of every counted new edge, in insertion order.
    std::vector<NodeId> checklist;
    std::vector<double> weights;

    void reset(std::size_t n, NodeId start, std::size_t min_new) {
        route.clear();
        route.reserve(n);
        visited.reset(n);
        new_edges = 0;
        min_new_edges = min_new;
        checklist.clear();
        visit(start);
    }

    NodeId current() const noexcept { return route.back(); }

    void visit(NodeId u) {
        route.push_back(u);
        visited.set(u);
    }
};

/// Shared read-only inputs of the construction step.
struct ConstructionContext {
    const TspInstance &instance;
    const NeighborLists &lists;
    const PartialPheromone &pheromone;
    const HeuristicTable &heuristic;
};

/// Picks the next node for the ant's current position:
///  - roulette wheel over unvisited candidates, weight tau * eta^beta;
///  - otherwise the nearest unvisited backup-list node (no pheromone);
///  - otherwise the nearest unvisited node overall.
inline NodeId select_next_node(AntState &state, const ConstructionContext &ctx, Rng &rng) {
    const std::size_t n = ctx.lists.size();
    if (state.route.size() >= n) {
        throw ContractViolation("select_next_node called with every node visited");
    }
    const NodeId u = state.current();
    const auto cand = ctx.lists.candidates(u);
    const auto trails = ctx.pheromone.candidate_trails(u);

    state.weights.resize(cand.size());
    double total = 0;
    std::size_t open = 0;
    std::size_t last_open = 0;
    for (std::size_t s = 0; s < cand.size(); ++s) {
        double w = 0;
        if (!state.visited.test(cand[s])) {
            w = trails[s] * ctx.heuristic.weight(u, s);
            ++open;
            last_open = s;
        }
        total += w;
        state.weights[s] = w;
    }
    if (open > 0) {
        if (open == 1 || !(total > 0)) return cand[last_open];
        const double r = rng.uniform() * total;
        double acc = 0;
        for (std::size_t s = 0; s < cand.size(); ++s) {
            acc += state.weights[s];
            if (state.weights[s] > 0 && r < acc) return cand[s];
        }
        return cand[last_open];
    }

    for (const NodeId v : ctx.lists.backups(u)) {
        if (!state.visited.test(v)) return v;
    }

    NodeId best = -1;
    Cost best_cost = std::numeric_limits<Cost>::max();
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = static_cast<NodeId>(i);
        if (state.visited.test(v)) continue;
        const Cost c = ctx.instance.cost(u, v);
        if (c < best_cost) {
            best_cost = c;
            best = v;
        }
    }
    return best;
}

/// Builds one tour starting at `start`. Nodes are chosen with
/// select_next_node until `min_new_edges` edges absent from `source` have
/// been chosen; from then on the route is extended by copying the source
/// forward (succ) and, if that stops at once, backward (pred). If both
/// copies stall before the tour is complete, one more node is chosen
/// probabilistically and copying resumes. The closing edge is never counted.
inline void construct_solution(const EdgeView &source, NodeId start, std::size_t min_new_edges,
                               const ConstructionContext &ctx, Rng &rng, AntState &state) {
    const std::size_t n = ctx.lists.size();
    state.reset(n, start, min_new_edges);

    while (state.route.size() < n) {
        if (state.new_edges >= state.min_new_edges) {
            NodeId u = source.succ(state.current());
            while (!state.visited.test(u)) {
                state.visit(u);
                u = source.succ(u);
            }
            u = source.pred(state.current());
            while (!state.visited.test(u)) {
                state.visit(u);
                u = source.pred(u);
            }
            if (state.route.size() == n) break;
        }
        const NodeId prev = state.current();
        const NodeId v = select_next_node(state, ctx, rng);
        state.visit(v);
        if (!source.contains(prev, v)) {
            ++state.new_edges;
            state.checklist.push_back(v);
        }
    }
}

/// Per-ant threshold on the number of new edges; a constant schedule.
struct NewEdgeSchedule {
    std::size_t min_new_edges = 8;

    std::size_t calc_num_new_edges() const noexcept { return min_new_edges; }
};

}  // namespace faco
