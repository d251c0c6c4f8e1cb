#pragma once

#include "faco/error.hpp"
#include "faco/neighbors.hpp"
#include "faco/route.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace faco {

struct TrailLimits {
    double tau_min = 0;
    double tau_max = 0;
    double rho = 0;
    double p_best = 0;
    double avg = 0;
};

/// Floor applied to (1 - rho) so that rho = 1 (no evaporation) still yields a
/// finite upper limit.
inline constexpr double min_evaporation_share = 1e-10;

/// MAX-MIN trail limits for the current global-best cost:
///   tau_max = 1 / (cost_gb * (1 - rho))
///   tau_min = tau_max * (1 - p^(1/n)) / ((avg - 1) * p^(1/n)),  clamped to tau_max
inline TrailLimits compute_limits(Cost cost_gb, double rho, double p_best, std::size_t n,
                                  double avg) {
    if (cost_gb <= 0) throw ParameterError("global-best cost must be positive");
    if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("rho must lie in [0, 1]");
    if (!(p_best > 0.0 && p_best < 1.0)) throw ParameterError("p_best must lie in (0, 1)");
    if (!(avg >= 2.0)) throw ParameterError("avg must be at least 2");
    if (n < 1) throw ParameterError("n must be positive");

    TrailLimits lim;
    lim.rho = rho;
    lim.p_best = p_best;
    lim.avg = avg;
    lim.tau_max = 1.0 / (static_cast<double>(cost_gb) * std::max(1.0 - rho, min_evaporation_share));
    const double root = std::pow(p_best, 1.0 / static_cast<double>(n));
    lim.tau_min = std::min(lim.tau_max, lim.tau_max * (1.0 - root) / ((avg - 1.0) * root));
    return lim;
}

/// Trails stored only for candidate-list edges: n * cl_size values. An edge
/// listed at both endpoints has two stored copies that are updated together.
class PartialPheromone {
public:
    PartialPheromone(const NeighborLists &lists, const TrailLimits &limits)
        : lists_(&lists),
          cl_size_(lists.cl_size()),
          limits_(limits),
          trails_(lists.size() * lists.cl_size(), limits.tau_max) {}

    const TrailLimits &limits() const noexcept { return limits_; }
    void set_limits(const TrailLimits &limits) noexcept { limits_ = limits; }

    std::size_t size() const noexcept { return lists_->size(); }
    std::size_t cl_size() const noexcept { return cl_size_; }
    std::span<const double> values() const noexcept { return trails_; }

    void init_trails() noexcept { std::fill(trails_.begin(), trails_.end(), limits_.tau_max); }

    void evaporate() noexcept { evaporate_nodes(0, static_cast<NodeId>(size())); }

    /// Evaporates the rows of nodes [first, last); disjoint ranges may run
    /// concurrently.
    void evaporate_nodes(NodeId first, NodeId last) noexcept {
        const double rho = limits_.rho;
        const double lo = limits_.tau_min;
        const auto b = trails_.begin() + static_cast<std::ptrdiff_t>(first) * static_cast<std::ptrdiff_t>(cl_size_);
        const auto e = trails_.begin() + static_cast<std::ptrdiff_t>(last) * static_cast<std::ptrdiff_t>(cl_size_);
        for (auto it = b; it != e; ++it) *it = std::max(lo, rho * *it);
    }

    /// Adds `amount` to every stored occurrence of the tour's edges, capped at
    /// tau_max. Edges outside both endpoints' candidate lists are skipped.
    void deposit(const EdgeView &tour, double amount) {
        if (!(amount > 0)) throw ContractViolation("deposit amount must be positive");
        const auto n = static_cast<NodeId>(size());
        for (NodeId u = 0; u < n; ++u) {
            const NodeId v = tour.succ(u);
            bump(u, v, amount);
            bump(v, u, amount);
        }
    }

    double get_trail(NodeId u, std::size_t slot) const {
        if (u < 0 || static_cast<std::size_t>(u) >= size()) {
            throw ContractViolation("node id out of range");
        }
        if (slot >= cl_size_) {
            throw ContractViolation("trail slot " + std::to_string(slot) +
                                    " beyond cl_size " + std::to_string(cl_size_));
        }
        return trail(u, slot);
    }

    double trail(NodeId u, std::size_t slot) const noexcept {
        return trails_[static_cast<std::size_t>(u) * cl_size_ + slot];
    }

    std::span<const double> candidate_trails(NodeId u) const noexcept {
        return {trails_.data() + static_cast<std::size_t>(u) * cl_size_, cl_size_};
    }

private:
    void bump(NodeId u, NodeId v, double amount) noexcept {
        const auto cand = lists_->candidates(u);
        for (std::size_t s = 0; s < cl_size_; ++s) {
            if (cand[s] == v) {
                double &t = trails_[static_cast<std::size_t>(u) * cl_size_ + s];
                t = std::min(limits_.tau_max, t + amount);
                return;
            }
        }
    }

    const NeighborLists *lists_;
    std::size_t cl_size_;
    TrailLimits limits_;
    std::vector<double> trails_;
};

}  // namespace faco
