#pragma once

// Reference implementations for tests. They read coordinates and ids from the
// library types but recompute every distance and edge set on their own.

#include "faco/route.hpp"
#include "faco/tsp_instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracles {

using Cost = std::int64_t;

inline Cost distance(const faco::TspInstance &inst, int i, int j) {
    const auto &a = inst.coords()[static_cast<std::size_t>(i)];
    const auto &b = inst.coords()[static_cast<std::size_t>(j)];
    const long double dx = static_cast<long double>(a.x) - b.x;
    const long double dy = static_cast<long double>(a.y) - b.y;
    const long double dz = static_cast<long double>(a.z) - b.z;
    switch (inst.weight_kind()) {
    case faco::WeightKind::euc_2d:
        return static_cast<Cost>(std::floor(std::sqrt(dx * dx + dy * dy) + 0.5L));
    case faco::WeightKind::euc_3d:
        return static_cast<Cost>(std::floor(std::sqrt(dx * dx + dy * dy + dz * dz) + 0.5L));
    case faco::WeightKind::ceil_2d:
        return static_cast<Cost>(std::ceil(std::sqrt(dx * dx + dy * dy)));
    case faco::WeightKind::att: {
        const long double r = std::sqrt((dx * dx + dy * dy) / 10.0L);
        const auto t = static_cast<Cost>(std::floor(r + 0.5L));
        return t < r ? t + 1 : t;
    }
    }
    throw std::logic_error("unknown weight kind");
}

inline std::vector<std::vector<Cost>> distance_matrix(const faco::TspInstance &inst) {
    const int n = static_cast<int>(inst.size());
    std::vector<std::vector<Cost>> d(static_cast<std::size_t>(n), std::vector<Cost>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = distance(inst, i, j);
        }
    }
    return d;
}

inline Cost cycle_length(const faco::TspInstance &inst, std::span<const faco::NodeId> order) {
    Cost total = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        total += distance(inst, order[k], order[(k + 1) % order.size()]);
    }
    return total;
}

inline bool is_permutation(std::span<const faco::NodeId> order, std::size_t n) {
    if (order.size() != n) return false;
    std::vector<bool> seen(n, false);
    for (const auto v : order) {
        if (v < 0 || static_cast<std::size_t>(v) >= n || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

/// Exact optimum by dynamic programming over subsets; refuses n > 15.
inline Cost held_karp_optimum(const faco::TspInstance &inst) {
    const int n = static_cast<int>(inst.size());
    if (n > 15) throw std::invalid_argument("held_karp_optimum supports at most 15 nodes");
    const auto d = distance_matrix(inst);
    if (n == 3) return d[0][1] + d[1][2] + d[2][0];

    // Node 0 is fixed as the start; subsets range over nodes 1..n-1.
    const int m = n - 1;
    const std::size_t full = std::size_t{1} << m;
    constexpr Cost inf = std::numeric_limits<Cost>::max() / 4;
    std::vector<Cost> dp(full * static_cast<std::size_t>(m), inf);
    auto at = [&](std::size_t mask, int last) -> Cost & { return dp[mask * static_cast<std::size_t>(m) + static_cast<std::size_t>(last)]; };
    for (int k = 0; k < m; ++k) at(std::size_t{1} << k, k) = d[0][static_cast<std::size_t>(k + 1)];
    for (std::size_t mask = 1; mask < full; ++mask) {
        for (int last = 0; last < m; ++last) {
            if (!(mask & (std::size_t{1} << last))) continue;
            const Cost base = at(mask, last);
            if (base >= inf) continue;
            for (int next = 0; next < m; ++next) {
                if (mask & (std::size_t{1} << next)) continue;
                Cost &slot = at(mask | (std::size_t{1} << next), next);
                slot = std::min(slot, base + d[static_cast<std::size_t>(last + 1)][static_cast<std::size_t>(next + 1)]);
            }
        }
    }
    Cost best = inf;
    for (int last = 0; last < m; ++last) best = std::min(best, at(full - 1, last) + d[static_cast<std::size_t>(last + 1)][0]);
    return best;
}

struct Ranked {
    Cost cost;
    int id;
};

/// For every node, all other nodes sorted by (distance, id), truncated to k.
inline std::vector<std::vector<Ranked>> brute_force_knn(const faco::TspInstance &inst, std::size_t k) {
    const int n = static_cast<int>(inst.size());
    std::vector<std::vector<Ranked>> out(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
        std::vector<Ranked> all;
        for (int v = 0; v < n; ++v) {
            if (v != u) all.push_back({distance(inst, u, v), v});
        }
        std::sort(all.begin(), all.end(), [](const Ranked &a, const Ranked &b) {
            return a.cost != b.cost ? a.cost < b.cost : a.id < b.id;
        });
        all.resize(std::min(k, all.size()));
        out[static_cast<std::size_t>(u)] = std::move(all);
    }
    return out;
}

inline std::set<std::pair<int, int>> edge_set(std::span<const faco::NodeId> order, bool include_closing = true) {
    std::set<std::pair<int, int>> edges;
    const std::size_t n = order.size();
    const std::size_t last = include_closing ? n : n - 1;
    for (std::size_t k = 0; k < last; ++k) {
        const int u = order[k];
        const int v = order[(k + 1) % n];
        edges.insert({std::min(u, v), std::max(u, v)});
    }
    return edges;
}

/// Undirected edges of path `a` (the closing edge excluded) absent from cycle `b`.
inline std::size_t edge_diff_count(std::span<const faco::NodeId> a, std::span<const faco::NodeId> b) {
    const auto in_a = edge_set(a, false);
    const auto in_b = edge_set(b, true);
    std::size_t count = 0;
    for (const auto &e : in_a) count += in_b.count(e) == 0 ? 1 : 0;
    return count;
}

inline bool same_cycle(std::span<const faco::NodeId> a, std::span<const faco::NodeId> b) {
    return a.size() == b.size() && edge_set(a) == edge_set(b);
}

/// Full n x n trail matrix with the same update rules as the partial store,
/// restricted to the given candidate edge set.
class DensePheromone {
public:
    DensePheromone(std::size_t n, std::vector<std::vector<int>> candidates, double tau_min, double tau_max,
                   double rho)
        : n_(n), candidates_(std::move(candidates)), tau_min_(tau_min), tau_max_(tau_max), rho_(rho),
          m_(n * n, tau_max) {}

    void set_limits(double tau_min, double tau_max) {
        tau_min_ = tau_min;
        tau_max_ = tau_max;
    }

    void evaporate() {
        for (std::size_t u = 0; u < n_; ++u) {
            for (const int v : candidates_[u]) {
                double &t = at(u, static_cast<std::size_t>(v));
                t = std::max(tau_min_, t * rho_);
            }
        }
    }

    void deposit(std::span<const faco::NodeId> order, double amount) {
        for (std::size_t k = 0; k < order.size(); ++k) {
            const auto u = static_cast<std::size_t>(order[k]);
            const auto v = static_cast<std::size_t>(order[(k + 1) % order.size()]);
            bump(u, v, amount);
            bump(v, u, amount);
        }
    }

    double value(std::size_t u, std::size_t v) const { return m_[u * n_ + v]; }

private:
    double &at(std::size_t u, std::size_t v) { return m_[u * n_ + v]; }

    void bump(std::size_t u, std::size_t v, double amount) {
        if (std::find(candidates_[u].begin(), candidates_[u].end(), static_cast<int>(v)) == candidates_[u].end()) return;
        double &t = at(u, v);
        t = std::min(tau_max_, t + amount);
    }

    std::size_t n_;
    std::vector<std::vector<int>> candidates_;
    double tau_min_;
    double tau_max_;
    double rho_;
    std::vector<double> m_;
};

}  // namespace oracles
