#pragma once

#include "faco/error.hpp"
#include "faco/tsp_instance.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace faco {

/// Per-node nearest-neighbor lists. Each row holds `cl_size` candidates
/// followed by `bl_size` backups, sorted by (cost, node id), with the cost
/// of every listed edge cached next to it.
class NeighborLists {
public:
    NeighborLists() = default;

    NeighborLists(std::size_t n, std::size_t cl_size, std::size_t bl_size,
                  std::vector<NodeId> nodes, std::vector<Cost> costs)
        : n_(n),
          cl_size_(cl_size),
          bl_size_(bl_size),
          nodes_(std::move(nodes)),
          costs_(std::move(costs)) {}

    std::size_t size() const noexcept { return n_; }
    std::size_t cl_size() const noexcept { return cl_size_; }
    std::size_t bl_size() const noexcept { return bl_size_; }
    std::size_t width() const noexcept { return cl_size_ + bl_size_; }

    std::span<const NodeId> candidates(NodeId u) const noexcept {
        return {nodes_.data() + row(u), cl_size_};
    }
    std::span<const NodeId> backups(NodeId u) const noexcept {
        return {nodes_.data() + row(u) + cl_size_, bl_size_};
    }
    std::span<const NodeId> all(NodeId u) const noexcept {
        return {nodes_.data() + row(u), width()};
    }
    std::span<const Cost> candidate_costs(NodeId u) const noexcept {
        return {costs_.data() + row(u), cl_size_};
    }
    std::span<const Cost> backup_costs(NodeId u) const noexcept {
        return {costs_.data() + row(u) + cl_size_, bl_size_};
    }
    std::span<const Cost> all_costs(NodeId u) const noexcept {
        return {costs_.data() + row(u), width()};
    }

    NodeId neighbor(NodeId u, std::size_t slot) const {
        check(u, slot);
        return nodes_[row(u) + slot];
    }

    Cost neighbor_distance(NodeId u, std::size_t slot) const {
        check(u, slot);
        return costs_[row(u) + slot];
    }

    /// Slot of v within cand(u), if present.
    std::optional<std::size_t> candidate_slot(NodeId u, NodeId v) const noexcept {
        const auto cand = candidates(u);
        for (std::size_t s = 0; s < cand.size(); ++s) {
            if (cand[s] == v) return s;
        }
        return std::nullopt;
    }

private:
    std::size_t row(NodeId u) const noexcept { return static_cast<std::size_t>(u) * width(); }

    void check(NodeId u, std::size_t slot) const {
        if (u < 0 || static_cast<std::size_t>(u) >= n_) {
            throw ContractViolation("node id out of range");
        }
        if (slot >= width()) {
            throw ContractViolation("neighbor slot " + std::to_string(slot) +
                                    " beyond list width " + std::to_string(width()));
        }
    }

    std::size_t n_ = 0;
    std::size_t cl_size_ = 0;
    std::size_t bl_size_ = 0;
    std::vector<NodeId> nodes_;
    std::vector<Cost> costs_;
};

namespace detail {

using Ranked = std::pair<Cost, NodeId>;

/// Bounded max-heap of the k best (cost, id) pairs seen so far.
class KBest {
public:
    explicit KBest(std::size_t k) : k_(k) { heap_.reserve(k); }

    void clear() noexcept { heap_.clear(); }
    bool full() const noexcept { return heap_.size() == k_; }
    const Ranked &worst() const noexcept { return heap_.front(); }

    void offer(Ranked r) {
        if (heap_.size() < k_) {
            heap_.push_back(r);
            std::push_heap(heap_.begin(), heap_.end());
        } else if (r < heap_.front()) {
            std::pop_heap(heap_.begin(), heap_.end());
            heap_.back() = r;
            std::push_heap(heap_.begin(), heap_.end());
        }
    }

    std::vector<Ranked> &sorted() {
        std::sort_heap(heap_.begin(), heap_.end());
        return heap_;
    }

private:
    std::size_t k_;
    std::vector<Ranked> heap_;
};

inline void knn_full_scan(const TspInstance &inst, std::size_t k, std::vector<NodeId> &nodes,
                          std::vector<Cost> &costs) {
    const auto n = static_cast<NodeId>(inst.size());
    std::vector<Ranked> all;
    all.reserve(inst.size());
    for (NodeId u = 0; u < n; ++u) {
        all.clear();
        for (NodeId v = 0; v < n; ++v) {
            if (v != u) all.emplace_back(inst.cost(u, v), v);
        }
        std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
        for (std::size_t s = 0; s < k; ++s) {
            nodes[static_cast<std::size_t>(u) * k + s] = all[s].second;
            costs[static_cast<std::size_t>(u) * k + s] = all[s].first;
        }
    }
}

/// Uniform grid over the bounding box; rings of cells around each node are
/// scanned until no unscanned cell can hold a node that would enter the list.
inline void knn_grid(const TspInstance &inst, std::size_t k, double min_x, double min_y,
                     double width, double height, std::vector<NodeId> &nodes,
                     std::vector<Cost> &costs) {
    const std::size_t n = inst.size();
    const double target_cells = std::max(1.0, static_cast<double>(n) / 2.0);
    const double side = std::sqrt(width * height / target_cells);
    const auto cols = static_cast<long>(std::clamp(std::floor(width / side), 1.0, 4096.0));
    const auto rows = static_cast<long>(std::clamp(std::floor(height / side), 1.0, 4096.0));
    const double cell_w = width / static_cast<double>(cols);
    const double cell_h = height / static_cast<double>(rows);
    const double ring_step = std::min(cell_w, cell_h);

    auto cell_of = [&](const Point &p) {
        const auto cx = std::clamp(static_cast<long>((p.x - min_x) / cell_w), 0L, cols - 1);
        const auto cy = std::clamp(static_cast<long>((p.y - min_y) / cell_h), 0L, rows - 1);
        return std::pair{cx, cy};
    };

    std::vector<std::size_t> start(static_cast<std::size_t>(cols * rows) + 1, 0);
    std::vector<std::size_t> cell_index(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [cx, cy] = cell_of(inst.coords()[i]);
        cell_index[i] = static_cast<std::size_t>(cy * cols + cx);
        ++start[cell_index[i] + 1];
    }
    for (std::size_t c = 1; c < start.size(); ++c) start[c] += start[c - 1];
    std::vector<NodeId> members(n);
    {
        auto fill = start;
        for (std::size_t i = 0; i < n; ++i) members[fill[cell_index[i]]++] = static_cast<NodeId>(i);
    }

    KBest best(k);
    const long max_ring = std::max(cols, rows);
    for (std::size_t ui = 0; ui < n; ++ui) {
        const auto u = static_cast<NodeId>(ui);
        const auto [ux, uy] = cell_of(inst.coords()[ui]);
        best.clear();

        auto scan_cell = [&](long cx, long cy) {
            if (cx < 0 || cy < 0 || cx >= cols || cy >= rows) return;
            const auto c = static_cast<std::size_t>(cy * cols + cx);
            for (std::size_t m = start[c]; m < start[c + 1]; ++m) {
                const NodeId v = members[m];
                if (v != u) best.offer({inst.cost(u, v), v});
            }
        };

        for (long r = 0; r <= max_ring; ++r) {
            if (r == 0) {
                scan_cell(ux, uy);
            } else {
                for (long dx = -r; dx <= r; ++dx) {
                    scan_cell(ux + dx, uy - r);
                    scan_cell(ux + dx, uy + r);
                }
                for (long dy = -r + 1; dy <= r - 1; ++dy) {
                    scan_cell(ux - r, uy + dy);
                    scan_cell(ux + r, uy + dy);
                }
            }
            if (best.full()) {
                // Unscanned cells lie at least r cell steps away.
                const double reach = static_cast<double>(r) * ring_step * (1.0 - 1e-12);
                if (inst.cost_lower_bound(reach) > best.worst().first) break;
            }
        }

        const auto &sorted = best.sorted();
        for (std::size_t s = 0; s < k; ++s) {
            nodes[ui * k + s] = sorted[s].second;
            costs[ui * k + s] = sorted[s].first;
        }
    }
}

}  // namespace detail

/// Exact k-NN lists with k = cl_size + bl_size, split into candidate and
/// backup segments.
inline NeighborLists build_neighbor_lists(const TspInstance &inst, std::size_t cl_size,
                                          std::size_t bl_size) {
    const std::size_t n = inst.size();
    if (cl_size < 1) throw ParameterError("cl_size must be at least 1");
    if (cl_size + bl_size > n - 1) {
        throw ParameterError("cl_size + bl_size = " + std::to_string(cl_size + bl_size) +
                             " exceeds n - 1 = " + std::to_string(n - 1));
    }
    const std::size_t k = cl_size + bl_size;
    std::vector<NodeId> nodes(n * k);
    std::vector<Cost> costs(n * k);

    double min_x = inst.coords()[0].x, max_x = min_x;
    double min_y = inst.coords()[0].y, max_y = min_y;
    for (const auto &p : inst.coords()) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double width = max_x - min_x;
    const double height = max_y - min_y;
    if (inst.is_3d() || !(width > 0) || !(height > 0)) {
        detail::knn_full_scan(inst, k, nodes, costs);
    } else {
        detail::knn_grid(inst, k, min_x, min_y, width, height, nodes, costs);
    }
    return NeighborLists(n, cl_size, bl_size, std::move(nodes), std::move(costs));
}

}  // namespace faco
