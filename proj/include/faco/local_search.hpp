#pragma once

#include "faco/neighbors.hpp"
#include "faco/route.hpp"
#include "faco/tsp_instance.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace faco {

/// FIFO of nodes awaiting inspection. A node already queued is not queued
/// again until it has been popped.
class Checklist {
public:
    explicit Checklist(std::size_t n = 0) : queued_(n, 0) {}

    void resize(std::size_t n) {
        clear();
        queued_.assign(n, 0);
    }

    void push(NodeId u) {
        auto &flag = queued_[static_cast<std::size_t>(u)];
        if (flag) return;
        flag = 1;
        queue_.push_back(u);
    }

    void push_all(std::span<const NodeId> nodes) {
        for (const NodeId u : nodes) push(u);
    }

    NodeId pop() {
        const NodeId u = queue_[head_++];
        queued_[static_cast<std::size_t>(u)] = 0;
        if (head_ == queue_.size()) {
            queue_.clear();
            head_ = 0;
        }
        return u;
    }

    bool empty() const noexcept { return head_ == queue_.size(); }
    std::size_t size() const noexcept { return queue_.size() - head_; }

    void clear() noexcept {
        for (std::size_t i = head_; i < queue_.size(); ++i) {
            queued_[static_cast<std::size_t>(queue_[i])] = 0;
        }
        queue_.clear();
        head_ = 0;
    }

private:
    std::vector<NodeId> queue_;
    std::size_t head_ = 0;
    std::vector<std::uint8_t> queued_;
};

struct TwoOptOptions {
    /// Neighbors scanned per node; 0 means cl_size.
    std::size_t neighbor_count = 0;
    /// Cap on applied moves; 0 means n.
    std::size_t max_changes = 0;
};

struct LocalSearchResult {
    Cost gain = 0;
    std::size_t changes = 0;
};

struct NoMoveObserver {
    void operator()(Cost) const noexcept {}
};

/// 2-opt restricted to the nodes in `checklist`. For each popped node a, the
/// best move over its nearest neighbors b is taken from both the successor
/// side (a, succ a, b, succ b) and the predecessor side (pred a, a, pred b, b);
/// the four endpoints of an applied move are queued again. Stops when the
/// checklist empties or the change cap is hit. `on_move` sees each move's gain
/// right after it is applied.
template <typename OnMove = NoMoveObserver>
LocalSearchResult two_opt_checklist(Route &route, Checklist &checklist,
                                    const NeighborLists &lists, const TspInstance &inst,
                                    const TwoOptOptions &opts = {}, OnMove &&on_move = {}) {
    const std::size_t n = route.size();
    const std::size_t width = std::min(opts.neighbor_count == 0 ? lists.cl_size() : opts.neighbor_count,
                                       lists.width());
    const std::size_t cap = opts.max_changes == 0 ? n : opts.max_changes;

    LocalSearchResult result;
    while (!checklist.empty() && result.changes < cap) {
        const NodeId a = checklist.pop();
        const NodeId a_succ = route.succ(a);
        const NodeId a_pred = route.pred(a);
        const auto nn = lists.all(a).first(width);
        const auto nn_cost = lists.all_costs(a).first(width);

        Cost gain = 0;
        NodeId mw = -1, mx = -1, my = -1, mz = -1;

        const Cost d_a_succ = inst.cost(a, a_succ);
        for (std::size_t s = 0; s < width; ++s) {
            const Cost d_ab = nn_cost[s];
            if (d_a_succ <= d_ab) break;
            const NodeId b = nn[s];
            const NodeId b_succ = route.succ(b);
            const Cost delta = d_a_succ + inst.cost(b, b_succ) - d_ab - inst.cost(a_succ, b_succ);
            if (delta > gain) {
                gain = delta;
                mw = a, mx = a_succ, my = b, mz = b_succ;
            }
        }

        const Cost d_a_pred = inst.cost(a_pred, a);
        for (std::size_t s = 0; s < width; ++s) {
            const Cost d_ab = nn_cost[s];
            if (d_a_pred <= d_ab) break;
            const NodeId b = nn[s];
            const NodeId b_pred = route.pred(b);
            const Cost delta = d_a_pred + inst.cost(b_pred, b) - d_ab - inst.cost(a_pred, b_pred);
            if (delta > gain) {
                gain = delta;
                mw = a_pred, mx = a, my = b_pred, mz = b;
            }
        }

        if (gain > 0) {
            route.flip_section(mx, my);
            checklist.push(mw);
            checklist.push(mx);
            checklist.push(my);
            checklist.push(mz);
            result.gain += gain;
            ++result.changes;
            on_move(gain);
        }
    }
    return result;
}

/// Greedy tour: from each node go to the nearest unvisited one, looking at the
/// candidate list, then the backup list, then every node.
inline Route nearest_neighbor_tour(const TspInstance &inst, const NeighborLists &lists,
                                   NodeId start) {
    const std::size_t n = inst.size();
    std::vector<std::uint8_t> visited(n, 0);
    std::vector<NodeId> order;
    order.reserve(n);
    order.push_back(start);
    visited[static_cast<std::size_t>(start)] = 1;
    while (order.size() < n) {
        const NodeId u = order.back();
        NodeId next = -1;
        for (const NodeId v : lists.all(u)) {
            if (!visited[static_cast<std::size_t>(v)]) {
                next = v;
                break;
            }
        }
        if (next < 0) {
            Cost best = std::numeric_limits<Cost>::max();
            for (std::size_t i = 0; i < n; ++i) {
                const auto v = static_cast<NodeId>(i);
                if (visited[i]) continue;
                const Cost c = inst.cost(u, v);
                if (c < best) {
                    best = c;
                    next = v;
                }
            }
        }
        visited[static_cast<std::size_t>(next)] = 1;
        order.push_back(next);
    }
    Route r;
    r.assign_unchecked(std::move(order));
    return r;
}

namespace detail {

/// Route seen in either direction; "next" follows succ when forward.
class OrientedRoute {
public:
    OrientedRoute(Route &route, bool forward) : route_(route), forward_(forward) {}

    NodeId next(NodeId u) const noexcept { return forward_ ? route_.succ(u) : route_.pred(u); }
    NodeId prev(NodeId u) const noexcept { return forward_ ? route_.pred(u) : route_.succ(u); }

    /// Steps from `from` to `x` walking in this orientation.
    std::size_t offset(NodeId from, NodeId x) const noexcept {
        const std::size_t n = route_.size();
        const std::size_t pf = route_.position(from);
        const std::size_t px = route_.position(x);
        return forward_ ? (px + n - pf) % n : (pf + n - px) % n;
    }

    /// Reverses the path from `first` to `last` walked in this orientation.
    void reverse_path(NodeId first, NodeId last) noexcept {
        if (forward_) {
            route_.flip_section(first, last);
        } else {
            route_.flip_section(last, first);
        }
    }

    /// Re-derives the orientation in which `u` is followed by `v`.
    void orient(NodeId u, NodeId v) noexcept { forward_ = route_.succ(u) == v; }

private:
    Route &route_;
    bool forward_;
};

/// First improving sequential 3-opt move anchored at the removed edge
/// (a, next a), over neighbor lists. Only the three reconnections that two
/// reversals realize are tried. Returns the gain (0 if none) and fills
/// `touched` with the six endpoints.
inline Cost three_opt_move(Route &route, NodeId a, bool forward, const NeighborLists &lists,
                           const TspInstance &inst, std::size_t width, NodeId (&touched)[6]) {
    OrientedRoute o(route, forward);
    const NodeId a1 = o.next(a);
    const Cost d_a_a1 = inst.cost(a, a1);
    const auto nn_a = lists.all(a).first(width);
    const auto nn_a_cost = lists.all_costs(a).first(width);
    const auto nn_a1 = lists.all(a1).first(width);
    const auto nn_a1_cost = lists.all_costs(a1).first(width);
    const std::size_t span_a1_a = o.offset(a1, a);

    auto record = [&](NodeId x0, NodeId x1, NodeId x2, NodeId x3, NodeId x4, NodeId x5) {
        touched[0] = x0, touched[1] = x1, touched[2] = x2;
        touched[3] = x3, touched[4] = x4, touched[5] = x5;
    };

    // a-b, a1-c, b1-c1:  a [b..a1] [c..b1] c1
    for (std::size_t i = 0; i < width; ++i) {
        const Cost g1 = d_a_a1 - nn_a_cost[i];
        if (g1 <= 0) break;
        const NodeId b = nn_a[i];
        if (b == a1) continue;
        const NodeId b1 = o.next(b);
        if (b1 == a) continue;
        const Cost d_b_b1 = inst.cost(b, b1);
        const std::size_t off_b1 = o.offset(a1, b1);
        for (std::size_t j = 0; j < width; ++j) {
            const Cost g2 = g1 + d_b_b1 - nn_a1_cost[j];
            if (g2 <= 0) break;
            const NodeId c = nn_a1[j];
            const std::size_t off_c = o.offset(a1, c);
            if (off_c < off_b1 || off_c >= span_a1_a) continue;
            const NodeId c1 = o.next(c);
            const Cost gain = g2 + inst.cost(c, c1) - inst.cost(b1, c1);
            if (gain > 0) {
                o.reverse_path(a1, b);
                o.orient(a, b);
                o.reverse_path(b1, c);
                record(a, a1, b, b1, c, c1);
                return gain;
            }
        }
    }

    // a-c, a1-b1, b-c1:  a [c..b1] [a1..b] c1
    for (std::size_t i = 0; i < width; ++i) {
        const Cost g1 = d_a_a1 - nn_a_cost[i];
        if (g1 <= 0) break;
        const NodeId c = nn_a[i];
        if (c == a1) continue;
        const NodeId c1 = o.next(c);
        const Cost d_c_c1 = inst.cost(c, c1);
        const std::size_t off_c = o.offset(a1, c);
        for (std::size_t j = 0; j < width; ++j) {
            const Cost g2 = g1 + d_c_c1 - nn_a1_cost[j];
            if (g2 <= 0) break;
            const NodeId b1 = nn_a1[j];
            const std::size_t off_b1 = o.offset(a1, b1);
            if (off_b1 < 1 || off_b1 > off_c) continue;
            const NodeId b = o.prev(b1);
            const Cost gain = g2 + inst.cost(b, b1) - inst.cost(b, c1);
            if (gain > 0) {
                o.reverse_path(a1, c);
                o.orient(a, c);
                o.reverse_path(b, a1);
                record(a, a1, b, b1, c, c1);
                return gain;
            }
        }
    }

    // a-b1, b-c, a1-c1:  a [b1..c] [b..a1] c1
    for (std::size_t i = 0; i < width; ++i) {
        const Cost g1 = d_a_a1 - nn_a_cost[i];
        if (g1 <= 0) break;
        const NodeId b1 = nn_a[i];
        if (b1 == a1) continue;
        const NodeId b = o.prev(b1);
        const Cost d_b_b1 = inst.cost(b, b1);
        const std::size_t off_b1 = o.offset(a1, b1);
        const auto nn_b = lists.all(b).first(width);
        const auto nn_b_cost = lists.all_costs(b).first(width);
        for (std::size_t j = 0; j < width; ++j) {
            const Cost g2 = g1 + d_b_b1 - nn_b_cost[j];
            if (g2 <= 0) break;
            const NodeId c = nn_b[j];
            const std::size_t off_c = o.offset(a1, c);
            if (off_c < off_b1 || off_c >= span_a1_a) continue;
            const NodeId c1 = o.next(c);
            const Cost gain = g2 + inst.cost(c, c1) - inst.cost(a1, c1);
            if (gain > 0) {
                o.reverse_path(a1, c);
                o.orient(a, c);
                o.reverse_path(c, b1);
                record(a, a1, b, b1, c, c1);
                return gain;
            }
        }
    }
    return 0;
}

}  // namespace detail

/// Sequential 3-opt over neighbor lists driven by a don't-look-bit queue.
/// Returns the summed gain.
template <typename OnMove = NoMoveObserver>
LocalSearchResult three_opt(Route &route, const NeighborLists &lists, const TspInstance &inst,
                            std::size_t neighbor_count = 0, OnMove &&on_move = {}) {
    const std::size_t n = route.size();
    const std::size_t width =
        std::min(neighbor_count == 0 ? lists.cl_size() : neighbor_count, lists.width());
    Checklist active(n);
    for (const NodeId u : route.order()) active.push(u);

    LocalSearchResult result;
    NodeId touched[6];
    while (!active.empty()) {
        const NodeId a = active.pop();
        for (const bool forward : {true, false}) {
            const Cost gain = detail::three_opt_move(route, a, forward, lists, inst, width, touched);
            if (gain > 0) {
                for (const NodeId t : touched) active.push(t);
                result.gain += gain;
                ++result.changes;
                on_move(gain);
                break;
            }
        }
    }
    return result;
}

/// Initial-solution improvement: 2-opt with don't-look bits to a local
/// optimum, then a sequential 3-opt pass.
inline Route improve_initial(Route route, const NeighborLists &lists, const TspInstance &inst) {
    Checklist all(route.size());
    for (const NodeId u : route.order()) all.push(u);
    TwoOptOptions opts;
    opts.max_changes = std::numeric_limits<std::size_t>::max();
    two_opt_checklist(route, all, lists, inst, opts);
    three_opt(route, lists, inst);
    return route;
}

}  // namespace faco
