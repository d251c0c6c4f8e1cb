#pragma once

#include "faco/error.hpp"
#include "faco/tsp_instance.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace faco {

/// Cyclic tour stored as an order array plus its inverse, giving O(1)
/// succ/pred/position queries and in-place section reversal.
class Route {
public:
    Route() = default;

    explicit Route(std::vector<NodeId> order) { assign(std::move(order)); }

    static Route identity(std::size_t n) {
        std::vector<NodeId> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<NodeId>(i);
        Route r;
        r.assign_unchecked(std::move(order));
        return r;
    }

    /// Takes ownership of `order`; throws InvalidTourError unless it is a
    /// permutation of 0..n-1.
    void assign(std::vector<NodeId> order) {
        const std::size_t n = order.size();
        std::vector<NodeId> pos(n, -1);
        for (std::size_t k = 0; k < n; ++k) {
            const NodeId u = order[k];
            if (u < 0 || static_cast<std::size_t>(u) >= n || pos[static_cast<std::size_t>(u)] >= 0) {
                throw InvalidTourError("route is not a permutation of 0..n-1");
            }
            pos[static_cast<std::size_t>(u)] = static_cast<NodeId>(k);
        }
        order_ = std::move(order);
        pos_ = std::move(pos);
    }

    /// Caller guarantees `order` is a permutation.
    void assign_unchecked(std::span<const NodeId> order) {
        order_.assign(order.begin(), order.end());
        rebuild_positions();
    }

    void assign_unchecked(std::vector<NodeId> &&order) {
        order_ = std::move(order);
        rebuild_positions();
    }

    std::size_t size() const noexcept { return order_.size(); }
    std::span<const NodeId> order() const noexcept { return order_; }
    NodeId at(std::size_t k) const noexcept { return order_[k]; }
    std::size_t position(NodeId u) const noexcept {
        return static_cast<std::size_t>(pos_[static_cast<std::size_t>(u)]);
    }

    NodeId succ(NodeId u) const noexcept {
        const std::size_t p = position(u) + 1;
        return order_[p == order_.size() ? 0 : p];
    }

    NodeId pred(NodeId u) const noexcept {
        const std::size_t p = position(u);
        return order_[p == 0 ? order_.size() - 1 : p - 1];
    }

    /// Reverses the path running forward from x to y (inclusive): afterwards
    /// the cycle holds (pred(x), y) and (x, succ(y)). Whichever of the path and
    /// its complement is shorter gets physically reversed; returns the number
    /// of elements reversed (at most n / 2).
    std::size_t flip_section(NodeId x, NodeId y) noexcept {
        const std::size_t n = order_.size();
        const std::size_t px = position(x);
        const std::size_t py = position(y);
        const std::size_t len = (py + n - px) % n + 1;
        if (len * 2 <= n) {
            reverse_range(px, len);
            return len;
        }
        const std::size_t rest = n - len;
        reverse_range(py + 1 == n ? 0 : py + 1, rest);
        return rest;
    }

private:
    void rebuild_positions() {
        pos_.resize(order_.size());
        for (std::size_t k = 0; k < order_.size(); ++k) {
            pos_[static_cast<std::size_t>(order_[k])] = static_cast<NodeId>(k);
        }
    }

    void reverse_range(std::size_t first, std::size_t len) noexcept {
        const std::size_t n = order_.size();
        if (len < 2) return;
        std::size_t i = first;
        std::size_t j = (first + len - 1) % n;
        for (std::size_t s = 0; s < len / 2; ++s) {
            const NodeId a = order_[i];
            const NodeId b = order_[j];
            order_[i] = b;
            pos_[static_cast<std::size_t>(b)] = static_cast<NodeId>(i);
            order_[j] = a;
            pos_[static_cast<std::size_t>(a)] = static_cast<NodeId>(j);
            i = i + 1 == n ? 0 : i + 1;
            j = j == 0 ? n - 1 : j - 1;
        }
    }

    std::vector<NodeId> order_;
    std::vector<NodeId> pos_;
};

/// Successor/predecessor arrays of a fixed tour, for undirected edge tests.
class EdgeView {
public:
    EdgeView() = default;

    explicit EdgeView(std::span<const NodeId> order) { assign(order); }
    explicit EdgeView(const Route &route) { assign(route.order()); }

    void assign(std::span<const NodeId> order) {
        const std::size_t n = order.size();
        succ_.resize(n);
        pred_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const NodeId u = order[k];
            const NodeId v = order[k + 1 == n ? 0 : k + 1];
            succ_[static_cast<std::size_t>(u)] = v;
            pred_[static_cast<std::size_t>(v)] = u;
        }
    }

    std::size_t size() const noexcept { return succ_.size(); }
    NodeId succ(NodeId u) const noexcept { return succ_[static_cast<std::size_t>(u)]; }
    NodeId pred(NodeId u) const noexcept { return pred_[static_cast<std::size_t>(u)]; }

    bool contains(NodeId u, NodeId v) const noexcept { return succ(u) == v || pred(u) == v; }

    /// The tour as an order array starting at `start`.
    std::vector<NodeId> order_from(NodeId start = 0) const {
        std::vector<NodeId> out;
        out.reserve(size());
        NodeId u = start;
        for (std::size_t k = 0; k < size(); ++k) {
            out.push_back(u);
            u = succ(u);
        }
        return out;
    }

private:
    std::vector<NodeId> succ_;
    std::vector<NodeId> pred_;
};

inline bool edge_in(const EdgeView &view, NodeId u, NodeId v) noexcept {
    return view.contains(u, v);
}

inline Cost tour_length(const TspInstance &inst, const Route &route) {
    return tour_length(inst, route.order());
}

/// TSPLIB ".tour" document: 1-based ids, terminated by -1.
inline std::string format_tour(std::string_view name, std::span<const NodeId> order,
                               std::optional<Cost> length = std::nullopt) {
    std::ostringstream out;
    out << "NAME : " << name << ".tour\n";
    if (length) out << "COMMENT : Length = " << *length << '\n';
    out << "TYPE : TOUR\nDIMENSION : " << order.size() << "\nTOUR_SECTION\n";
    for (const NodeId u : order) out << (u + 1) << '\n';
    out << "-1\nEOF\n";
    return out.str();
}

/// Reads the TOUR_SECTION of a ".tour" document back into 0-based ids.
inline std::vector<NodeId> parse_tour(std::string_view text) {
    std::vector<NodeId> order;
    std::optional<std::size_t> dimension;
    bool in_tour = false;
    bool terminated = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size() && !terminated) {
        const auto nl = text.find('\n', pos);
        const auto line = detail::trim(
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos));
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (line.empty()) continue;
        if (!in_tour) {
            const auto [key, value] = detail::split_record(line);
            if (key == "DIMENSION") {
                const auto d = detail::parse_integer(value);
                if (!d || *d < 0) throw ParseError("malformed DIMENSION", line_no);
                dimension = static_cast<std::size_t>(*d);
            } else if (key == "TOUR_SECTION") {
                in_tour = true;
            }
            continue;
        }
        for (const auto field : detail::split_ws(line)) {
            const auto id = detail::parse_integer(field);
            if (!id) throw ParseError("malformed tour entry", line_no);
            if (*id == -1) {
                terminated = true;
                break;
            }
            if (*id < 1) throw ParseError("tour ids are 1-based", line_no);
            order.push_back(static_cast<NodeId>(*id - 1));
        }
    }
    if (!in_tour) throw ParseError("missing TOUR_SECTION", 0);
    if (!terminated) throw ParseError("TOUR_SECTION not terminated by -1", line_no);
    if (dimension && *dimension != order.size()) {
        throw ParseError("DIMENSION does not match tour length", line_no);
    }
    return order;
}

}  // namespace faco
