#pragma once

#include "faco/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace faco {

using Cost = std::int64_t;
using NodeId = std::int32_t;

enum class WeightKind { euc_2d, ceil_2d, euc_3d, att };

inline std::string_view to_string(WeightKind kind) noexcept {
    switch (kind) {
    case WeightKind::euc_2d: return "EUC_2D";
    case WeightKind::ceil_2d: return "CEIL_2D";
    case WeightKind::euc_3d: return "EUC_3D";
    case WeightKind::att: return "ATT";
    }
    return "?";
}

inline std::optional<WeightKind> weight_kind_from_string(std::string_view s) noexcept {
    if (s == "EUC_2D") return WeightKind::euc_2d;
    if (s == "CEIL_2D") return WeightKind::ceil_2d;
    if (s == "EUC_3D") return WeightKind::euc_3d;
    if (s == "ATT") return WeightKind::att;
    return std::nullopt;
}

struct Point {
    double x = 0;
    double y = 0;
    double z = 0;
};

/// Symmetric TSP instance over node coordinates. Edge costs follow the TSPLIB
/// rounding rules and are computed on demand; no distance matrix is kept.
class TspInstance {
public:
    TspInstance(std::string name, WeightKind kind, std::vector<Point> coords,
                std::optional<Cost> best_known = std::nullopt)
        : name_(std::move(name)),
          kind_(kind),
          coords_(std::move(coords)),
          best_known_(best_known) {
        if (coords_.size() < 3) {
            throw ParameterError("a TSP instance needs at least 3 nodes, got " +
                                 std::to_string(coords_.size()));
        }
        for (const auto &p : coords_) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
                throw ParameterError("non-finite coordinate in instance " + name_);
            }
        }
    }

    const std::string &name() const noexcept { return name_; }
    std::size_t size() const noexcept { return coords_.size(); }
    WeightKind weight_kind() const noexcept { return kind_; }
    bool is_3d() const noexcept { return kind_ == WeightKind::euc_3d; }
    std::span<const Point> coords() const noexcept { return coords_; }
    const Point &coord(NodeId i) const { return coords_[static_cast<std::size_t>(i)]; }

    const std::optional<Cost> &best_known() const noexcept { return best_known_; }
    void set_best_known(std::optional<Cost> value) noexcept { best_known_ = value; }

    /// Checked edge cost.
    Cost distance(NodeId i, NodeId j) const {
        const auto n = static_cast<NodeId>(size());
        if (i < 0 || j < 0 || i >= n || j >= n) {
            throw ContractViolation("node id out of range");
        }
        if (i == j) {
            throw ContractViolation("distance(i, i) is undefined: no self-loop edges");
        }
        return cost(i, j);
    }

    /// Unchecked edge cost for hot loops.
    Cost cost(NodeId i, NodeId j) const noexcept {
        const Point &a = coords_[static_cast<std::size_t>(i)];
        const Point &b = coords_[static_cast<std::size_t>(j)];
        const double dx = a.x - b.x;
        const double dy = a.y - b.y;
        switch (kind_) {
        case WeightKind::euc_2d:
            return nint(std::sqrt(dx * dx + dy * dy));
        case WeightKind::ceil_2d:
            return static_cast<Cost>(std::ceil(std::sqrt(dx * dx + dy * dy)));
        case WeightKind::euc_3d: {
            const double dz = a.z - b.z;
            return nint(std::sqrt(dx * dx + dy * dy + dz * dz));
        }
        case WeightKind::att:
            return att_round(std::sqrt((dx * dx + dy * dy) / 10.0));
        }
        return 0;
    }

    double euclidean(NodeId i, NodeId j) const noexcept {
        const Point &a = coords_[static_cast<std::size_t>(i)];
        const Point &b = coords_[static_cast<std::size_t>(j)];
        const double dx = a.x - b.x;
        const double dy = a.y - b.y;
        const double dz = is_3d() ? a.z - b.z : 0.0;
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }

    /// Smallest edge cost any pair at Euclidean distance >= r can have. Every
    /// supported rounding rule is nondecreasing in the Euclidean distance.
    Cost cost_lower_bound(double r) const noexcept {
        if (r <= 0) return 0;
        switch (kind_) {
        case WeightKind::euc_2d:
        case WeightKind::euc_3d: return nint(r);
        case WeightKind::ceil_2d: return static_cast<Cost>(std::ceil(r));
        case WeightKind::att: return att_round(std::sqrt(r * r / 10.0));
        }
        return 0;
    }

private:
    static Cost nint(double x) noexcept { return static_cast<Cost>(x + 0.5); }

    static Cost att_round(double r) noexcept {
        const Cost t = nint(r);
        return static_cast<double>(t) < r ? t + 1 : t;
    }

    std::string name_;
    WeightKind kind_;
    std::vector<Point> coords_;
    std::optional<Cost> best_known_;
};

namespace detail {

inline std::string_view trim(std::string_view s) noexcept {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        if (i >= s.size()) break;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::optional<double> parse_double(std::string_view s) noexcept {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::optional<long long> parse_integer(std::string_view s) noexcept {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Splits "KEY : VALUE", "KEY: VALUE" and bare "KEY" header records.
inline std::pair<std::string_view, std::string_view> split_record(std::string_view line) {
    const auto colon = line.find(':');
    if (colon != std::string_view::npos) {
        return {trim(line.substr(0, colon)), trim(line.substr(colon + 1))};
    }
    const auto ws = line.find_first_of(" \t");
    if (ws == std::string_view::npos) return {line, {}};
    return {trim(line.substr(0, ws)), trim(line.substr(ws))};
}

inline bool starts_with_letter(std::string_view s) noexcept {
    return !s.empty() && ((s[0] >= 'A' && s[0] <= 'Z') || (s[0] >= 'a' && s[0] <= 'z'));
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace detail

/// Parses a TSPLIB ".tsp" document with a NODE_COORD_SECTION. Nodes are
/// numbered 0..n-1 in order of appearance.
inline TspInstance parse_tsplib(std::string_view text) {
    std::string name;
    std::optional<std::size_t> dimension;
    std::optional<WeightKind> kind;
    std::vector<Point> coords;
    bool in_coords = false;
    bool in_other_section = false;
    bool saw_coord_section = false;
    std::size_t coord_section_line = 0;
    std::size_t line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                        : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto line = detail::trim(raw);
        if (line.empty()) continue;
        if (line == "EOF") break;

        if ((in_coords || in_other_section) && !detail::starts_with_letter(line)) {
            if (in_other_section) continue;
            const auto fields = detail::split_ws(line);
            const std::size_t want = kind == WeightKind::euc_3d ? 4 : 3;
            if (fields.size() != want) {
                throw ParseError("expected " + std::to_string(want) +
                                     " fields in coordinate record, got " +
                                     std::to_string(fields.size()),
                                 line_no);
            }
            Point p;
            auto x = detail::parse_double(fields[1]);
            auto y = detail::parse_double(fields[2]);
            if (!detail::parse_integer(fields[0]) || !x || !y) {
                throw ParseError("malformed coordinate record", line_no);
            }
            p.x = *x;
            p.y = *y;
            if (want == 4) {
                auto z = detail::parse_double(fields[3]);
                if (!z) throw ParseError("malformed coordinate record", line_no);
                p.z = *z;
            }
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
                throw ParseError("non-finite coordinate", line_no);
            }
            coords.push_back(p);
            continue;
        }
        in_coords = false;
        in_other_section = false;

        const auto [key, value] = detail::split_record(line);
        if (key == "NAME") {
            name = std::string(value);
        } else if (key == "TYPE") {
            if (value != "TSP") {
                throw UnsupportedFormatError("unsupported problem TYPE: " + std::string(value));
            }
        } else if (key == "DIMENSION") {
            const auto d = detail::parse_integer(value);
            if (!d || *d < 0) throw ParseError("malformed DIMENSION", line_no);
            dimension = static_cast<std::size_t>(*d);
        } else if (key == "EDGE_WEIGHT_TYPE") {
            kind = weight_kind_from_string(value);
            if (!kind) {
                throw UnsupportedFormatError("unsupported EDGE_WEIGHT_TYPE: " +
                                             std::string(value));
            }
        } else if (key == "NODE_COORD_SECTION") {
            if (!dimension) throw ParseError("NODE_COORD_SECTION before DIMENSION", line_no);
            if (!kind) {
                throw ParseError("NODE_COORD_SECTION before EDGE_WEIGHT_TYPE", line_no);
            }
            in_coords = true;
            saw_coord_section = true;
            coord_section_line = line_no;
            coords.reserve(*dimension);
        } else if (key == "EDGE_WEIGHT_SECTION" || key == "DISPLAY_DATA_SECTION" ||
                   key == "FIXED_EDGES_SECTION" || key == "TOUR_SECTION") {
            in_other_section = true;
        }
        // COMMENT, NODE_COORD_TYPE, DISPLAY_DATA_TYPE and friends are ignored.
    }

    if (!dimension) throw ParseError("missing DIMENSION", 0);
    if (!kind) throw ParseError("missing EDGE_WEIGHT_TYPE", 0);
    if (!saw_coord_section) throw ParseError("missing NODE_COORD_SECTION", 0);
    if (coords.size() != *dimension) {
        throw ParseError("DIMENSION is " + std::to_string(*dimension) + " but " +
                             std::to_string(coords.size()) +
                             " coordinates follow NODE_COORD_SECTION",
                         coord_section_line);
    }
    if (coords.size() < 3) throw ParseError("instance needs at least 3 nodes", coord_section_line);
    return TspInstance(std::move(name), *kind, std::move(coords));
}

inline TspInstance load_tsplib(const std::string &path) {
    return parse_tsplib(detail::read_file(path));
}

/// Serializes coordinates with round-trip precision.
inline std::string format_tsplib(const TspInstance &inst) {
    std::ostringstream out;
    out.precision(17);
    out << "NAME : " << inst.name() << "\nTYPE : TSP\nDIMENSION : " << inst.size()
        << "\nEDGE_WEIGHT_TYPE : " << to_string(inst.weight_kind())
        << "\nNODE_COORD_SECTION\n";
    std::size_t id = 1;
    for (const auto &p : inst.coords()) {
        out << id++ << ' ' << p.x << ' ' << p.y;
        if (inst.is_3d()) out << ' ' << p.z;
        out << '\n';
    }
    out << "EOF\n";
    return out.str();
}

/// Sum of edge costs along the cycle, closing edge included.
inline Cost tour_length(const TspInstance &inst, std::span<const NodeId> order) {
    const std::size_t n = inst.size();
    if (order.size() != n) {
        throw InvalidTourError("tour has " + std::to_string(order.size()) +
                               " nodes, instance has " + std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (const NodeId u : order) {
        if (u < 0 || static_cast<std::size_t>(u) >= n || seen[static_cast<std::size_t>(u)]) {
            throw InvalidTourError("tour is not a permutation of 0..n-1");
        }
        seen[static_cast<std::size_t>(u)] = true;
    }
    Cost total = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) total += inst.cost(order[k], order[k + 1]);
    return total + inst.cost(order[n - 1], order[0]);
}

/// Reads a best-known sidecar: one "instance-name cost" pair per line; blank
/// lines and lines starting with '#' are skipped.
inline std::map<std::string, Cost> parse_best_known(std::string_view text) {
    std::map<std::string, Cost> table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = detail::trim(
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos));
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = detail::split_ws(line);
        const auto cost = fields.size() == 2 ? detail::parse_integer(fields[1]) : std::nullopt;
        if (!cost || *cost <= 0) {
            throw ParseError("expected \"instance-name cost\"", line_no);
        }
        table[std::string(fields[0])] = *cost;
    }
    return table;
}

inline std::map<std::string, Cost> load_best_known(const std::string &path) {
    return parse_best_known(detail::read_file(path));
}

}  // namespace faco
