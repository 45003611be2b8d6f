// The unit/adjacency data model: geographic units with census attributes and
// the dual graph connecting units that share a border.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "twodist/nodeset.hpp"

namespace twodist {

struct VoteCounts {
    std::int64_t dem = 0;
    std::int64_t rep = 0;
    std::int64_t ind = 0;
};

struct Bbox {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;

    Bbox united(const Bbox& o) const {
        return {std::min(min_x, o.min_x), std::min(min_y, o.min_y),
                std::max(max_x, o.max_x), std::max(max_y, o.max_y)};
    }
    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
};

struct UnitRecord {
    std::string unit_id;
    std::int64_t population = 0;
    double area_km2 = 0;
    double perimeter_km = 0;
    Bbox bbox;
    std::map<std::string, VoteCounts> votes;  // keyed by contest id
};

struct AdjacencyRecord {
    std::string unit_a;
    std::string unit_b;
    double shared_perimeter_km = 0;
};

struct GraphEdge {
    int a = 0, b = 0;  // unit indices, a < b
    double shared_perimeter_km = 0;
};

// Dual graph of a unit map. `edges` is the contiguity edge set that
// enumeration and chain moves run on; `geo_edges` is the full physical
// adjacency as loaded, kept intact through pruning because district
// perimeters are a property of the territory, not of the pruned graph.
struct DualGraph {
    std::string id;
    std::vector<UnitRecord> units;
    std::vector<GraphEdge> edges;
    std::vector<GraphEdge> geo_edges;
    bool connected = false;

    // derived adjacency (contiguity edges only)
    std::vector<NodeSet> adj;
    std::vector<std::vector<int>> nbrs;

    int n() const { return static_cast<int>(units.size()); }
    int m() const { return static_cast<int>(edges.size()); }

    std::int64_t total_population() const;
    std::int64_t population(const NodeSet& s) const;

    // Rebuilds adj/nbrs/connected from `edges`; called after edits.
    void rebuild_derived();

    int unit_index(const std::string& unit_id) const;  // -1 if unknown
};

// --- bitmask graph utilities -------------------------------------------

// Vertices of `mask` reachable from `start` using only edges inside `mask`.
NodeSet reach_within(const std::vector<NodeSet>& adj, const NodeSet& mask, int start);

// True when the subgraph induced by `mask` is connected (empty -> true).
bool is_connected_within(const std::vector<NodeSet>& adj, const NodeSet& mask);

// Connected components of the subgraph induced by `mask`.
std::vector<NodeSet> components_within(const std::vector<NodeSet>& adj, const NodeSet& mask);

}  // namespace twodist
