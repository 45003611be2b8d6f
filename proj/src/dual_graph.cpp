#include "twodist/dual_graph.hpp"

#include <algorithm>

#include "twodist/errors.hpp"

namespace twodist {

std::int64_t DualGraph::total_population() const {
    std::int64_t t = 0;
    for (const auto& u : units) t += u.population;
    return t;
}

std::int64_t DualGraph::population(const NodeSet& s) const {
    std::int64_t t = 0;
    s.for_each([&](int i) { t += units[i].population; });
    return t;
}

void DualGraph::rebuild_derived() {
    const int nn = n();
    adj.assign(nn, NodeSet{});
    nbrs.assign(nn, {});
    for (const auto& e : edges) {
        adj[e.a].set(e.b);
        adj[e.b].set(e.a);
        nbrs[e.a].push_back(e.b);
        nbrs[e.b].push_back(e.a);
    }
    for (auto& v : nbrs) std::sort(v.begin(), v.end());
    connected = nn > 0 && is_connected_within(adj, NodeSet::full(nn));
}

int DualGraph::unit_index(const std::string& unit_id) const {
    for (int i = 0; i < n(); ++i)
        if (units[i].unit_id == unit_id) return i;
    return -1;
}

NodeSet reach_within(const std::vector<NodeSet>& adj, const NodeSet& mask, int start) {
    NodeSet reach = NodeSet::single(start) & mask;
    NodeSet frontier = reach;
    while (frontier.any()) {
        NodeSet next;
        frontier.for_each([&](int v) { next |= adj[v]; });
        next &= mask;
        next -= reach;
        reach |= next;
        frontier = next;
    }
    return reach;
}

bool is_connected_within(const std::vector<NodeSet>& adj, const NodeSet& mask) {
    int s = mask.lowest();
    if (s < 0) return true;
    return reach_within(adj, mask, s) == mask;
}

std::vector<NodeSet> components_within(const std::vector<NodeSet>& adj, const NodeSet& mask) {
    std::vector<NodeSet> comps;
    NodeSet left = mask;
    while (left.any()) {
        NodeSet c = reach_within(adj, left, left.lowest());
        comps.push_back(c);
        left -= c;
    }
    return comps;
}

}  // namespace twodist
