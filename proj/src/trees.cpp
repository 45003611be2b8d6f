#include "twodist/trees.hpp"

#include <algorithm>
#include <exception>

#include "twodist/errors.hpp"
#include "twodist/metrics.hpp"

namespace twodist {

namespace {

// Fraction-free (Bareiss) determinant; every division is exact.
BigInt det_bareiss(std::vector<std::vector<BigInt>> m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return BigInt(1);
    BigInt prev(1);
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            int swap_row = -1;
            for (int i = k + 1; i < n; ++i)
                if (!m[i][k].is_zero()) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) return BigInt(0);
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = BigInt(0);
        }
        prev = m[k][k];
    }
    BigInt det = m[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

}  // namespace

BigInt spanning_tree_count(const DualGraph& g, const NodeSet& within) {
    const int k = within.count();
    if (k == 0) throw StructureError("spanning_tree_count: empty vertex set");
    if (k == 1) return BigInt(1);

    // reduced Laplacian: drop the last vertex of the induced subgraph
    std::vector<int> verts;
    verts.reserve(k);
    within.for_each([&](int v) { verts.push_back(v); });
    std::vector<int> local(g.n(), -1);
    for (int i = 0; i < k; ++i) local[verts[i]] = i;

    const int d = k - 1;
    std::vector<std::vector<BigInt>> lap(d, std::vector<BigInt>(d, BigInt(0)));
    std::vector<int> deg(k, 0);
    for (const auto& e : g.edges) {
        if (!within.test(e.a) || !within.test(e.b)) continue;
        const int a = local[e.a], b = local[e.b];
        ++deg[a];
        ++deg[b];
        if (a < d && b < d) {
            lap[a][b] -= BigInt(1);
            lap[b][a] -= BigInt(1);
        }
    }
    for (int i = 0; i < d; ++i) lap[i][i] = BigInt(deg[i]);
    return det_bareiss(std::move(lap));
}

BigInt spanning_tree_count(const DualGraph& g) {
    if (g.n() == 0) throw StructureError("spanning_tree_count: empty graph");
    return spanning_tree_count(g, NodeSet::full(g.n()));
}

BigInt sp_partition(const DualGraph& g, const Plan& p) {
    const int er = edges_removed(g, p);
    return spanning_tree_count(g, p.district0) * spanning_tree_count(g, p.district1()) *
           BigInt(er);
}

ProposalDistribution proposal_distribution(const DualGraph& g, const std::vector<Plan>& ensemble,
                                           int threads) {
    if (ensemble.empty())
        throw DomainError("proposal_distribution: empty enumerated set");

    const std::size_t m = ensemble.size();
    ProposalDistribution dist;
    dist.weight.resize(m);
    std::vector<int> er(m);

    if (threads > 1) {
        std::exception_ptr ep = nullptr;
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
            try {
                er[i] = edges_removed(g, ensemble[i]);
                dist.weight[i] = sp_partition(g, ensemble[i]);
            } catch (...) {
#pragma omp critical(twodist_propdist_ex)
                if (!ep) ep = std::current_exception();
            }
        }
        if (ep) std::rethrow_exception(ep);
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            er[i] = edges_removed(g, ensemble[i]);
            dist.weight[i] = sp_partition(g, ensemble[i]);
        }
    }

    std::map<int, BigInt> er_weight;
    for (std::size_t i = 0; i < m; ++i) {
        dist.total_weight += dist.weight[i];
        er_weight[er[i]] += dist.weight[i];
        ++dist.plans_per_er[er[i]];
    }
    if (dist.total_weight.is_zero())
        throw DomainError("proposal_distribution: all plans have zero tree weight");

    dist.per_plan.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        dist.per_plan.emplace_back(dist.weight[i], dist.total_weight);
    for (const auto& [c, w] : er_weight) dist.per_er.emplace(c, Rational(w, dist.total_weight));
    return dist;
}

std::vector<int> sample_spanning_tree_parents(const DualGraph& g, RandomSource& rng) {
    if (!g.connected) throw StructureError("sample_spanning_tree: graph must be connected");
    const int n = g.n();
    std::vector<int> parent(n, -1);
    std::vector<char> in_tree(n, 0);
    in_tree[0] = 1;
    for (int i = 1; i < n; ++i) {
        if (in_tree[i]) continue;
        // random walk from i until the tree is hit; the parent overwrites
        // perform the loop erasure
        int u = i;
        while (!in_tree[u]) {
            const auto& nb = g.nbrs[u];
            parent[u] = nb[rng.bounded_int(nb.size())];
            u = parent[u];
        }
        u = i;
        while (!in_tree[u]) {
            in_tree[u] = 1;
            u = parent[u];
        }
    }
    return parent;
}

std::vector<std::pair<int, int>> sample_spanning_tree(const DualGraph& g, RandomSource& rng) {
    std::vector<int> parent = sample_spanning_tree_parents(g, rng);
    std::vector<std::pair<int, int>> edges;
    edges.reserve(g.n() > 0 ? g.n() - 1 : 0);
    for (int v = 1; v < g.n(); ++v)
        edges.emplace_back(std::min(v, parent[v]), std::max(v, parent[v]));
    std::sort(edges.begin(), edges.end());
    return edges;
}

}  // namespace twodist
