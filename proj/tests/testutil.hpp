// Shared test helpers: small-graph builders, deterministic RNG, and the
// independent oracles (deletion-contraction tree counts, exhaustive spanning
// tree enumeration) the main implementations are checked against.
#pragma once

#include <unistd.h>

#include <algorithm>
#include <cassert>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "twodist/bigint.hpp"
#include "twodist/dual_graph.hpp"
#include "twodist/geo_ingest.hpp"
#include "twodist/plan.hpp"

namespace testutil {

using twodist::BigInt;
using twodist::DualGraph;
using twodist::NodeSet;
using twodist::Plan;

inline std::mt19937_64 make_rng(std::uint64_t seed = 0x5eed5eedULL) {
    return std::mt19937_64{seed};
}

// --- graph builders ------------------------------------------------------

struct UnitGeom {
    std::vector<std::int64_t> pops;
    std::vector<double> areas;
    std::vector<double> perims;
    std::vector<twodist::Bbox> bboxes;
};

inline DualGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                            std::vector<std::int64_t> pops = {},
                            std::vector<double> shared = {}) {
    std::vector<twodist::UnitRecord> units;
    for (int i = 0; i < n; ++i) {
        twodist::UnitRecord u;
        u.unit_id = "u" + std::to_string(i);
        u.population = pops.empty() ? 10 : pops[i];
        u.area_km2 = 1.0;
        u.perimeter_km = 4.0;
        u.bbox = {double(i), 0.0, double(i) + 1.0, 1.0};
        units.push_back(u);
    }
    std::vector<twodist::AdjacencyRecord> adj;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        auto [a, b] = edges[k];
        adj.push_back({"u" + std::to_string(a), "u" + std::to_string(b),
                       shared.empty() ? 1.0 : shared[k]});
    }
    return twodist::build_graph(std::move(units), adj);
}

inline std::vector<std::pair<int, int>> path_edges(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return e;
}

inline std::vector<std::pair<int, int>> cycle_edges(int n) {
    auto e = path_edges(n);
    e.push_back({n - 1, 0});
    return e;
}

inline std::vector<std::pair<int, int>> complete_edges(int n) {
    std::vector<std::pair<int, int>> e;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) e.push_back({a, b});
    return e;
}

inline std::vector<std::pair<int, int>> grid_edges(int rows, int cols) {
    std::vector<std::pair<int, int>> e;
    auto id = [&](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) e.push_back({id(r, c), id(r, c + 1)});
            if (r + 1 < rows) e.push_back({id(r, c), id(r + 1, c)});
        }
    return e;
}

inline DualGraph path_graph(int n, std::vector<std::int64_t> pops = {}) {
    return make_graph(n, path_edges(n), std::move(pops));
}
inline DualGraph cycle_graph(int n) { return make_graph(n, cycle_edges(n)); }
inline DualGraph complete_graph(int n) { return make_graph(n, complete_edges(n)); }
inline DualGraph grid_graph(int rows, int cols, std::vector<std::int64_t> pops = {}) {
    return make_graph(rows * cols, grid_edges(rows, cols), std::move(pops));
}

// Connected by construction: a random attachment tree plus extra edges.
inline DualGraph random_connected_graph(int n, std::mt19937_64& rng, double extra_p = 0.3) {
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> seen;
    for (int v = 1; v < n; ++v) {
        int u = static_cast<int>(rng() % v);
        edges.push_back({u, v});
        seen.insert({u, v});
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (!seen.count({a, b}) && unif(rng) < extra_p) {
                edges.push_back({a, b});
                seen.insert({a, b});
            }
    std::vector<std::int64_t> pops(n);
    for (int i = 0; i < n; ++i) pops[i] = 50 + static_cast<std::int64_t>(rng() % 100);
    return make_graph(n, edges, pops);
}

inline std::set<NodeSet> plan_set(const std::vector<Plan>& plans) {
    std::set<NodeSet> s;
    for (const auto& p : plans) s.insert(p.district0);
    return s;
}

// --- oracles -------------------------------------------------------------

// Deletion-contraction spanning tree count on a multigraph, for cross-checking
// the determinant path. Multiplicity matrix indexed by original vertex ids;
// `verts` lists the still-live vertices.
inline BigInt delcon_count(std::vector<std::vector<int>> mult, std::vector<int> verts);

namespace detail {

inline bool multigraph_connected(const std::vector<std::vector<int>>& mult,
                                 const std::vector<int>& verts) {
    if (verts.empty()) return true;
    std::set<int> vs(verts.begin(), verts.end());
    std::set<int> seen{verts[0]};
    std::vector<int> stack{verts[0]};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : verts)
            if (!seen.count(v) && mult[u][v] > 0) {
                seen.insert(v);
                stack.push_back(v);
            }
    }
    return seen.size() == vs.size();
}

}  // namespace detail

inline BigInt delcon_count(std::vector<std::vector<int>> mult, std::vector<int> verts) {
    if (verts.size() <= 1) return BigInt(1);
    if (!detail::multigraph_connected(mult, verts)) return BigInt(0);
    if (verts.size() == 2) return BigInt(mult[verts[0]][verts[1]]);

    int u = -1, v = -1;
    for (std::size_t i = 0; i < verts.size() && u < 0; ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j)
            if (mult[verts[i]][verts[j]] > 0) {
                u = verts[i];
                v = verts[j];
                break;
            }
    assert(u >= 0);
    const int k = mult[u][v];

    // delete every parallel copy of (u,v)
    auto del = mult;
    del[u][v] = del[v][u] = 0;
    BigInt without = delcon_count(std::move(del), verts);

    // contract v into u
    auto con = mult;
    for (int w : verts) {
        if (w == u || w == v) continue;
        con[u][w] += con[v][w];
        con[w][u] = con[u][w];
    }
    con[u][v] = con[v][u] = 0;
    std::vector<int> rest;
    for (int w : verts)
        if (w != v) rest.push_back(w);
    BigInt contracted = delcon_count(std::move(con), rest);

    return without + BigInt(k) * contracted;
}

inline BigInt delcon_count(const DualGraph& g) {
    std::vector<std::vector<int>> mult(g.n(), std::vector<int>(g.n(), 0));
    for (const auto& e : g.edges) mult[e.a][e.b] = mult[e.b][e.a] = 1;
    std::vector<int> verts(g.n());
    std::iota(verts.begin(), verts.end(), 0);
    return delcon_count(std::move(mult), verts);
}

// Every spanning tree, enumerated as sorted edge lists, by trying all
// (n-1)-subsets of the edge set with a union-find acyclicity check.
inline std::vector<std::vector<std::pair<int, int>>> all_spanning_trees(const DualGraph& g) {
    const int n = g.n(), m = g.m();
    std::vector<std::vector<std::pair<int, int>>> trees;
    if (n <= 1) return trees;
    std::vector<int> pick(n - 1);
    std::iota(pick.begin(), pick.end(), 0);

    auto is_tree = [&](const std::vector<int>& sel) {
        std::vector<int> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (int ei : sel) {
            int ra = find(g.edges[ei].a), rb = find(g.edges[ei].b);
            if (ra == rb) return false;
            parent[ra] = rb;
        }
        return true;
    };

    while (true) {
        if (is_tree(pick)) {
            std::vector<std::pair<int, int>> t;
            for (int ei : pick) t.push_back({g.edges[ei].a, g.edges[ei].b});
            std::sort(t.begin(), t.end());
            trees.push_back(std::move(t));
        }
        // next combination
        int i = n - 2;
        while (i >= 0 && pick[i] == m - (n - 1) + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < n - 1; ++j) pick[j] = pick[j - 1] + 1;
    }
    return trees;
}

inline double chi_square_stat(const std::vector<std::uint64_t>& observed, double expected) {
    double stat = 0;
    for (auto o : observed) {
        const double d = static_cast<double>(o) - expected;
        stat += d * d / expected;
    }
    return stat;
}

// --- scratch files -------------------------------------------------------

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            auto cand = base / ("twodist_test_" + std::to_string(::getpid()) + "_" +
                                std::to_string(counter() + i));
            std::error_code ec;
            if (std::filesystem::create_directory(cand, ec)) {
                path = cand;
                counter() += i + 1;
                return;
            }
        }
        assert(false && "could not create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }

private:
    static int& counter() {
        static int c = 0;
        return c;
    }
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testutil
