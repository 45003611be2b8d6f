#include "twodist/recom.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <unordered_set>

#include "twodist/errors.hpp"
#include "twodist/metrics.hpp"
#include "twodist/trees.hpp"

namespace twodist {

namespace {

// Constraint tests compiled to integer comparisons, reused across steps.
struct CompiledBounds {
    std::int64_t pop_lo = 0;
    std::int64_t pop_hi = std::numeric_limits<std::int64_t>::max();
    int er_cap = std::numeric_limits<int>::max();  // exclusive

    bool pop_ok(std::int64_t p) const { return p >= pop_lo && p <= pop_hi; }
    bool er_ok(int er) const { return er < er_cap; }
};

CompiledBounds compile(const DualGraph& g, const ConstraintSet& c) {
    CompiledBounds b;
    b.pop_hi = g.total_population();
    if (c.max_pop_dev) {
        auto [lo, hi] = population_bounds(g.total_population(), *c.max_pop_dev);
        b.pop_lo = lo;
        b.pop_hi = hi;
    }
    if (c.max_er) {
        if (*c.max_er < 1) throw ConfigError("max_er must be a positive integer");
        b.er_cap = *c.max_er;
    }
    return b;
}

struct StepEngine {
    const DualGraph& g;
    CompiledBounds hard;
    CompiledBounds inner;  // only meaningful for thresholded acceptance
    AcceptPolicy::Kind accept_kind;
    double fallback_prob;
    int max_tree_retries;
    std::int64_t total_pop;

    StepEngine(const DualGraph& graph, const ChainConfig& cfg)
        : g(graph),
          hard(compile(graph, cfg.hard_constraints)),
          accept_kind(cfg.accept.kind),
          fallback_prob(cfg.accept.fallback_prob),
          max_tree_retries(cfg.max_tree_retries),
          total_pop(graph.total_population()) {
        if (accept_kind == AcceptPolicy::Kind::thresholded) {
            inner = compile(graph, cfg.accept.inner);
            if (!(fallback_prob >= 0.0 && fallback_prob <= 1.0))
                throw ConfigError("fallback_prob must lie in [0, 1]");
        }
        if (max_tree_retries < 1) throw ConfigError("max_tree_retries must be >= 1");
    }

    Plan step(const Plan& current, RandomSource& rng) const {
        const int n = g.n();
        for (int attempt = 0; attempt < max_tree_retries; ++attempt) {
            const std::vector<int> parent = sample_spanning_tree_parents(g, rng);

            // subtree populations via children lists, processed leaves-first
            std::vector<std::vector<int>> children(n);
            for (int v = 1; v < n; ++v) children[parent[v]].push_back(v);
            std::vector<std::int64_t> sub(n);
            std::vector<int> order;
            order.reserve(n);
            order.push_back(0);
            for (std::size_t i = 0; i < order.size(); ++i)
                for (int c : children[order[i]]) order.push_back(c);
            for (std::size_t i = order.size(); i-- > 0;) {
                const int v = order[i];
                sub[v] = g.units[v].population;
                for (int c : children[v]) sub[v] += sub[c];
            }

            // edges whose removal balances population within the hard bound
            std::vector<int> balanced;
            for (int v = 1; v < n; ++v)
                if (hard.pop_ok(sub[v])) balanced.push_back(v);
            if (balanced.empty()) continue;  // redraw the tree

            const int cut_at = balanced[rng.bounded_int(balanced.size())];

            // district = the cut subtree, gathered downward from cut_at
            NodeSet side;
            std::vector<int> stack{cut_at};
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                side.set(v);
                for (int c : children[v]) stack.push_back(c);
            }
            const Plan candidate = Plan::from_side(side, n);

            // remaining hard constraint (the cut already balanced population)
            const int er = edges_removed(g, candidate);
            if (!hard.er_ok(er)) return current;

            if (accept_kind == AcceptPolicy::Kind::always) return candidate;

            const std::int64_t pop0 = side.test(0) ? g.population(side)
                                                   : total_pop - g.population(side);
            const bool inner_ok = inner.pop_ok(pop0) && inner.er_ok(er);
            if (inner_ok) return candidate;
            return rng.uniform01() < fallback_prob ? candidate : current;
        }
        return current;  // no balanced edge in any tree: a repeat step
    }
};

void validate_seed(const DualGraph& g, const Plan& seed, const CompiledBounds& hard,
                   std::size_t idx) {
    if (!is_valid_plan(g, seed))
        throw ConfigError("seed plan " + std::to_string(idx) +
                          " is not a valid contiguous bipartition");
    const std::int64_t pop0 = g.population(seed.district0);
    if (!hard.pop_ok(pop0))
        throw ConfigError("seed plan " + std::to_string(idx) +
                          " violates the population hard constraint");
    if (!hard.er_ok(edges_removed(g, seed)))
        throw ConfigError("seed plan " + std::to_string(idx) +
                          " violates the cut-size hard constraint");
}

}  // namespace

Plan recom_step(const DualGraph& g, const Plan& current, const ChainConfig& cfg,
                RandomSource& rng) {
    if (!g.connected) throw StructureError("recom_step requires a connected graph");
    return StepEngine(g, cfg).step(current, rng);
}

Ensemble run_chain(const DualGraph& g, const ChainConfig& cfg) {
    if (!g.connected) throw StructureError("run_chain requires a connected graph");
    if (cfg.steps < 1) throw ConfigError("steps must be >= 1");
    if (cfg.seeds.empty()) throw ConfigError("at least one seed plan is required");

    const StepEngine engine(g, cfg);
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
        validate_seed(g, cfg.seeds[i], engine.hard, i);

    const std::size_t k = cfg.seeds.size();
    std::vector<std::uint64_t> len(k, cfg.steps / k), start(k, 0);
    for (std::size_t i = 0; i < cfg.steps % k; ++i) ++len[i];
    for (std::size_t i = 1; i < k; ++i) start[i] = start[i - 1] + len[i - 1];

    std::vector<std::vector<Plan>> recorded(k);
    const int threads = std::max(1, cfg.threads);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (threads > 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(k); ++i) {
        RandomSource rng(splitmix64(cfg.rng_seed + static_cast<std::uint64_t>(i)));
        Plan cur = cfg.seeds[i];
        recorded[i].reserve(len[i]);
        for (std::uint64_t s = 0; s < len[i]; ++s) {
            cur = engine.step(cur, rng);
            recorded[i].push_back(cur);
        }
    }

    Ensemble out;
    out.provenance = Provenance::chain;
    out.plans.reserve(cfg.steps);
    for (std::size_t i = 0; i < k; ++i)
        for (std::uint64_t s = 0; s < len[i]; ++s)
            out.plans.emplace_back(start[i] + s, recorded[i][s]);
    return out;
}

std::uint64_t Ensemble::unique_count() const {
    std::unordered_set<NodeSet, NodeSetHash> seen;
    seen.reserve(plans.size());
    for (const auto& [step, p] : plans) seen.insert(p.district0);
    return seen.size();
}

Ensemble unique_plans(const Ensemble& e) {
    Ensemble out;
    out.provenance = e.provenance;
    std::unordered_set<NodeSet, NodeSetHash> seen;
    seen.reserve(e.plans.size());
    for (const auto& [step, p] : e.plans)
        if (seen.insert(p.district0).second) out.plans.emplace_back(step, p);
    return out;
}

}  // namespace twodist
