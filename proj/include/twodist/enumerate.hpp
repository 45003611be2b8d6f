// Exact enumeration of contiguous two-district plans.
//
// Two independent engines cover the two jobs:
//  - a frontier dynamic program counts plans without materializing them
//    (optionally tracking the cut size for an ER bound), and
//  - a pruned depth-first search over connected-subgraph growth materializes
//    plans and counts under population constraints.
// brute_force_plans is the small-graph ground-truth oracle for both.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "twodist/bigint.hpp"
#include "twodist/dual_graph.hpp"
#include "twodist/plan.hpp"

namespace twodist {

struct ConstraintSet {
    std::optional<double> max_pop_dev;  // exclusive: deviation < max_pop_dev
    std::optional<int> max_er;          // exclusive: cut size < max_er

    bool unconstrained() const { return !max_pop_dev && !max_er; }
};

// Inclusive integer bounds [lo, hi] on a district's population equivalent to
// "deviation < max_pop_dev", evaluated in exact rational arithmetic (the
// double is taken at its exact binary value).
std::pair<std::int64_t, std::int64_t> population_bounds(std::int64_t total_pop,
                                                        double max_pop_dev);

// What the enumerator knows about a plan at emission time.
struct PlanView {
    const NodeSet& district0;
    int n;
    std::int64_t pop0;
    int er;

    Plan plan() const { return Plan{district0, n}; }
};

using PlanSink = std::function<void(const PlanView&)>;

struct EnumerateOptions {
    int threads = 1;
    // By default sink invocations are serialized even when searching in
    // parallel; set this when the sink is safe to call concurrently.
    bool concurrent_sink = false;
};

// Exact count of contiguous bipartitions satisfying c. Dispatches to the
// frontier DP when no population constraint is set, otherwise to the search
// engine. Throws StructureError on a disconnected graph.
BigInt count_plans(const DualGraph& g, const ConstraintSet& c, int threads = 1);

// Emits every plan satisfying c exactly once, in canonical orientation;
// returns the number emitted. Serial emission order is deterministic
// (ascending district-0 set discovery order); with threads > 1 the order is
// unspecified. Sink exceptions propagate as SinkError with progress count.
std::uint64_t enumerate_plans(const DualGraph& g, const ConstraintSet& c, const PlanSink& sink,
                              const EnumerateOptions& opts = {});

// Ground-truth oracle: tries all 2^(n-1) subsets containing unit 0.
// Hard-capped at n <= 25.
std::vector<Plan> brute_force_plans(const DualGraph& g, const ConstraintSet& c = {});

// The individual engines, exposed so tests can cross-check them.
// count_plans_frontier requires the graph's path-decomposition frontier to be
// narrow (<= 24); it supports an optional ER bound but no population bound.
BigInt count_plans_frontier(const DualGraph& g, std::optional<int> max_er = {});
std::uint64_t count_plans_search(const DualGraph& g, const ConstraintSet& c, int threads = 1);

}  // namespace twodist
