// Recombination Markov chain for two districts: draw a uniform spanning tree
// on the whole graph, cut a population-balancing edge, then run the result
// through the hard constraints and the acceptance policy. Rejections repeat
// the current plan so every step records exactly one plan.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twodist/dual_graph.hpp"
#include "twodist/enumerate.hpp"
#include "twodist/plan.hpp"
#include "twodist/rng.hpp"

namespace twodist {

struct AcceptPolicy {
    enum class Kind { always, thresholded };
    Kind kind = Kind::always;
    // thresholded: accept when `inner` holds, else accept with fallback_prob
    ConstraintSet inner;
    double fallback_prob = 0.0;
};

struct ChainConfig {
    std::uint64_t steps = 1;
    ConstraintSet hard_constraints;
    AcceptPolicy accept;
    std::vector<Plan> seeds;  // one independent chain per seed
    std::uint64_t rng_seed = 0;
    int max_tree_retries = 100;  // tree redraws within one step
    int threads = 1;             // parallelism across seed chains
};

enum class Provenance { enumerated, chain };

struct Ensemble {
    Provenance provenance = Provenance::chain;
    std::vector<std::pair<std::uint64_t, Plan>> plans;  // (step index, plan)

    std::size_t size() const { return plans.size(); }
    std::uint64_t unique_count() const;
};

// One proposal. Returns the accepted candidate, or `current` again when the
// step rejects (constraint violation, acceptance miss, or no balanced edge
// after max_tree_retries redraws).
Plan recom_step(const DualGraph& g, const Plan& current, const ChainConfig& cfg,
                RandomSource& rng);

// k seeds -> k independent chains of steps/k steps each (the first steps%k
// chains take one extra), concatenated in seed order. Fully reproducible
// from cfg.rng_seed. Throws ConfigError for seeds violating the constraints.
Ensemble run_chain(const DualGraph& g, const ChainConfig& cfg);

// First-occurrence dedup by canonical assignment; step indices preserved.
Ensemble unique_plans(const Ensemble& e);

}  // namespace twodist
