// Spanning-tree machinery: exact tree counts through the matrix-tree theorem,
// the sp(P) partition weight, the recombination proposal distribution over an
// enumerated plan set, and uniform spanning-tree sampling.
#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "twodist/bigint.hpp"
#include "twodist/dual_graph.hpp"
#include "twodist/plan.hpp"
#include "twodist/rational.hpp"
#include "twodist/rng.hpp"

namespace twodist {

// Number of spanning trees of the subgraph induced by `within`: the reduced
// Laplacian determinant, evaluated in fraction-free exact integer arithmetic.
// Returns 0 for a disconnected induced subgraph, 1 for a single vertex.
BigInt spanning_tree_count(const DualGraph& g, const NodeSet& within);
BigInt spanning_tree_count(const DualGraph& g);

// sp(P) = sp(district 0) * sp(district 1) * cut_size: the number of
// (spanning tree of g, cut edge) pairs that produce plan p.
BigInt sp_partition(const DualGraph& g, const Plan& p);

struct ProposalDistribution {
    // aligned with the input plan order
    std::vector<BigInt> weight;            // sp(P)
    std::vector<Rational> per_plan;        // sp(P) / total
    BigInt total_weight;
    // keyed by cut size C: probability that a proposal has that cut size,
    // and how many plans in the set have it
    std::map<int, Rational> per_er;
    std::map<int, std::uint64_t> plans_per_er;
};

// Proposal probabilities over an enumerated set E. Throws DomainError for an
// empty set. threads > 1 parallelizes the per-plan determinants.
ProposalDistribution proposal_distribution(const DualGraph& g, const std::vector<Plan>& ensemble,
                                           int threads = 1);

// Wilson's loop-erased-random-walk sampler: exactly uniform over spanning
// trees, deterministic for a given source state. Returned as the parent of
// each vertex in the tree rooted at 0 (parent[0] == -1).
std::vector<int> sample_spanning_tree_parents(const DualGraph& g, RandomSource& rng);

// The same tree as a canonically sorted edge list.
std::vector<std::pair<int, int>> sample_spanning_tree(const DualGraph& g, RandomSource& rng);

}  // namespace twodist
