// Per-plan scores: population deviation (exact), edges-removed, Polsby-Popper
// and length-width compactness.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "twodist/dual_graph.hpp"
#include "twodist/plan.hpp"
#include "twodist/rational.hpp"

namespace twodist {

struct PlanMetrics {
    Rational pop_dev;  // |ideal - p_i| / ideal, identical for both districts
    std::pair<std::int64_t, std::int64_t> populations;
    int er = 0;
    std::pair<double, double> pbp{};
    double pbp_min = 0;
    double pbp_mean = 0;
    std::pair<double, double> lw{};
    double lw_min = 0;
};

// Exact deviation plus the district population pair. With two districts the
// deviation is the same number for both sides, so one value is returned.
std::pair<Rational, std::pair<std::int64_t, std::int64_t>> pop_deviation(const DualGraph& g,
                                                                         const Plan& p);

// Cut size: contiguity-graph edges with endpoints in different districts.
int edges_removed(const DualGraph& g, const Plan& p);

// 4*pi*A/P^2 per district. District perimeters subtract shared borders using
// the full physical adjacency (geo_edges), not the pruned contiguity edges.
std::pair<double, double> polsby_popper(const DualGraph& g, const Plan& p);

// Short-side / long-side of the axis-aligned bbox union per district.
std::pair<double, double> length_width(const DualGraph& g, const Plan& p);

PlanMetrics score_plan(const DualGraph& g, const Plan& p);

// Batch scorer; threads > 1 runs the plans in parallel, output order is by
// plan index either way.
std::vector<PlanMetrics> score_plans(const DualGraph& g, const std::vector<Plan>& plans,
                                     int threads = 1);

}  // namespace twodist
