// Benchmark of the parallel kernels against their serial reference paths:
// constrained plan counting, batch plan scoring, election outcome scoring,
// and proposal-weight computation. Usage: twodist-bench [threads]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "twodist/elections.hpp"
#include "twodist/enumerate.hpp"
#include "twodist/geo_ingest.hpp"
#include "twodist/metrics.hpp"
#include "twodist/trees.hpp"

using namespace twodist;

namespace {

DualGraph make_grid(int rows, int cols) {
    std::vector<UnitRecord> units;
    std::vector<AdjacencyRecord> adjacency;
    auto name = [&](int r, int c) { return "u" + std::to_string(r * cols + c); };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            UnitRecord u;
            u.unit_id = name(r, c);
            u.population = 100 + ((r * 31 + c * 17) % 23);
            u.area_km2 = 1.0;
            u.perimeter_km = 4.0;
            u.bbox = {double(c), double(r), double(c + 1), double(r + 1)};
            u.votes["bench"] = {1000 + 13 * r, 1100 + 7 * c, 10};
            units.push_back(u);
        }
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) adjacency.push_back({name(r, c), name(r, c + 1), 1.0});
            if (r + 1 < rows) adjacency.push_back({name(r, c), name(r + 1, c), 1.0});
        }
    return build_graph(std::move(units), adjacency);
}

template <typename F>
double time_ms(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, int threads) {
    std::printf("%-28s serial %9.1f ms   %d threads %9.1f ms   speedup %.2fx\n", name, serial_ms,
                threads, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
    int threads = 4;
    if (argc > 1) threads = std::atoi(argv[1]);
#ifdef _OPENMP
    std::printf("omp max threads: %d, benchmarking with %d\n", omp_get_max_threads(), threads);
#else
    std::printf("built without OpenMP; parallel paths run serially\n");
#endif

    // counting under a population bound on a 6x5 grid
    {
        DualGraph g = make_grid(6, 5);
        ConstraintSet c;
        c.max_pop_dev = 0.10;
        std::uint64_t serial_n = 0, parallel_n = 0;
        double s = time_ms([&] { serial_n = count_plans_search(g, c, 1); });
        double p = time_ms([&] { parallel_n = count_plans_search(g, c, threads); });
        if (serial_n != parallel_n) {
            std::fprintf(stderr, "count mismatch: %llu vs %llu\n",
                         (unsigned long long)serial_n, (unsigned long long)parallel_n);
            return 1;
        }
        std::printf("grid 6x5 count (dev<0.1): %llu plans\n", (unsigned long long)serial_n);
        report("count_plans_search", s, p, threads);
    }

    // plan scoring and election outcomes over an enumerated set
    {
        DualGraph g = make_grid(5, 5);
        ConstraintSet c;
        c.max_pop_dev = 0.2;
        std::vector<Plan> plans;
        enumerate_plans(g, c, [&](const PlanView& v) { plans.push_back(v.plan()); });
        std::printf("grid 5x5 ensemble: %zu plans\n", plans.size());

        std::vector<PlanMetrics> ms, mp;
        double s = time_ms([&] { ms = score_plans(g, plans, 1); });
        double p = time_ms([&] { mp = score_plans(g, plans, threads); });
        report("score_plans", s, p, threads);

        ElectionDataset ds = make_dataset(g, "bench", ShareMode::two_party);
        OutcomeTable ts, tp;
        s = time_ms([&] { ts = ensemble_outcomes(g, plans, ds, 1); });
        p = time_ms([&] { tp = ensemble_outcomes(g, plans, ds, threads); });
        report("ensemble_outcomes", s, p, threads);

        ProposalDistribution d1, d2;
        s = time_ms([&] { d1 = proposal_distribution(g, plans, 1); });
        p = time_ms([&] { d2 = proposal_distribution(g, plans, threads); });
        if (!(d1.total_weight == d2.total_weight)) {
            std::fprintf(stderr, "proposal weight mismatch\n");
            return 1;
        }
        report("proposal_distribution", s, p, threads);
    }
    return 0;
}
