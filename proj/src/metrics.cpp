#include "twodist/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "twodist/errors.hpp"

namespace twodist {

namespace {

void require_plan_shape(const DualGraph& g, const Plan& p) {
    if (p.n != g.n()) throw DataError("plan size does not match graph");
    if (!p.district0.test(0)) throw DataError("plan not canonical (unit 0 not in district 0)");
    if (p.district1().empty()) throw DataError("plan has an empty district");
}

}  // namespace

std::pair<Rational, std::pair<std::int64_t, std::int64_t>> pop_deviation(const DualGraph& g,
                                                                         const Plan& p) {
    require_plan_shape(g, p);
    const std::int64_t total = g.total_population();
    if (total <= 0) throw DomainError("population deviation undefined: total population is 0");
    const std::int64_t p0 = g.population(p.district0);
    const std::int64_t p1 = total - p0;
    // |pbar - p0| / pbar == |total - 2 p0| / total, and the same for p1
    const std::int64_t diff = std::llabs(total - 2 * p0);
    return {Rational(BigInt(diff), BigInt(total)), {p0, p1}};
}

int edges_removed(const DualGraph& g, const Plan& p) {
    require_plan_shape(g, p);
    int er = 0;
    for (const auto& e : g.edges) er += p.district0.test(e.a) != p.district0.test(e.b);
    return er;
}

std::pair<double, double> polsby_popper(const DualGraph& g, const Plan& p) {
    require_plan_shape(g, p);
    double area[2] = {0, 0}, perim[2] = {0, 0};
    for (int i = 0; i < g.n(); ++i) {
        const int d = p.district0.test(i) ? 0 : 1;
        area[d] += g.units[i].area_km2;
        perim[d] += g.units[i].perimeter_km;
    }
    for (const auto& e : g.geo_edges) {
        const bool a0 = p.district0.test(e.a);
        if (a0 == p.district0.test(e.b)) perim[a0 ? 0 : 1] -= 2 * e.shared_perimeter_km;
    }
    for (int d = 0; d < 2; ++d)
        if (!(perim[d] > 0))
            throw GeometryError("district " + std::to_string(d) +
                                " has nonpositive derived perimeter");
    auto score = [](double a, double pm) { return 4.0 * std::numbers::pi * a / (pm * pm); };
    return {score(area[0], perim[0]), score(area[1], perim[1])};
}

std::pair<double, double> length_width(const DualGraph& g, const Plan& p) {
    require_plan_shape(g, p);
    Bbox box[2];
    bool seen[2] = {false, false};
    for (int i = 0; i < g.n(); ++i) {
        const int d = p.district0.test(i) ? 0 : 1;
        box[d] = seen[d] ? box[d].united(g.units[i].bbox) : g.units[i].bbox;
        seen[d] = true;
    }
    double out[2];
    for (int d = 0; d < 2; ++d) {
        const double dx = box[d].width(), dy = box[d].height();
        if (!(dx > 0) || !(dy > 0))
            throw GeometryError("district " + std::to_string(d) + " has a degenerate bounding box");
        out[d] = std::min(dx, dy) / std::max(dx, dy);
    }
    return {out[0], out[1]};
}

PlanMetrics score_plan(const DualGraph& g, const Plan& p) {
    PlanMetrics m;
    auto [dev, pops] = pop_deviation(g, p);
    m.pop_dev = std::move(dev);
    m.populations = pops;
    m.er = edges_removed(g, p);
    m.pbp = polsby_popper(g, p);
    m.pbp_min = std::min(m.pbp.first, m.pbp.second);
    m.pbp_mean = 0.5 * (m.pbp.first + m.pbp.second);
    m.lw = length_width(g, p);
    m.lw_min = std::min(m.lw.first, m.lw.second);
    return m;
}

std::vector<PlanMetrics> score_plans(const DualGraph& g, const std::vector<Plan>& plans,
                                     int threads) {
    std::vector<PlanMetrics> out(plans.size());
    if (threads > 1) {
        std::exception_ptr ep = nullptr;
#pragma omp parallel for schedule(static) num_threads(threads)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(plans.size()); ++i) {
            try {
                out[i] = score_plan(g, plans[i]);
            } catch (...) {
#pragma omp critical(twodist_score_plans_ex)
                if (!ep) ep = std::current_exception();
            }
        }
        if (ep) std::rethrow_exception(ep);
    } else {
        for (std::size_t i = 0; i < plans.size(); ++i) out[i] = score_plan(g, plans[i]);
    }
    return out;
}

}  // namespace twodist
