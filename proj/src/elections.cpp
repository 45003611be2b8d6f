#include "twodist/elections.hpp"

#include <algorithm>
#include <exception>

#include "twodist/errors.hpp"

namespace twodist {

std::string to_string(ShareMode m) {
    return m == ShareMode::two_party ? "two_party" : "augmented";
}

ElectionDataset make_dataset(const DualGraph& g, const std::string& contest_id, ShareMode mode) {
    ElectionDataset e;
    e.contest_id = contest_id;
    e.mode = mode;
    e.votes.reserve(g.n());
    bool any = false;
    for (const auto& u : g.units) {
        auto it = u.votes.find(contest_id);
        if (it == u.votes.end())
            throw DataError("unit '" + u.unit_id + "' has no vote data for contest '" +
                            contest_id + "'");
        e.votes.push_back(it->second);
        any |= it->second.dem + it->second.rep > 0;
    }
    if (!any)
        throw DataError("contest '" + contest_id + "' has no two-party votes in any unit");
    return e;
}

ElectionOutcome district_shares(const DualGraph& g, const Plan& p, const ElectionDataset& e) {
    if (p.n != g.n() || static_cast<int>(e.votes.size()) != g.n())
        throw DataError("plan/dataset size mismatch");

    std::int64_t dem[2] = {0, 0}, rep[2] = {0, 0}, ind[2] = {0, 0};
    for (int i = 0; i < g.n(); ++i) {
        const int d = p.district0.test(i) ? 0 : 1;
        dem[d] += e.votes[i].dem;
        rep[d] += e.votes[i].rep;
        ind[d] += e.votes[i].ind;
    }

    const bool aug = e.mode == ShareMode::augmented;
    double share[2];
    int seats = 0;
    for (int d = 0; d < 2; ++d) {
        const std::int64_t num = aug ? dem[d] + ind[d] : dem[d];
        const std::int64_t den = aug ? dem[d] + ind[d] + rep[d] : dem[d] + rep[d];
        if (den == 0)
            throw DomainError("district " + std::to_string(d) + " share undefined: no votes in '" +
                              e.contest_id + "'");
        share[d] = static_cast<double>(num) / static_cast<double>(den);
        // strict majority, decided on integers so ties are exact
        if (num * 2 > den) ++seats;
    }

    ElectionOutcome out;
    out.shares = {std::min(share[0], share[1]), std::max(share[0], share[1])};
    out.dem_seats = seats;
    out.proportional_seats = proportionality_reference(e);
    return out;
}

double proportionality_reference(const ElectionDataset& e) {
    std::int64_t dem = 0, rep = 0, ind = 0;
    for (const auto& v : e.votes) {
        dem += v.dem;
        rep += v.rep;
        ind += v.ind;
    }
    const bool aug = e.mode == ShareMode::augmented;
    const std::int64_t num = aug ? dem + ind : dem;
    const std::int64_t den = aug ? dem + ind + rep : dem + rep;
    if (den == 0) throw DomainError("statewide share undefined: no votes");
    return 2.0 * static_cast<double>(num) / static_cast<double>(den);
}

namespace {

double median_of(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    // median of v[lo..hi] inclusive, v sorted
    const std::size_t n = hi - lo + 1;
    const std::size_t mid = lo + n / 2;
    return n % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

FiveNumber five_number(std::vector<double> values) {
    if (values.empty()) throw DomainError("five_number: empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    FiveNumber f;
    f.min = values.front();
    f.max = values.back();
    f.median = median_of(values, 0, n - 1);
    if (n == 1) {
        f.q1 = f.q3 = values[0];
        return f;
    }
    // Tukey: odd counts include the median in both halves
    const std::size_t half = n / 2;
    f.q1 = median_of(values, 0, (n % 2 ? half : half - 1));
    f.q3 = median_of(values, (n % 2 ? half : half), n - 1);
    return f;
}

OutcomeTable ensemble_outcomes(const DualGraph& g, const std::vector<Plan>& plans,
                               const ElectionDataset& e, int threads) {
    if (plans.empty()) throw DomainError("ensemble_outcomes: empty ensemble");
    OutcomeTable t;
    t.rows.resize(plans.size());

    if (threads > 1) {
        std::exception_ptr ep = nullptr;
#pragma omp parallel for schedule(static) num_threads(threads)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(plans.size()); ++i) {
            try {
                t.rows[i] = district_shares(g, plans[i], e);
            } catch (...) {
#pragma omp critical(twodist_outcomes_ex)
                if (!ep) ep = std::current_exception();
            }
        }
        if (ep) std::rethrow_exception(ep);
    } else {
        for (std::size_t i = 0; i < plans.size(); ++i) t.rows[i] = district_shares(g, plans[i], e);
    }

    std::vector<double> lo, hi;
    lo.reserve(plans.size());
    hi.reserve(plans.size());
    for (const auto& r : t.rows) {
        lo.push_back(r.shares.first);
        hi.push_back(r.shares.second);
        ++t.seats_histogram[static_cast<std::size_t>(r.dem_seats)];
    }
    t.district1 = five_number(std::move(lo));
    t.district2 = five_number(std::move(hi));
    return t;
}

}  // namespace twodist
