// Scoring plans against historical election data: per-district Democratic
// share, seats won, and the statewide proportionality reference.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "twodist/dual_graph.hpp"
#include "twodist/plan.hpp"

namespace twodist {

// two_party: share = D / (D + R).
// augmented: share = (D + I) / (D + I + R), folding Independent votes into
// the Democratic column.
enum class ShareMode { two_party, augmented };

std::string to_string(ShareMode m);

struct ElectionDataset {
    std::string contest_id;
    ShareMode mode = ShareMode::two_party;
    std::vector<VoteCounts> votes;  // aligned with graph unit indices
};

// Pulls one contest out of the units' vote tables.
ElectionDataset make_dataset(const DualGraph& g, const std::string& contest_id, ShareMode mode);

struct ElectionOutcome {
    // ascending: shares.first is District 1 (smaller share), shares.second
    // District 2 (larger)
    std::pair<double, double> shares{};
    int dem_seats = 0;                // strict majority; an exact tie elects nobody
    double proportional_seats = 0.0;  // 2 x statewide share, not an integer
};

ElectionOutcome district_shares(const DualGraph& g, const Plan& p, const ElectionDataset& e);

// Twice the statewide share: the seat count proportional representation
// would imply for two seats.
double proportionality_reference(const ElectionDataset& e);

struct FiveNumber {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

// Tukey hinges: quartiles are medians of the lower/upper halves, with the
// median element included in both halves when the count is odd.
FiveNumber five_number(std::vector<double> values);

struct OutcomeTable {
    std::vector<ElectionOutcome> rows;  // aligned with the input plan order
    FiveNumber district1;               // summary of the smaller shares
    FiveNumber district2;               // summary of the larger shares
    std::array<std::uint64_t, 3> seats_histogram{};  // counts of 0/1/2 seats
};

OutcomeTable ensemble_outcomes(const DualGraph& g, const std::vector<Plan>& plans,
                               const ElectionDataset& e, int threads = 1);

}  // namespace twodist
