// Distribution-report plumbing shared by the CLI: fixed-width histograms and
// deterministic number formatting.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace twodist {

struct HistogramBin {
    double lo = 0, hi = 0;
    std::uint64_t count = 0;
};

// Equal-width bins spanning [min, max] of the data; the top edge is
// inclusive. A constant sample collapses to a single bin.
std::vector<HistogramBin> fixed_width_histogram(const std::vector<double>& values, int bins);

// Shortest round-trip decimal form (std::to_chars); deterministic output.
std::string format_double(double v);

}  // namespace twodist
