#include "twodist/reports.hpp"

#include <algorithm>
#include <charconv>

#include "twodist/errors.hpp"

namespace twodist {

std::vector<HistogramBin> fixed_width_histogram(const std::vector<double>& values, int bins) {
    if (values.empty()) throw DomainError("histogram: empty sample");
    if (bins < 1) throw ConfigError("histogram: bin count must be >= 1");
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double mn = *mn_it, mx = *mx_it;
    if (mn == mx) return {{mn, mx, values.size()}};

    std::vector<HistogramBin> out(bins);
    const double width = (mx - mn) / bins;
    for (int i = 0; i < bins; ++i) {
        out[i].lo = mn + width * i;
        out[i].hi = i + 1 == bins ? mx : mn + width * (i + 1);
    }
    for (double v : values) {
        int idx = static_cast<int>((v - mn) / width);
        idx = std::clamp(idx, 0, bins - 1);
        ++out[idx].count;
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

}  // namespace twodist
