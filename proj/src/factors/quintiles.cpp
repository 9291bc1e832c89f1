#include "factors/quintiles.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace ca::factors {

CategorizedCrossSection quintile_categorize_cross_sectional(
    const std::map<std::string, double>& values) {
    CategorizedCrossSection out;
    const std::size_t n = values.size();
    if (n < 5) {
        out.degenerate = true;
        for (const auto& [asset, _] : values) out.labels[asset] = QuintileLabel::Medium;
        return out;
    }

    std::vector<std::pair<std::string, double>> ranked(values.begin(), values.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });

    std::size_t bucket = 0;
    for (std::size_t rank = 1; rank <= n; ++rank) {
        while (bucket < 4 && rank > n * (bucket + 1) / 5) ++bucket;
        out.labels[ranked[rank - 1].first] = kQuintileOrder[bucket];
    }
    return out;
}

QuintileLabel quintile_categorize_fixed_reference(double value,
                                                  const std::vector<double>& reference) {
    if (std::isnan(value)) throw Error(ErrorKind::Input, "cannot categorize NaN value");
    if (reference.size() < 5) {
        throw Error(ErrorKind::Input, "reference series needs at least 5 values");
    }
    std::vector<double> sorted(reference);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    for (std::size_t i = 1; i <= 4; ++i) {
        double cutoff = sorted[n * i / 5 - 1];
        if (value <= cutoff) return kQuintileOrder[i - 1];
    }
    return QuintileLabel::VeryHigh;
}

}  // namespace ca::factors
