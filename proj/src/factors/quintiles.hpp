#pragma once

#include <map>
#include <string>
#include <vector>

#include "common/labels.hpp"

namespace ca::factors {

struct CategorizedCrossSection {
    std::map<std::string, QuintileLabel> labels;
    bool degenerate = false;  // fewer than 5 values: everything Medium
};

// Cross-sectional quintiles: sort ascending (ties by ascending asset id),
// split at order statistics floor(N*i/5); bottom fifth Very Low, top fifth
// Very High.
CategorizedCrossSection quintile_categorize_cross_sectional(
    const std::map<std::string, double>& values);

// Fixed-reference quintiles: cutoffs are the 20/40/60/80th percentiles of the
// reference series (order statistic floor(N*i/5)); intervals right-closed, so
// a value equal to a cutoff takes the lower label.
QuintileLabel quintile_categorize_fixed_reference(double value,
                                                  const std::vector<double>& reference);

}  // namespace ca::factors
