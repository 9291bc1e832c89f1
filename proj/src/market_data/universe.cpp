#include "market_data/universe.hpp"

#include <algorithm>
#include <vector>

#include "common/error.hpp"

namespace ca::md {

UniverseSnapshot select_universe(long week_index,
                                 const std::map<std::string, double>& marketcaps,
                                 std::size_t max_members) {
    if (marketcaps.empty()) {
        throw Error(ErrorKind::Input, "select_universe: empty market cap map");
    }

    std::vector<std::pair<std::string, double>> ranked(marketcaps.begin(), marketcaps.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    UniverseSnapshot snap;
    snap.week_index = week_index;
    std::size_t n = std::min(max_members, ranked.size());
    snap.members.reserve(n);
    for (std::size_t i = 0; i < n; ++i) snap.members.push_back(ranked[i].first);
    return snap;
}

}  // namespace ca::md
