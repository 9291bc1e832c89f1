#pragma once

#include <map>
#include <string>

#include "market_data/types.hpp"

namespace ca::md {

// Top `max_members` assets by market cap, descending; ties broken by
// ascending asset id. Fewer assets than the cap -> all included.
UniverseSnapshot select_universe(long week_index,
                                 const std::map<std::string, double>& marketcaps,
                                 std::size_t max_members = 30);

}  // namespace ca::md
