#pragma once

#include <map>
#include <vector>

#include "market_data/types.hpp"

namespace ca::md {

struct ResampleOptions {
    Weekday week_boundary = std::chrono::Sunday;  // day that closes a week
    // Week-end date that defines week_index 0. When unset, the first complete
    // week of the input becomes week 0.
    std::optional<Date> epoch_week_end;
};

// Aggregates daily candles into complete calendar weeks. Partial leading and
// trailing weeks are dropped. Gap days inside a week are forward-filled
// (close carried, volume 0) and counted in filled_days.
// Input must be sorted by date with no duplicates; otherwise throws
// Error(Input). Empty input yields an empty result.
std::vector<WeeklyAssetRecord> resample_daily_to_weekly(
    const std::string& asset_id,
    const std::vector<DailyRow>& days,
    const ResampleOptions& options = {});

}  // namespace ca::md
