#include "market_data/resample.hpp"

#include <algorithm>

#include "common/error.hpp"

namespace ca::md {

using std::chrono::days;

std::vector<WeeklyAssetRecord> resample_daily_to_weekly(const std::string& asset_id,
                                                        const std::vector<DailyRow>& rows,
                                                        const ResampleOptions& options) {
    std::vector<WeeklyAssetRecord> out;
    if (rows.empty()) return out;

    for (size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i - 1].candle.date < rows[i].candle.date)) {
            throw Error(ErrorKind::Input,
                        "daily candles must be sorted by date without duplicates (" + asset_id + ")");
        }
    }

    const Date first = rows.front().candle.date;
    const Date last = rows.back().candle.date;

    // First week-end whose full Monday..Sunday-style span fits in the input.
    Date week_end = next_week_end(first, options.week_boundary);
    if (week_end - days{6} < first) week_end += days{7};
    if (week_end > last) return out;  // no complete week

    const Date epoch = options.epoch_week_end.value_or(week_end);

    size_t cursor = 0;
    double prev_close = 0.0;
    bool have_prev_close = false;
    std::optional<double> last_known_mcap;
    std::optional<double> prev_week_close;

    // Advance to the first day of the first complete week, tracking the most
    // recent close/market cap for forward-fills.
    while (cursor < rows.size() && rows[cursor].candle.date < week_end - days{6}) {
        prev_close = rows[cursor].candle.close;
        have_prev_close = true;
        if (rows[cursor].market_cap) last_known_mcap = rows[cursor].market_cap;
        ++cursor;
    }

    while (week_end <= last) {
        WeeklyAssetRecord rec;
        rec.asset_id = asset_id;
        rec.week_end = week_end;
        rec.week_index = weeks_between(epoch, week_end);
        rec.daily_candles.reserve(7);

        for (Date d = week_end - days{6}; d <= week_end; d = d + days{1}) {
            if (cursor < rows.size() && rows[cursor].candle.date == d) {
                rec.daily_candles.push_back(rows[cursor].candle);
                rec.filled_mask.push_back(0);
                prev_close = rows[cursor].candle.close;
                have_prev_close = true;
                if (rows[cursor].market_cap) last_known_mcap = rows[cursor].market_cap;
                ++cursor;
            } else {
                if (!have_prev_close) {
                    throw Error(ErrorKind::Data,
                                "no prior close to forward-fill " + format_date(d) + " (" + asset_id + ")");
                }
                Candle filled;
                filled.date = d;
                filled.open = filled.high = filled.low = filled.close = prev_close;
                filled.volume = 0.0;
                rec.daily_candles.push_back(filled);
                rec.filled_mask.push_back(1);
            }
        }

        rec.market_cap_last_day = last_known_mcap;

        if (prev_week_close) {
            rec.weekly_return = rec.daily_candles.back().close / *prev_week_close - 1.0;
        }
        prev_week_close = rec.daily_candles.back().close;

        out.push_back(std::move(rec));
        week_end += days{7};
    }

    return out;
}

}  // namespace ca::md
