#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "common/dates.hpp"

namespace ca::md {

struct Candle {
    Date date{};
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;  // quote-currency value

    bool valid() const {
        return low <= std::min(open, close) && high >= std::max(open, close) && volume >= 0.0;
    }
};

// One day of raw provider data: candle plus market cap when the source has it.
struct DailyRow {
    Candle candle;
    std::optional<double> market_cap;
};

struct WeeklyAssetRecord {
    std::string asset_id;
    long week_index = 0;                 // 0-based from the dataset epoch
    Date week_end{};                     // date of the boundary day
    std::vector<Candle> daily_candles;   // exactly 7, gap days forward-filled
    std::vector<std::uint8_t> filled_mask;  // parallel to daily_candles; 1 = synthesized
    std::optional<double> market_cap_last_day;
    std::optional<double> weekly_return;  // close/prev-week close - 1

    int filled_days() const {
        int n = 0;
        for (auto f : filled_mask) n += f;
        return n;
    }

    // Weekly aggregate: open of first day, close of last, extreme highs/lows,
    // summed volume.
    Candle weekly() const {
        Candle w;
        w.date = week_end;
        w.open = daily_candles.front().open;
        w.close = daily_candles.back().close;
        w.high = daily_candles.front().high;
        w.low = daily_candles.front().low;
        for (const Candle& c : daily_candles) {
            w.high = std::max(w.high, c.high);
            w.low = std::min(w.low, c.low);
            w.volume += c.volume;
        }
        return w;
    }
};

struct NewsHeadline {
    long week_index = 0;
    std::string published_at;  // ISO-8601 timestamp
    std::string title;
    std::string source;
};

struct MarketWeekRecord {
    long week_index = 0;
    std::optional<double> market_return;
    std::optional<double> search_index_btc;
    std::optional<double> search_index_crypto;
    std::optional<double> wallet_count;
    std::optional<double> active_addresses;
    std::optional<double> tx_count;
    std::optional<double> payments_count;
    std::vector<NewsHeadline> news;
};

struct UniverseSnapshot {
    long week_index = 0;
    std::vector<std::string> members;  // <=30 asset ids, descending market cap
};

}  // namespace ca::md
