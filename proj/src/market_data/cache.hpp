#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "market_data/types.hpp"

namespace ca::md {

// Canonical on-disk cache of week-aligned market data:
//   {root}/candles/{asset}/{week:04}.csv   7 daily rows per file
//   {root}/metrics/market/{week:04}.csv    metric,value rows
//   {root}/news/market/{week:04}.csv       published_at,title,source rows
//   {root}/manifest.json                   source + row hash per series
// Writes are idempotent: a file is rewritten only when its bytes change, and
// the manifest keeps the original fetch time for unchanged series.
class MarketDataStore {
public:
    explicit MarketDataStore(std::string root);

    const std::string& root() const { return root_; }

    void write_asset_weeks(const std::string& asset,
                           const std::vector<WeeklyAssetRecord>& weeks,
                           const std::string& source);
    std::vector<WeeklyAssetRecord> load_asset_weeks(const std::string& asset) const;
    std::vector<std::string> list_assets() const;

    // Week-level market metrics (search indexes, on-chain counts).
    void write_market_metrics(const std::map<long, std::map<std::string, double>>& by_week,
                              const std::string& source);
    std::map<long, std::map<std::string, double>> load_market_metrics() const;

    void write_news(const std::map<long, std::vector<NewsHeadline>>& by_week,
                    const std::string& source);
    std::map<long, std::vector<NewsHeadline>> load_news() const;

    // Assembled market-week view; market_return comes from the index asset's
    // candle series (when present in the cache).
    std::vector<MarketWeekRecord> load_market_weeks(const std::string& market_symbol) const;

private:
    void update_manifest(const std::string& series_key, const std::string& source,
                         const std::string& content_hash);

    std::string root_;
    mutable std::mutex manifest_mutex_;
};

}  // namespace ca::md
