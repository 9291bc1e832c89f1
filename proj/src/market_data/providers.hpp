#pragma once

#include <map>
#include <string>
#include <vector>

#include "market_data/cache.hpp"
#include "market_data/resample.hpp"
#include "market_data/types.hpp"

namespace ca::md {

struct ProviderEndpoint {
    std::string base_url;     // e.g. "http://localhost:8080"; empty => fixture only
    std::string api_key;
    std::string fixture_dir;  // directory of canned responses keyed by query params
    int timeout_seconds = 30;
    int max_retries = 2;
    int backoff_ms = 250;

    bool fixture_only() const { return base_url.empty(); }
};

struct IngestPlan {
    std::vector<std::string> assets;
    std::string market_symbol = "market";  // index series cached like an asset
    Date from{};
    Date to{};
    Weekday week_boundary = std::chrono::Sunday;
    int parallelism = 4;
    bool offline = false;  // force fixture mode for every endpoint

    ProviderEndpoint prices;
    ProviderEndpoint onchain;
    ProviderEndpoint search;
    ProviderEndpoint news;
};

struct IngestSummary {
    int series_cached = 0;
    long weeks_cached = 0;
    std::vector<std::string> notes;
};

// Raw fetches. `offline` forces the fixture directory even when a base URL is
// configured. Network failures surface as Error(Network) after retries;
// schema violations as Error(Ingestion) naming the offending field.
std::vector<DailyRow> fetch_daily_rows(const ProviderEndpoint& ep, bool offline,
                                       const std::string& asset, Date from, Date to);
std::map<Date, double> fetch_value_series(const ProviderEndpoint& ep, bool offline,
                                          const std::string& kind, const std::string& key,
                                          Date from, Date to);
std::vector<NewsHeadline> fetch_news_items(const ProviderEndpoint& ep, bool offline, Date from,
                                           Date to, Weekday week_boundary, Date epoch_week_end);

void validate_daily_rows(const std::string& asset, const std::vector<DailyRow>& rows);

// Full ingest: every asset plus the market index, search terms, on-chain
// counts, and news, written through the cache store. Asset fetches run
// concurrently up to plan.parallelism.
IngestSummary fetch_and_cache(const IngestPlan& plan, MarketDataStore& store);

}  // namespace ca::md
