#include "market_data/cache.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>

#include "common/csv.hpp"
#include "common/error.hpp"
#include "common/fsio.hpp"
#include "common/hash.hpp"
#include "common/numfmt.hpp"

namespace ca::md {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string week_file_name(long week_index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04ld.csv", week_index);
    return buf;
}

long week_index_from_path(const fs::path& p) {
    return std::strtol(p.stem().string().c_str(), nullptr, 10);
}

// Rewrite only when bytes change so repeated ingests leave the cache
// byte-identical.
bool write_if_changed(const std::string& path, const std::string& content) {
    if (fs::exists(path)) {
        if (ca::fsio::read_text(path) == content) return false;
    }
    ca::fsio::write_text(path, content);
    return true;
}

std::string now_utc_iso() {
    auto now = std::chrono::system_clock::now();
    auto t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

MarketDataStore::MarketDataStore(std::string root) : root_(std::move(root)) {}

void MarketDataStore::write_asset_weeks(const std::string& asset,
                                        const std::vector<WeeklyAssetRecord>& weeks,
                                        const std::string& source) {
    std::string all_bytes;
    for (const auto& rec : weeks) {
        csv::Table t;
        t.header = {"date", "open", "high", "low", "close", "volume", "filled", "market_cap_last"};
        for (size_t i = 0; i < rec.daily_candles.size(); ++i) {
            const Candle& c = rec.daily_candles[i];
            bool last = i + 1 == rec.daily_candles.size();
            std::string mcap =
                last && rec.market_cap_last_day ? num_to_string(*rec.market_cap_last_day) : "";
            bool filled = i < rec.filled_mask.size() && rec.filled_mask[i];
            t.rows.push_back({format_date(c.date), num_to_string(c.open), num_to_string(c.high),
                              num_to_string(c.low), num_to_string(c.close), num_to_string(c.volume),
                              filled ? "1" : "0", mcap});
        }
        std::string bytes = csv::serialize(t);
        all_bytes += bytes;
        std::string path = root_ + "/candles/" + asset + "/" + week_file_name(rec.week_index);
        write_if_changed(path, bytes);
    }
    update_manifest("candles/" + asset, source, sha256_hex(all_bytes));
}

std::vector<WeeklyAssetRecord> MarketDataStore::load_asset_weeks(const std::string& asset) const {
    std::vector<WeeklyAssetRecord> out;
    auto files = fsio::list_files(root_ + "/candles/" + asset);
    std::optional<double> prev_close;
    long prev_index = -2;
    for (const auto& f : files) {
        csv::Table t = csv::read_file(f);
        WeeklyAssetRecord rec;
        rec.asset_id = asset;
        rec.week_index = week_index_from_path(f);
        for (const auto& row : t.rows) {
            Candle c;
            c.date = parse_date(row[0]);
            c.open = num_from_string(row[1]);
            c.high = num_from_string(row[2]);
            c.low = num_from_string(row[3]);
            c.close = num_from_string(row[4]);
            c.volume = num_from_string(row[5]);
            rec.filled_mask.push_back(row[6] == "1" ? 1 : 0);
            if (!row[7].empty()) rec.market_cap_last_day = num_from_string(row[7]);
            rec.daily_candles.push_back(c);
        }
        if (rec.daily_candles.empty()) {
            throw Error(ErrorKind::State, "empty cached week file: " + f);
        }
        rec.week_end = rec.daily_candles.back().date;
        if (prev_close && rec.week_index == prev_index + 1) {
            rec.weekly_return = rec.daily_candles.back().close / *prev_close - 1.0;
        }
        prev_close = rec.daily_candles.back().close;
        prev_index = rec.week_index;
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<std::string> MarketDataStore::list_assets() const {
    std::vector<std::string> out;
    std::string dir = root_ + "/candles";
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_directory()) out.push_back(e.path().filename().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

void MarketDataStore::write_market_metrics(
    const std::map<long, std::map<std::string, double>>& by_week, const std::string& source) {
    std::string all_bytes;
    for (const auto& [week, metrics] : by_week) {
        csv::Table t;
        t.header = {"metric", "value"};
        for (const auto& [name, value] : metrics) {
            t.rows.push_back({name, num_to_string(value)});
        }
        std::string bytes = csv::serialize(t);
        all_bytes += bytes;
        write_if_changed(root_ + "/metrics/market/" + week_file_name(week), bytes);
    }
    update_manifest("metrics/market", source, sha256_hex(all_bytes));
}

std::map<long, std::map<std::string, double>> MarketDataStore::load_market_metrics() const {
    std::map<long, std::map<std::string, double>> out;
    for (const auto& f : fsio::list_files(root_ + "/metrics/market")) {
        csv::Table t = csv::read_file(f);
        auto& metrics = out[week_index_from_path(f)];
        for (const auto& row : t.rows) metrics[row[0]] = num_from_string(row[1]);
    }
    return out;
}

void MarketDataStore::write_news(const std::map<long, std::vector<NewsHeadline>>& by_week,
                                 const std::string& source) {
    std::string all_bytes;
    for (const auto& [week, items] : by_week) {
        csv::Table t;
        t.header = {"published_at", "title", "source"};
        for (const auto& h : items) t.rows.push_back({h.published_at, h.title, h.source});
        std::string bytes = csv::serialize(t);
        all_bytes += bytes;
        write_if_changed(root_ + "/news/market/" + week_file_name(week), bytes);
    }
    update_manifest("news/market", source, sha256_hex(all_bytes));
}

std::map<long, std::vector<NewsHeadline>> MarketDataStore::load_news() const {
    std::map<long, std::vector<NewsHeadline>> out;
    for (const auto& f : fsio::list_files(root_ + "/news/market")) {
        long week = week_index_from_path(f);
        csv::Table t = csv::read_file(f);
        auto& items = out[week];
        for (const auto& row : t.rows) {
            NewsHeadline h;
            h.week_index = week;
            h.published_at = row[0];
            h.title = row[1];
            h.source = row[2];
            items.push_back(std::move(h));
        }
    }
    return out;
}

std::vector<MarketWeekRecord> MarketDataStore::load_market_weeks(
    const std::string& market_symbol) const {
    auto metrics = load_market_metrics();
    auto news = load_news();
    auto index_weeks = load_asset_weeks(market_symbol);

    std::map<long, MarketWeekRecord> by_week;
    for (const auto& rec : index_weeks) {
        auto& m = by_week[rec.week_index];
        m.week_index = rec.week_index;
        m.market_return = rec.weekly_return;
    }
    for (const auto& [week, values] : metrics) {
        auto& m = by_week[week];
        m.week_index = week;
        auto get = [&](const char* name) -> std::optional<double> {
            auto it = values.find(name);
            if (it == values.end()) return std::nullopt;
            return it->second;
        };
        m.search_index_btc = get("search_btc");
        m.search_index_crypto = get("search_crypto");
        m.wallet_count = get("wallets");
        m.active_addresses = get("active_addresses");
        m.tx_count = get("tx_count");
        m.payments_count = get("payments");
    }
    for (auto& [week, items] : news) {
        auto& m = by_week[week];
        m.week_index = week;
        m.news = items;
    }

    std::vector<MarketWeekRecord> out;
    out.reserve(by_week.size());
    for (auto& [week, rec] : by_week) out.push_back(std::move(rec));
    return out;
}

void MarketDataStore::update_manifest(const std::string& series_key, const std::string& source,
                                      const std::string& content_hash) {
    std::lock_guard lock(manifest_mutex_);
    std::string path = root_ + "/manifest.json";
    json manifest = json::object();
    if (fs::exists(path)) manifest = json::parse(fsio::read_text(path));
    if (!manifest.contains("series")) manifest["series"] = json::object();

    auto& entry = manifest["series"][series_key];
    if (entry.is_object() && entry.value("hash", "") == content_hash) {
        return;  // unchanged upstream: keep original fetch time, byte-equal manifest
    }
    entry = {{"source", source}, {"fetched_at", now_utc_iso()}, {"hash", content_hash}};
    fsio::write_text(path, manifest.dump(2) + "\n");
}

}  // namespace ca::md
