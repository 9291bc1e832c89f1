#include "market_data/providers.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <thread>

#include "common/csv.hpp"
#include "common/error.hpp"
#include "common/fsio.hpp"
#include "common/numfmt.hpp"
#include "common/parallel.hpp"

namespace ca::md {

using nlohmann::json;
using std::chrono::days;

namespace {

long long unix_seconds(Date d) {
    return std::chrono::duration_cast<std::chrono::seconds>(d.time_since_epoch()).count();
}

Date date_from_ms(long long ms) {
    return Date{days{ms / 86'400'000}};
}

std::string query_key(const std::string& prefix, Date from, Date to) {
    return prefix + "_" + format_date(from) + "_" + format_date(to);
}

std::string http_get(const ProviderEndpoint& ep, const std::string& path) {
    httplib::Client client(ep.base_url);
    client.set_connection_timeout(ep.timeout_seconds);
    client.set_read_timeout(ep.timeout_seconds);
    httplib::Headers headers;
    if (!ep.api_key.empty()) headers.emplace("x-api-key", ep.api_key);

    std::string last_error;
    for (int attempt = 0; attempt <= ep.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(ep.backoff_ms << (attempt - 1)));
        }
        auto res = client.Get(path, headers);
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw Error(ErrorKind::Provider,
                        "GET " + path + " -> status " + std::to_string(res->status));
        }
        return res->body;
    }
    throw Error(ErrorKind::Network, "GET " + ep.base_url + path + " failed after " +
                                        std::to_string(ep.max_retries + 1) + " attempts: " + last_error);
}

json http_get_json(const ProviderEndpoint& ep, const std::string& path) {
    std::string body = http_get(ep, path);
    json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded()) {
        throw Error(ErrorKind::Ingestion, "provider returned non-JSON body for " + path);
    }
    return parsed;
}

const json& require_field(const json& obj, const std::string& field, const std::string& context) {
    auto it = obj.find(field);
    if (it == obj.end()) {
        throw Error(ErrorKind::Ingestion, context + ": missing field '" + field + "'");
    }
    return *it;
}

std::string fixture_path(const ProviderEndpoint& ep, const std::string& kind,
                         const std::string& key) {
    return ep.fixture_dir + "/" + kind + "/" + key + ".csv";
}

bool use_fixture(const ProviderEndpoint& ep, bool offline) {
    if (offline || ep.fixture_only()) {
        if (ep.fixture_dir.empty()) {
            throw Error(ErrorKind::Config, "provider has neither base_url nor fixture_dir");
        }
        return true;
    }
    return false;
}

std::optional<double> parse_optional_num(const std::string& s, const char* field) {
    if (s.empty()) return std::nullopt;
    try {
        return num_from_string(s);
    } catch (const Error&) {
        throw Error(ErrorKind::Ingestion, std::string("bad numeric value in field '") + field +
                                              "': '" + s + "'");
    }
}

// Minimal RFC-822 date ("Tue, 06 Jun 2023 10:30:00 GMT") -> ISO timestamp.
std::optional<std::pair<Date, std::string>> parse_rfc822(const std::string& text) {
    static const char* kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    int d = 0, y = 0, hh = 0, mm = 0, ss = 0;
    char mon[4] = {0};
    int n = std::sscanf(text.c_str(), "%*3s, %d %3s %d %d:%d:%d", &d, mon, &y, &hh, &mm, &ss);
    if (n < 3) return std::nullopt;
    int month = 0;
    for (int i = 0; i < 12; ++i) {
        if (std::string(mon) == kMonths[i]) month = i + 1;
    }
    if (month == 0) return std::nullopt;
    char iso[32];
    std::snprintf(iso, sizeof(iso), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, month, d, hh, mm, ss);
    char day_only[16];
    std::snprintf(day_only, sizeof(day_only), "%04d-%02d-%02d", y, month, d);
    return std::make_pair(parse_date(day_only), std::string(iso));
}

std::string extract_tag(const std::string& xml, size_t from, size_t to, const std::string& tag) {
    std::string open = "<" + tag + ">", close = "</" + tag + ">";
    size_t a = xml.find(open, from);
    if (a == std::string::npos || a >= to) return "";
    a += open.size();
    size_t b = xml.find(close, a);
    if (b == std::string::npos || b > to) return "";
    return xml.substr(a, b - a);
}

}  // namespace

void validate_daily_rows(const std::string& asset, const std::vector<DailyRow>& rows) {
    for (size_t i = 0; i < rows.size(); ++i) {
        const Candle& c = rows[i].candle;
        auto fail = [&](const char* field, const std::string& why) {
            throw Error(ErrorKind::Ingestion, asset + " " + format_date(c.date) +
                                                  ": field '" + field + "' " + why);
        };
        if (c.volume < 0) fail("volume", "is negative");
        if (c.open <= 0 || c.high <= 0 || c.low <= 0 || c.close <= 0) fail("close", "requires positive prices");
        if (c.low > std::min(c.open, c.close)) fail("low", "exceeds min(open, close)");
        if (c.high < std::max(c.open, c.close)) fail("high", "is below max(open, close)");
        if (rows[i].market_cap && *rows[i].market_cap <= 0) fail("market_cap", "must be positive");
        if (i > 0 && !(rows[i - 1].candle.date < c.date)) fail("date", "out of order or duplicated");
    }
}

std::vector<DailyRow> fetch_daily_rows(const ProviderEndpoint& ep, bool offline,
                                       const std::string& asset, Date from, Date to) {
    std::vector<DailyRow> rows;
    if (use_fixture(ep, offline)) {
        std::string path = fixture_path(ep, "prices", query_key(asset, from, to));
        csv::Table t = csv::read_file(path);
        int c_date = t.column("date"), c_open = t.column("open"), c_high = t.column("high"),
            c_low = t.column("low"), c_close = t.column("close"), c_vol = t.column("volume"),
            c_mcap = t.column("market_cap");
        for (const char* required : {"date", "open", "high", "low", "close", "volume"}) {
            if (t.column(required) < 0) {
                throw Error(ErrorKind::Ingestion,
                            path + ": missing column '" + std::string(required) + "'");
            }
        }
        for (const auto& r : t.rows) {
            DailyRow row;
            row.candle.date = parse_date(r[c_date]);
            row.candle.open = *parse_optional_num(r[c_open], "open");
            row.candle.high = *parse_optional_num(r[c_high], "high");
            row.candle.low = *parse_optional_num(r[c_low], "low");
            row.candle.close = *parse_optional_num(r[c_close], "close");
            row.candle.volume = *parse_optional_num(r[c_vol], "volume");
            if (c_mcap >= 0) row.market_cap = parse_optional_num(r[c_mcap], "market_cap");
            rows.push_back(row);
        }
    } else {
        // CoinGecko-compatible: OHLC plus market_chart for volumes and caps.
        std::string ohlc_path = "/api/v3/coins/" + asset + "/ohlc?vs_currency=usd&days=max";
        json ohlc = http_get_json(ep, ohlc_path);
        if (!ohlc.is_array()) throw Error(ErrorKind::Ingestion, asset + ": ohlc body is not an array");

        std::string range_path = "/api/v3/coins/" + asset +
                                 "/market_chart/range?vs_currency=usd&from=" +
                                 std::to_string(unix_seconds(from)) +
                                 "&to=" + std::to_string(unix_seconds(to) + 86'400);
        json chart = http_get_json(ep, range_path);
        std::map<Date, double> volumes, mcaps;
        for (const auto& pair : require_field(chart, "total_volumes", asset)) {
            volumes[date_from_ms(pair.at(0).get<long long>())] = pair.at(1).get<double>();
        }
        for (const auto& pair : require_field(chart, "market_caps", asset)) {
            mcaps[date_from_ms(pair.at(0).get<long long>())] = pair.at(1).get<double>();
        }

        for (const auto& entry : ohlc) {
            if (!entry.is_array() || entry.size() < 5) {
                throw Error(ErrorKind::Ingestion, asset + ": malformed ohlc row");
            }
            DailyRow row;
            row.candle.date = date_from_ms(entry.at(0).get<long long>());
            if (row.candle.date < from || row.candle.date > to) continue;
            row.candle.open = entry.at(1).get<double>();
            row.candle.high = entry.at(2).get<double>();
            row.candle.low = entry.at(3).get<double>();
            row.candle.close = entry.at(4).get<double>();
            if (auto it = volumes.find(row.candle.date); it != volumes.end()) {
                row.candle.volume = it->second;
            }
            if (auto it = mcaps.find(row.candle.date); it != mcaps.end()) {
                row.market_cap = it->second;
            }
            rows.push_back(row);
        }
    }

    validate_daily_rows(asset, rows);
    return rows;
}

std::map<Date, double> fetch_value_series(const ProviderEndpoint& ep, bool offline,
                                          const std::string& kind, const std::string& key,
                                          Date from, Date to) {
    std::map<Date, double> out;
    if (use_fixture(ep, offline)) {
        std::string path = fixture_path(ep, kind, query_key(key, from, to));
        csv::Table t = csv::read_file(path);
        int c_date = t.column("date"), c_value = t.column("value");
        if (c_date < 0 || c_value < 0) {
            throw Error(ErrorKind::Ingestion, path + ": missing column 'date' or 'value'");
        }
        for (const auto& r : t.rows) {
            out[parse_date(r[c_date])] = *parse_optional_num(r[c_value], "value");
        }
        return out;
    }

    std::string path;
    if (kind == "onchain") {
        path = "/charts/" + key + "?format=json&start=" + std::to_string(unix_seconds(from)) +
               "&end=" + std::to_string(unix_seconds(to));
    } else {
        path = "/trends?term=" + key + "&from=" + format_date(from) + "&to=" + format_date(to);
    }
    json body = http_get_json(ep, path);
    for (const auto& v : require_field(body, "values", kind + "/" + key)) {
        Date d{};
        if (v.contains("x")) {
            d = Date{days{v.at("x").get<long long>() / 86'400}};
        } else {
            d = parse_date(require_field(v, "date", kind).get<std::string>());
        }
        double value = v.contains("y") ? v.at("y").get<double>()
                                       : require_field(v, "value", kind).get<double>();
        if (d >= from && d <= to) out[d] = value;
    }
    return out;
}

std::vector<NewsHeadline> fetch_news_items(const ProviderEndpoint& ep, bool offline, Date from,
                                           Date to, Weekday week_boundary, Date epoch_week_end) {
    std::vector<NewsHeadline> out;
    auto add = [&](Date day, const std::string& published_at, const std::string& title,
                   const std::string& source) {
        if (title.empty()) {
            throw Error(ErrorKind::Ingestion, "news item at " + published_at + ": field 'title' is empty");
        }
        if (day < from || day > to) return;
        NewsHeadline h;
        h.week_index = weeks_between(epoch_week_end, next_week_end(day, week_boundary));
        h.published_at = published_at;
        h.title = title;
        h.source = source;
        out.push_back(std::move(h));
    };

    if (use_fixture(ep, offline)) {
        std::string path = fixture_path(ep, "news", query_key("news", from, to));
        csv::Table t = csv::read_file(path);
        int c_at = t.column("published_at"), c_title = t.column("title"), c_src = t.column("source");
        if (c_at < 0 || c_title < 0) {
            throw Error(ErrorKind::Ingestion, path + ": missing column 'published_at' or 'title'");
        }
        for (const auto& r : t.rows) {
            std::string at = r[c_at];
            add(parse_date(at.substr(0, 10)), at, r[c_title], c_src >= 0 ? r[c_src] : "fixture");
        }
        return out;
    }

    std::string xml = http_get(ep, "/rss");
    size_t pos = 0;
    while (true) {
        size_t a = xml.find("<item>", pos);
        if (a == std::string::npos) break;
        size_t b = xml.find("</item>", a);
        if (b == std::string::npos) break;
        std::string title = extract_tag(xml, a, b, "title");
        std::string pub = extract_tag(xml, a, b, "pubDate");
        auto parsed = parse_rfc822(pub);
        if (!parsed) {
            throw Error(ErrorKind::Ingestion, "news item: field 'pubDate' unparseable: '" + pub + "'");
        }
        add(parsed->first, parsed->second, title, ep.base_url);
        pos = b + 7;
    }
    return out;
}

namespace {

// Weekly value = last observation inside the week.
std::map<long, double> weekly_last_value(const std::map<Date, double>& series, Date epoch_week_end,
                                         Weekday boundary) {
    std::map<long, double> out;
    for (const auto& [d, v] : series) {
        long idx = weeks_between(epoch_week_end, next_week_end(d, boundary));
        out[idx] = v;  // map iteration is date-ascending, so later days win
    }
    return out;
}

}  // namespace

IngestSummary fetch_and_cache(const IngestPlan& plan, MarketDataStore& store) {
    IngestSummary summary;
    std::mutex summary_mutex;

    Date epoch_week_end = next_week_end(plan.from, plan.week_boundary);
    if (epoch_week_end - days{6} < plan.from) epoch_week_end += days{7};

    ResampleOptions opts;
    opts.week_boundary = plan.week_boundary;
    opts.epoch_week_end = epoch_week_end;

    std::vector<std::string> price_series = plan.assets;
    price_series.push_back(plan.market_symbol);

    parallel_for(price_series.size(), static_cast<size_t>(std::max(1, plan.parallelism)),
                 [&](size_t i) {
                     const std::string& asset = price_series[i];
                     auto rows = fetch_daily_rows(plan.prices, plan.offline, asset, plan.from, plan.to);
                     auto weeks = resample_daily_to_weekly(asset, rows, opts);
                     std::string source = plan.offline || plan.prices.fixture_only()
                                              ? "fixture:" + plan.prices.fixture_dir
                                              : plan.prices.base_url;
                     store.write_asset_weeks(asset, weeks, source);
                     std::lock_guard lock(summary_mutex);
                     ++summary.series_cached;
                     summary.weeks_cached += static_cast<long>(weeks.size());
                 });

    // Market-level metrics: two search terms plus four on-chain counts.
    std::map<long, std::map<std::string, double>> metrics;
    auto merge = [&](const std::string& name, const std::map<Date, double>& series) {
        for (const auto& [week, value] : weekly_last_value(series, epoch_week_end, plan.week_boundary)) {
            if (week >= 0) metrics[week][name] = value;
        }
    };
    merge("search_btc",
          fetch_value_series(plan.search, plan.offline, "search", "bitcoin", plan.from, plan.to));
    merge("search_crypto", fetch_value_series(plan.search, plan.offline, "search", "cryptocurrency",
                                              plan.from, plan.to));
    for (const char* metric : {"wallets", "active_addresses", "tx_count", "payments"}) {
        merge(metric,
              fetch_value_series(plan.onchain, plan.offline, "onchain", metric, plan.from, plan.to));
    }
    store.write_market_metrics(metrics, plan.offline || plan.onchain.fixture_only()
                                            ? "fixture:" + plan.onchain.fixture_dir
                                            : plan.onchain.base_url);
    summary.series_cached += 1;

    auto items = fetch_news_items(plan.news, plan.offline, plan.from, plan.to, plan.week_boundary,
                                  epoch_week_end);
    std::map<long, std::vector<NewsHeadline>> news_by_week;
    for (auto& h : items) {
        if (h.week_index >= 0) news_by_week[h.week_index].push_back(std::move(h));
    }
    store.write_news(news_by_week, plan.offline || plan.news.fixture_only()
                                       ? "fixture:" + plan.news.fixture_dir
                                       : plan.news.base_url);
    summary.series_cached += 1;

    return summary;
}

}  // namespace ca::md
