#include "factors/factors.hpp"

#include <cmath>
#include <cstdio>

#include "common/csv.hpp"
#include "common/error.hpp"
#include "common/numfmt.hpp"
#include "common/stats.hpp"

namespace ca::factors {

const std::vector<CryptoField>& crypto_field_order() {
    static const std::vector<CryptoField> kOrder = {
        {"MCAP", &CryptoFactorVector::mcap},
        {"PRC", &CryptoFactorVector::prc},
        {"MAXDPRC", &CryptoFactorVector::maxdprc},
        {"MOM 1,0", &CryptoFactorVector::mom_1_0},
        {"MOM 2,0", &CryptoFactorVector::mom_2_0},
        {"MOM 3,0", &CryptoFactorVector::mom_3_0},
        {"MOM 4,0", &CryptoFactorVector::mom_4_0},
        {"MOM 4,1", &CryptoFactorVector::mom_4_1},
        {"PRCVOL", &CryptoFactorVector::prcvol},
        {"STDPRCVOL", &CryptoFactorVector::stdprcvol},
    };
    return kOrder;
}

const std::vector<MarketField>& market_field_order() {
    static const std::vector<MarketField> kOrder = {
        {"ATTN BTC", &MarketFactorVector::attn_btc},
        {"ATTN CRYPTO", &MarketFactorVector::attn_crypto},
        {"UNI ADDR", &MarketFactorVector::uni_addr},
        {"ACT ADDR", &MarketFactorVector::act_addr},
        {"TXN", &MarketFactorVector::txn},
        {"PAY", &MarketFactorVector::pay},
    };
    return kOrder;
}

namespace {

const md::WeeklyAssetRecord* find_week(const std::vector<md::WeeklyAssetRecord>& history,
                                       long week_index) {
    for (const auto& rec : history) {
        if (rec.week_index == week_index) return &rec;
    }
    return nullptr;
}

std::optional<double> checked_log(double value, const char* field,
                                  std::map<std::string, std::string>& errors) {
    if (!(value > 0.0)) {
        errors[field] = "log of non-positive value";
        return std::nullopt;
    }
    return std::log(value);
}

}  // namespace

CryptoFactorVector compute_crypto_factors(const std::vector<md::WeeklyAssetRecord>& history,
                                          long week_index) {
    CryptoFactorVector v;
    v.week_index = week_index;

    const md::WeeklyAssetRecord* now = find_week(history, week_index);
    if (!now) {
        throw Error(ErrorKind::Input,
                    "no weekly record at formation week " + std::to_string(week_index));
    }
    v.asset_id = now->asset_id;

    if (now->market_cap_last_day) {
        v.mcap = checked_log(*now->market_cap_last_day, "MCAP", v.field_errors);
    }

    double close_now = now->daily_candles.back().close;
    v.prc = checked_log(close_now, "PRC", v.field_errors);

    double max_close = close_now;
    for (const auto& c : now->daily_candles) max_close = std::max(max_close, c.close);
    v.maxdprc = max_close;

    auto close_at = [&](long w) -> std::optional<double> {
        const md::WeeklyAssetRecord* rec = find_week(history, w);
        if (!rec) return std::nullopt;
        return rec->daily_candles.back().close;
    };

    auto momentum = [&](long from_w, long to_w) -> std::optional<double> {
        auto base = close_at(from_w);
        auto end = close_at(to_w);
        if (!base || !end || *base == 0.0) return std::nullopt;
        return *end / *base - 1.0;
    };

    v.mom_1_0 = momentum(week_index - 1, week_index);
    v.mom_2_0 = momentum(week_index - 2, week_index);
    v.mom_3_0 = momentum(week_index - 3, week_index);
    v.mom_4_0 = momentum(week_index - 4, week_index);
    v.mom_4_1 = momentum(week_index - 4, week_index - 1);

    std::vector<double> dollar_volume;
    dollar_volume.reserve(now->daily_candles.size());
    for (const auto& c : now->daily_candles) dollar_volume.push_back(c.volume * c.close);
    v.prcvol = checked_log(stats::mean(dollar_volume), "PRCVOL", v.field_errors);
    double sd = stats::stddev_pop(dollar_volume);
    if (sd > 0.0) {
        v.stdprcvol = std::log(sd);
    } else {
        v.field_errors["STDPRCVOL"] = "zero variance";
    }

    return v;
}

MarketFactorVector compute_market_factors(const std::vector<md::MarketWeekRecord>& history,
                                          long week_index, long reference_begin,
                                          long reference_end) {
    MarketFactorVector v;
    v.week_index = week_index;

    std::map<long, const md::MarketWeekRecord*> by_week;
    for (const auto& rec : history) by_week[rec.week_index] = &rec;

    auto value_of = [&](long w, std::optional<double> md::MarketWeekRecord::*member)
        -> std::optional<double> {
        auto it = by_week.find(w);
        if (it == by_week.end()) return std::nullopt;
        return it->second->*member;
    };

    // Demeaned attention at week w: index minus its previous four-week mean.
    auto demeaned = [&](long w, std::optional<double> md::MarketWeekRecord::*member)
        -> std::optional<double> {
        auto now = value_of(w, member);
        if (!now) return std::nullopt;
        double sum = 0.0;
        for (long k = 1; k <= 4; ++k) {
            auto prior = value_of(w - k, member);
            if (!prior) return std::nullopt;
            sum += *prior;
        }
        return *now - sum / 4.0;
    };

    auto attention = [&](std::optional<double> md::MarketWeekRecord::*member,
                         const char* field) -> std::optional<double> {
        auto raw_now = demeaned(week_index, member);
        if (!raw_now) return std::nullopt;
        std::vector<double> reference;
        for (long w = reference_begin; w <= reference_end; ++w) {
            if (auto raw = demeaned(w, member)) reference.push_back(*raw);
        }
        if (reference.size() < 2) {
            v.field_errors[field] = "reference window too short";
            return std::nullopt;
        }
        double mu = stats::mean(reference);
        double sigma = stats::stddev_pop(reference);
        if (sigma == 0.0) {
            v.attn_degenerate = true;
            return 0.0;
        }
        return (*raw_now - mu) / sigma;
    };

    v.attn_btc = attention(&md::MarketWeekRecord::search_index_btc, "ATTN BTC");
    v.attn_crypto = attention(&md::MarketWeekRecord::search_index_crypto, "ATTN CRYPTO");

    auto growth = [&](std::optional<double> md::MarketWeekRecord::*member,
                      const char* field) -> std::optional<double> {
        auto now = value_of(week_index, member);
        auto prev = value_of(week_index - 1, member);
        if (!now || !prev) return std::nullopt;
        if (*prev == 0.0) {
            v.field_errors[field] = "zero prior count";
            return std::nullopt;
        }
        return *now / *prev - 1.0;
    };

    v.uni_addr = growth(&md::MarketWeekRecord::wallet_count, "UNI ADDR");
    v.act_addr = growth(&md::MarketWeekRecord::active_addresses, "ACT ADDR");
    v.txn = growth(&md::MarketWeekRecord::tx_count, "TXN");
    v.pay = growth(&md::MarketWeekRecord::payments_count, "PAY");

    return v;
}

GroundTruthTrend compute_ground_truth(const std::string& subject, long week_index,
                                      const std::map<long, double>& weekly_returns) {
    auto it = weekly_returns.find(week_index + 1);
    if (it == weekly_returns.end()) {
        throw Error(ErrorKind::Data, "no next-week return for " + subject + " at week " +
                                         std::to_string(week_index));
    }
    GroundTruthTrend gt;
    gt.subject = subject;
    gt.week_index = week_index;
    gt.label = it->second > 0.0 ? Trend::Rise : Trend::Fall;
    return gt;
}

namespace {
std::string field_text(const std::optional<double>& f) {
    return f ? num_to_string(*f) : "";
}
}  // namespace

void export_crypto_factors(const std::string& dir, long week_index,
                           const std::vector<CryptoFactorVector>& rows) {
    csv::Table t;
    t.header = {"asset_id"};
    for (const auto& [name, _] : crypto_field_order()) t.header.push_back(name);
    for (const auto& v : rows) {
        std::vector<std::string> row = {v.asset_id};
        for (const auto& [_, member] : crypto_field_order()) row.push_back(field_text(v.*member));
        t.rows.push_back(std::move(row));
    }
    char name[32];
    std::snprintf(name, sizeof(name), "crypto_%04ld.csv", week_index);
    csv::write_file(dir + "/" + name, t);
}

void export_market_factors(const std::string& dir, const std::vector<MarketFactorVector>& rows) {
    csv::Table t;
    t.header = {"week_index"};
    for (const auto& [name, _] : market_field_order()) t.header.push_back(name);
    for (const auto& v : rows) {
        std::vector<std::string> row = {std::to_string(v.week_index)};
        for (const auto& [_, member] : market_field_order()) row.push_back(field_text(v.*member));
        t.rows.push_back(std::move(row));
    }
    csv::write_file(dir + "/market.csv", t);
}

}  // namespace ca::factors
