#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "common/labels.hpp"
#include "market_data/types.hpp"

namespace ca::factors {

// Ten crypto-specific factors, in table order. Fields are missing (nullopt)
// when history is insufficient; degenerate computations (log of a
// non-positive value, zero-variance std) land in field_errors and also read
// as missing.
struct CryptoFactorVector {
    std::string asset_id;
    long week_index = 0;
    std::optional<double> mcap;        // log last-day market cap
    std::optional<double> prc;         // log last-day close
    std::optional<double> maxdprc;     // max daily close of the formation week
    std::optional<double> mom_1_0;
    std::optional<double> mom_2_0;
    std::optional<double> mom_3_0;
    std::optional<double> mom_4_0;
    std::optional<double> mom_4_1;
    std::optional<double> prcvol;      // log mean daily volume*price
    std::optional<double> stdprcvol;   // log std of daily volume*price
    std::map<std::string, std::string> field_errors;
};

struct MarketFactorVector {
    long week_index = 0;
    std::optional<double> attn_btc;
    std::optional<double> attn_crypto;
    std::optional<double> uni_addr;    // wallet growth
    std::optional<double> act_addr;    // active address growth
    std::optional<double> txn;         // transaction growth
    std::optional<double> pay;         // payments growth
    bool attn_degenerate = false;      // zero-variance standardization window
    std::map<std::string, std::string> field_errors;
};

// Display-name/field pairs in canonical table order.
using CryptoField = std::pair<const char*, std::optional<double> CryptoFactorVector::*>;
using MarketField = std::pair<const char*, std::optional<double> MarketFactorVector::*>;
const std::vector<CryptoField>& crypto_field_order();
const std::vector<MarketField>& market_field_order();

struct GroundTruthTrend {
    std::string subject;  // asset id or "MARKET"
    long week_index = 0;  // formation week; label reflects week_index + 1
    Trend label = Trend::Fall;
};

// Factors for one asset at the given formation week. `history` is that
// asset's weekly records in ascending week order.
CryptoFactorVector compute_crypto_factors(const std::vector<md::WeeklyAssetRecord>& history,
                                          long week_index);

// Market factors at the formation week. Attention z-scores are standardized
// over [reference_begin, reference_end] (inclusive week indexes).
MarketFactorVector compute_market_factors(const std::vector<md::MarketWeekRecord>& history,
                                          long week_index, long reference_begin,
                                          long reference_end);

// Rise iff the return at week_index+1 is strictly positive.
GroundTruthTrend compute_ground_truth(const std::string& subject, long week_index,
                                      const std::map<long, double>& weekly_returns);

// Canonical factor table export.
void export_crypto_factors(const std::string& dir, long week_index,
                           const std::vector<CryptoFactorVector>& rows);
void export_market_factors(const std::string& dir, const std::vector<MarketFactorVector>& rows);

}  // namespace ca::factors
