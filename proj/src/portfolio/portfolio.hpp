#pragma once

#include <map>
#include <string>
#include <vector>

#include "common/labels.hpp"

namespace ca::portfolio {

struct QuintilePortfolios {
    long week_index = 0;
    std::map<QuintileLabel, std::vector<std::string>> buckets;
    std::map<std::string, double> source;  // probability map the sort used
    bool degenerate = false;               // < 5 assets: single Medium bucket
};

// Ascending sort by probability (ties by asset id); bucket i covers 1-based
// ranks (floor(N(i-1)/5), floor(N i/5)], bucket 1 anchored at rank 1.
QuintilePortfolios form_quintiles(long week_index, const std::map<std::string, double>& probs);

// The Very High bucket (or the single degenerate bucket).
std::vector<std::string> select_target(const QuintilePortfolios& quintiles);

struct AllocationDecision {
    long week_index = 0;
    Trend market_decision = Trend::Fall;
    double crypto_weight = 0.0;  // 1.0 on Rise, 0.5 on Fall
    std::vector<std::string> selected_assets;
    double per_asset_weight = 0.0;
    bool all_cash = false;  // degenerate empty selection
};

// Full crypto on a Rise call, half cash otherwise; equal weights over the
// selected set. Cash earns zero.
AllocationDecision allocate(long week_index, Trend market_decision,
                            const std::vector<std::string>& selected);

struct PortfolioState {
    long week_index = 0;
    double value = 1.0;  // index level, starts at 1.0
    double weekly_return = 0.0;
    std::map<std::string, double> holdings;  // asset -> weight
};

// Applies one week: weekly_return = sum(weight * realized return), value
// compounds, holdings reset to the decision's weights. Returns must cover
// every held asset; no transaction costs.
PortfolioState step(const PortfolioState& state, const AllocationDecision& decision,
                    const std::map<std::string, double>& realized_returns);

// Equal-weight mean return of Very High minus Very Low. Degenerate quintiles
// -> Error(Input).
double hml_return(const QuintilePortfolios& quintiles,
                  const std::map<std::string, double>& realized_returns);

}  // namespace ca::portfolio
