#include "portfolio/portfolio.hpp"

#include <algorithm>

#include "common/error.hpp"

namespace ca::portfolio {

QuintilePortfolios form_quintiles(long week_index, const std::map<std::string, double>& probs) {
    QuintilePortfolios out;
    out.week_index = week_index;
    out.source = probs;

    const std::size_t n = probs.size();
    if (n < 5) {
        out.degenerate = true;
        auto& bucket = out.buckets[QuintileLabel::Medium];
        for (const auto& [asset, _] : probs) bucket.push_back(asset);
        return out;
    }

    std::vector<std::pair<std::string, double>> ranked(probs.begin(), probs.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });

    std::size_t bucket = 0;
    for (std::size_t rank = 1; rank <= n; ++rank) {
        while (bucket < 4 && rank > n * (bucket + 1) / 5) ++bucket;
        out.buckets[kQuintileOrder[bucket]].push_back(ranked[rank - 1].first);
    }
    return out;
}

std::vector<std::string> select_target(const QuintilePortfolios& quintiles) {
    if (quintiles.degenerate) {
        auto it = quintiles.buckets.find(QuintileLabel::Medium);
        return it == quintiles.buckets.end() ? std::vector<std::string>{} : it->second;
    }
    auto it = quintiles.buckets.find(QuintileLabel::VeryHigh);
    return it == quintiles.buckets.end() ? std::vector<std::string>{} : it->second;
}

AllocationDecision allocate(long week_index, Trend market_decision,
                            const std::vector<std::string>& selected) {
    AllocationDecision d;
    d.week_index = week_index;
    d.market_decision = market_decision;
    d.selected_assets = selected;
    if (selected.empty()) {
        d.all_cash = true;
        d.crypto_weight = 0.0;
        d.per_asset_weight = 0.0;
        return d;
    }
    d.crypto_weight = market_decision == Trend::Rise ? 1.0 : 0.5;
    d.per_asset_weight = d.crypto_weight / static_cast<double>(selected.size());
    return d;
}

PortfolioState step(const PortfolioState& state, const AllocationDecision& decision,
                    const std::map<std::string, double>& realized_returns) {
    PortfolioState next;
    next.week_index = decision.week_index;

    double weekly = 0.0;
    for (const auto& asset : decision.selected_assets) {
        auto it = realized_returns.find(asset);
        if (it == realized_returns.end()) {
            throw Error(ErrorKind::Data, "no realized return for held asset '" + asset +
                                             "' in week " + std::to_string(decision.week_index));
        }
        weekly += decision.per_asset_weight * it->second;
        next.holdings[asset] = decision.per_asset_weight;
    }

    next.weekly_return = weekly;  // cash leg contributes zero
    next.value = state.value * (1.0 + weekly);
    return next;
}

double hml_return(const QuintilePortfolios& quintiles,
                  const std::map<std::string, double>& realized_returns) {
    if (quintiles.degenerate) {
        throw Error(ErrorKind::Input, "HML undefined for a degenerate quintile partition");
    }
    auto bucket_mean = [&](QuintileLabel label) {
        auto it = quintiles.buckets.find(label);
        if (it == quintiles.buckets.end() || it->second.empty()) {
            throw Error(ErrorKind::Input, "HML requires non-empty extreme buckets");
        }
        double sum = 0.0;
        for (const auto& asset : it->second) {
            auto r = realized_returns.find(asset);
            if (r == realized_returns.end()) {
                throw Error(ErrorKind::Data, "no realized return for '" + asset + "'");
            }
            sum += r->second;
        }
        return sum / static_cast<double>(it->second.size());
    };
    return bucket_mean(QuintileLabel::VeryHigh) - bucket_mean(QuintileLabel::VeryLow);
}

}  // namespace ca::portfolio
