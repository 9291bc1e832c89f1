#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

#include "common/labels.hpp"
#include "evaluation/metrics.hpp"
#include "portfolio/portfolio.hpp"

namespace ca::eval {

// Everything evaluation needs from a finished backtest, in test-week order.
struct BacktestArtifacts {
    long first_test_week = 0;
    double rf_weekly = 0.0;

    std::vector<double> portfolio_returns;
    std::vector<double> market_returns;
    std::vector<Trend> market_decisions;

    std::vector<portfolio::QuintilePortfolios> weekly_quintiles;
    std::vector<std::map<std::string, double>> weekly_asset_returns;

    // predicted/truth pairs keyed by expert or team name
    std::map<std::string, std::vector<std::pair<Trend, Trend>>> classifications;
    std::map<std::string, std::vector<double>> disagreements;  // team -> observations
};

nlohmann::json build_report(const BacktestArtifacts& artifacts);

// report.json, report.md, cumulative.svg under run_dir.
void write_report_files(const std::string& run_dir, const nlohmann::json& report);

}  // namespace ca::eval
