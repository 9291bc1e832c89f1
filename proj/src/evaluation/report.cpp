#include "evaluation/report.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "common/fsio.hpp"
#include "common/numfmt.hpp"
#include "common/stats.hpp"

namespace ca::eval {

using nlohmann::json;

namespace {

json performance_block(const std::vector<double>& returns, double rf_weekly) {
    json block;
    block["weeks"] = returns.size();
    if (returns.empty()) return block;
    block["cumulative"] = cumulative_return(returns);
    if (returns.size() < 2) {
        block["mean"] = returns.front();
        return block;
    }
    WeeklyStats ws = weekly_stats(returns);
    block["mean"] = ws.mean;
    block["std"] = ws.std_dev;
    auto sharpe = sharpe_ratio(ws.mean, ws.std_dev, rf_weekly);
    if (sharpe) block["sharpe"] = *sharpe;
    else block["sharpe_undefined"] = true;
    return block;
}

json quintile_table(const BacktestArtifacts& a) {
    // Weekly equal-weight bucket returns, then per-label stats and HML.
    std::map<QuintileLabel, std::vector<double>> bucket_series;
    std::vector<double> hml_series;
    for (size_t w = 0; w < a.weekly_quintiles.size(); ++w) {
        const auto& q = a.weekly_quintiles[w];
        const auto& rets = a.weekly_asset_returns[w];
        if (q.degenerate) continue;
        bool complete = true;
        std::map<QuintileLabel, double> means;
        for (const auto& [label, assets] : q.buckets) {
            double sum = 0.0;
            size_t cnt = 0;
            for (const auto& asset : assets) {
                auto it = rets.find(asset);
                if (it == rets.end()) continue;
                sum += it->second;
                ++cnt;
            }
            if (cnt == 0) {
                complete = false;
                break;
            }
            means[label] = sum / static_cast<double>(cnt);
        }
        if (!complete) continue;
        for (const auto& [label, mean] : means) bucket_series[label].push_back(mean);
        hml_series.push_back(means[QuintileLabel::VeryHigh] - means[QuintileLabel::VeryLow]);
    }

    json rows = json::array();
    auto emit = [&](const std::string& name, const std::vector<double>& series) {
        json row;
        row["portfolio"] = name;
        row["weeks"] = series.size();
        if (series.size() >= 2) {
            WeeklyStats ws = weekly_stats(series);
            row["mean"] = ws.mean;
            row["std"] = ws.std_dev;
            if (auto s = sharpe_ratio(ws.mean, ws.std_dev, 0.0, false)) row["sharpe_weekly"] = *s;
            if (auto s = sharpe_ratio(ws.mean, ws.std_dev, 0.0, true)) row["sharpe_annualized"] = *s;
        } else if (series.size() == 1) {
            row["mean"] = series.front();
        }
        rows.push_back(std::move(row));
    };
    for (QuintileLabel label : kQuintileOrder) emit(quintile_text(label), bucket_series[label]);
    emit("HML", hml_series);

    json out;
    out["rows"] = std::move(rows);
    if (auto test = hml_significance(hml_series)) {
        out["hml_t_stat"] = test->t_stat;
        out["hml_p_two_sided"] = test->p_two_sided;
        out["hml_stars"] = std::string(static_cast<size_t>(test->stars), '*');
    } else {
        out["hml_test_undefined"] = true;
    }
    return out;
}

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string cell(const json& block, const char* key) {
    if (!block.contains(key)) return "-";
    return fmt4(block[key].get<double>());
}

std::string report_markdown(const json& r) {
    std::string md = "# Backtest report\n\n## Classification\n\n";
    md += "| Predictor | Accuracy | MCC | N |\n|---|---|---|---|\n";
    for (auto it = r["classification"].begin(); it != r["classification"].end(); ++it) {
        const json& row = it.value();
        md += "| " + it.key() + " | " + cell(row, "accuracy") + " | " + cell(row, "mcc") + " | " +
              std::to_string(row["total"].get<long>()) + " |\n";
    }

    md += "\n## Market rise/fall split\n\n| | Return |\n|---|---|\n";
    const json& split = r["rise_fall_split"];
    md += "| Rise | " + cell(split, "mean_rise") + " |\n";
    md += "| Fall | " + cell(split, "mean_fall") + " |\n";
    md += "| Diff | " + cell(split, "diff") + " |\n";

    md += "\n## Portfolio performance\n\n| Period | Mean | Std | Sharpe | Cumulative |\n|---|---|---|---|---|\n";
    for (const char* period : {"all", "boom", "bust"}) {
        const json& block = r["portfolio"][period];
        md += std::string("| ") + period + " | " + cell(block, "mean") + " | " +
              cell(block, "std") + " | " + cell(block, "sharpe") + " | " +
              cell(block, "cumulative") + " |\n";
    }

    md += "\n## Quintile portfolios (sorted on ensemble rise probability)\n\n";
    md += "| Portfolio | Mean | Std | Sharpe (weekly) | Sharpe (annualized) |\n|---|---|---|---|---|\n";
    for (const auto& row : r["quintiles"]["rows"]) {
        md += "| " + row["portfolio"].get<std::string>() + " | " + cell(row, "mean") + " | " +
              cell(row, "std") + " | " + cell(row, "sharpe_weekly") + " | " +
              cell(row, "sharpe_annualized") + " |\n";
    }
    if (r["quintiles"].contains("hml_t_stat")) {
        md += "\nHML t-stat: " + fmt4(r["quintiles"]["hml_t_stat"].get<double>()) +
              r["quintiles"].value("hml_stars", "") + "\n";
    }

    md += "\n## Regimes\n\n| Kind | Start | End | Change |\n|---|---|---|---|\n";
    for (const auto& seg : r["regimes"]) {
        md += "| " + seg["kind"].get<std::string>() + " | " +
              std::to_string(seg["start_week"].get<long>()) + " | " +
              std::to_string(seg["end_week"].get<long>()) + " | " + cell(seg, "change") + " |\n";
    }
    return md;
}

std::string cumulative_svg(const std::vector<double>& returns) {
    const int w = 640, h = 320, pad = 24;
    std::vector<double> levels = {1.0};
    for (double r : returns) levels.push_back(levels.back() * (1.0 + r));
    double lo = *std::min_element(levels.begin(), levels.end());
    double hi = *std::max_element(levels.begin(), levels.end());
    if (hi <= lo) hi = lo + 1.0;

    std::string points;
    for (size_t i = 0; i < levels.size(); ++i) {
        double x = pad + (w - 2.0 * pad) * (levels.size() == 1 ? 0.0 : static_cast<double>(i) /
                                                                         (levels.size() - 1));
        double y = h - pad - (h - 2.0 * pad) * (levels[i] - lo) / (hi - lo);
        if (!points.empty()) points += " ";
        points += fmt4(x) + "," + fmt4(y);
    }
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
                      "\" height=\"" + std::to_string(h) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<polyline fill=\"none\" stroke=\"#2563eb\" stroke-width=\"2\" points=\"" + points +
           "\"/>\n</svg>\n";
    return svg;
}

}  // namespace

json build_report(const BacktestArtifacts& a) {
    json report;

    json classification = json::object();
    for (const auto& [name, pairs] : a.classifications) {
        ConfusionCounts counts;
        for (const auto& [pred, truth] : pairs) counts.add(pred, truth);
        json row = {{"tp", counts.tp}, {"tn", counts.tn}, {"fp", counts.fp}, {"fn", counts.fn},
                    {"total", counts.total()}};
        if (counts.total() > 0) {
            row["accuracy"] = accuracy(counts);
            row["mcc"] = mcc(counts);
        }
        classification[name] = std::move(row);
    }
    report["classification"] = std::move(classification);

    // Market regimes from compounded market returns (level 1.0 before the
    // first test week).
    std::vector<double> market_levels = {1.0};
    for (double r : a.market_returns) market_levels.push_back(market_levels.back() * (1.0 + r));
    auto segments = detect_regimes(market_levels);
    json regimes = json::array();
    // Level index i corresponds to the return of test week i-1; index 0 is
    // the pre-sample anchor.
    std::vector<RegimeKind> week_kind(a.portfolio_returns.size(), RegimeKind::Neither);
    for (const auto& seg : segments) {
        json s = {{"kind", regime_kind_name(seg.kind)},
                  {"start_week", a.first_test_week + seg.start_week - 1},
                  {"end_week", a.first_test_week + seg.end_week - 1},
                  {"change", seg.change}};
        regimes.push_back(std::move(s));
        for (long i = std::max<long>(seg.start_week, 1); i <= seg.end_week; ++i) {
            if (static_cast<size_t>(i - 1) < week_kind.size()) {
                week_kind[i - 1] = seg.kind;
            }
        }
    }
    report["regimes"] = std::move(regimes);

    std::vector<double> boom_returns, bust_returns;
    for (size_t i = 0; i < a.portfolio_returns.size(); ++i) {
        if (week_kind[i] == RegimeKind::Boom) boom_returns.push_back(a.portfolio_returns[i]);
        else if (week_kind[i] == RegimeKind::Bust) bust_returns.push_back(a.portfolio_returns[i]);
    }
    report["portfolio"] = {{"all", performance_block(a.portfolio_returns, a.rf_weekly)},
                           {"boom", performance_block(boom_returns, a.rf_weekly)},
                           {"bust", performance_block(bust_returns, a.rf_weekly)}};

    RiseFallSplit split = rise_fall_split(a.market_decisions, a.market_returns);
    json split_json;
    if (split.mean_rise) split_json["mean_rise"] = *split.mean_rise;
    if (split.mean_fall) split_json["mean_fall"] = *split.mean_fall;
    if (split.diff) split_json["diff"] = *split.diff;
    else split_json["diff_undefined"] = true;
    report["rise_fall_split"] = std::move(split_json);

    report["quintiles"] = quintile_table(a);

    json disagreement = json::object();
    for (const auto& [team, values] : a.disagreements) {
        if (!values.empty()) disagreement[team] = stats::mean(values);
    }
    report["mean_disagreement"] = std::move(disagreement);

    report["first_test_week"] = a.first_test_week;
    report["test_weeks"] = a.portfolio_returns.size();
    report["portfolio_returns"] = a.portfolio_returns;
    report["market_returns"] = a.market_returns;
    return report;
}

void write_report_files(const std::string& run_dir, const json& report) {
    fsio::write_text(run_dir + "/report.json", report.dump(2) + "\n");
    fsio::write_text(run_dir + "/report.md", report_markdown(report));

    std::vector<double> returns;
    if (report.contains("portfolio_returns")) {
        for (const auto& r : report["portfolio_returns"]) returns.push_back(r.get<double>());
    }
    fsio::write_text(run_dir + "/cumulative.svg", cumulative_svg(returns));
}

}  // namespace ca::eval
