#include "orchestrator/audit.hpp"

#include <json.hpp>

#include <filesystem>
#include <set>

#include "charts/chart.hpp"
#include "common/csv.hpp"
#include "common/fsio.hpp"
#include "market_data/cache.hpp"

namespace ca::orch {

using nlohmann::json;
namespace fs = std::filesystem;

AuditResult audit_no_lookahead(const std::string& run_dir, long train_end_week) {
    AuditResult result;
    for (const auto& line : fsio::read_lines(run_dir + "/prompts.jsonl")) {
        if (line.empty()) continue;
        json entry = json::parse(line);
        ++result.prompts_scanned;
        const long week = entry.at("week").get<long>();
        const std::string purpose = entry.value("purpose", "predict");
        const std::string who =
            entry.value("role", "?") + "/" + entry.value("subject", "?") + "/w" +
            std::to_string(week);

        for (const auto& p : entry.value("provenance", json::array())) {
            const std::string source = p.at("source").get<std::string>();
            const long max_week = p.at("max_week").get<long>();
            long limit;
            if (purpose == "predict") {
                limit = week - 1;  // only formation data strictly before the predicted week
            } else if (source == "ground_truth") {
                limit = week + 1;
            } else if (source == "reference_cutoffs") {
                limit = train_end_week;  // training-split statistic, fixed at split time
            } else {
                limit = week;
            }
            if (max_week > limit) {
                result.violations.push_back(who + " " + purpose + " references " + source +
                                            " up to week " + std::to_string(max_week) +
                                            " (limit " + std::to_string(limit) + ")");
            }
        }
    }
    return result;
}

AuditResult audit_referential_integrity(const std::string& run_dir, const std::string& data_dir) {
    AuditResult result;
    md::MarketDataStore store(data_dir);

    std::map<std::string, std::set<long>> cached;
    for (const auto& asset : store.list_assets()) {
        for (const auto& rec : store.load_asset_weeks(asset)) {
            cached[asset].insert(rec.week_index);
        }
    }
    auto present = [&](const std::string& asset, long week) {
        auto it = cached.find(asset);
        return it != cached.end() && it->second.count(week) > 0;
    };

    // Factor tables: factors/crypto_{week}.csv rows.
    std::string factors_dir = run_dir + "/factors";
    if (fs::exists(factors_dir)) {
        for (const auto& path : fsio::list_files(factors_dir)) {
            std::string name = fs::path(path).filename().string();
            if (name.rfind("crypto_", 0) != 0) continue;
            long week = std::strtol(name.substr(7).c_str(), nullptr, 10);
            csv::Table t = csv::read_file(path);
            for (const auto& row : t.rows) {
                ++result.prompts_scanned;
                if (!present(row[0], week)) {
                    result.violations.push_back("factor row " + row[0] + "/w" +
                                                std::to_string(week) + " missing from cache");
                }
            }
        }
    }

    // Chart index keys "asset/week".
    std::string index_path = run_dir + "/charts/index.json";
    if (fs::exists(index_path)) {
        for (const auto& [key, ref] : charts::read_chart_index(index_path)) {
            ++result.prompts_scanned;
            auto slash = key.find('/');
            std::string asset = key.substr(0, slash);
            long week = std::strtol(key.substr(slash + 1).c_str(), nullptr, 10);
            if (!present(asset, week)) {
                result.violations.push_back("chart " + key + " missing from cache");
            }
        }
    }
    return result;
}

}  // namespace ca::orch
