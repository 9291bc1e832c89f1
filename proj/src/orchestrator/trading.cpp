#include "orchestrator/trading.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cmath>
#include <set>

#include "common/error.hpp"
#include "common/fsio.hpp"

namespace ca::orch {

using nlohmann::json;

std::vector<OrderIntent> compute_order_intents(long week_index,
                                               const std::map<std::string, double>& current,
                                               const std::map<std::string, double>& target) {
    std::set<std::string> assets;
    for (const auto& [a, _] : current) assets.insert(a);
    for (const auto& [a, _] : target) assets.insert(a);

    std::vector<OrderIntent> intents;
    for (const auto& asset : assets) {
        double cur = current.count(asset) ? current.at(asset) : 0.0;
        double tgt = target.count(asset) ? target.at(asset) : 0.0;
        double delta = tgt - cur;
        if (std::fabs(delta) < 1e-12) continue;
        intents.push_back({week_index, asset, delta > 0 ? "buy" : "sell", delta});
    }
    return intents;
}

namespace {

json intent_json(const OrderIntent& intent) {
    return json{{"week", intent.week_index},
                {"asset", intent.asset},
                {"side", intent.side},
                {"weight_delta", intent.weight_delta},
                {"type", "market"}};
}

}  // namespace

long execute_paper_trades(const portfolio::AllocationDecision& decision,
                          const std::map<std::string, double>& current_holdings,
                          const TradingConfig& trading, const std::string& run_dir, bool dry_run) {
    if (trading.live) {
        throw Error(ErrorKind::Config,
                    "live order routing is not implemented; run with --dry-run or a paper endpoint");
    }

    std::map<std::string, double> target;
    for (const auto& asset : decision.selected_assets) {
        target[asset] = decision.per_asset_weight;
    }
    auto intents = compute_order_intents(decision.week_index, current_holdings, target);

    std::string body;
    for (const auto& intent : intents) body += intent_json(intent).dump() + "\n";
    fsio::write_text(run_dir + "/orders.jsonl", body);

    if (dry_run || trading.endpoint.empty()) {
        return static_cast<long>(intents.size());
    }

    httplib::Client client(trading.endpoint);
    client.set_connection_timeout(10);
    std::string pending;
    for (const auto& intent : intents) {
        auto res = client.Post("/orders", intent_json(intent).dump(), "application/json");
        if (!res || res->status != 200) {
            pending += intent_json(intent).dump() + "\n";
        }
    }
    if (!pending.empty()) {
        fsio::write_text(run_dir + "/orders_pending.jsonl", pending);
    }
    return static_cast<long>(intents.size());
}

}  // namespace ca::orch
