#pragma once

#include <map>
#include <string>
#include <vector>

#include "orchestrator/config.hpp"
#include "portfolio/portfolio.hpp"

namespace ca::orch {

struct OrderIntent {
    long week_index = 0;
    std::string asset;
    std::string side;  // buy | sell
    double weight_delta = 0.0;
};

// Target-vs-current weight deltas, sorted by asset. No-ops (|delta| < 1e-12)
// are dropped.
std::vector<OrderIntent> compute_order_intents(long week_index,
                                               const std::map<std::string, double>& current,
                                               const std::map<std::string, double>& target);

// Emits market-order intents for the decision. Dry runs (or an empty
// endpoint) only write {run_dir}/orders.jsonl; with an endpoint configured,
// intents POST to {endpoint}/orders and failures are persisted to
// orders_pending.jsonl for retry. Live trading is refused outright.
long execute_paper_trades(const portfolio::AllocationDecision& decision,
                          const std::map<std::string, double>& current_holdings,
                          const TradingConfig& trading, const std::string& run_dir, bool dry_run);

}  // namespace ca::orch
