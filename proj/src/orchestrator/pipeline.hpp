#pragma once

#include <json.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "agents/provider.hpp"
#include "market_data/providers.hpp"
#include "orchestrator/config.hpp"
#include "orchestrator/manifest.hpp"

namespace ca::orch {

// Drives the full pipeline over one run directory. Stage order:
//   ingest -> factors -> charts -> [annotate -> export-finetune -> finetune]
//   -> backtest -> report -> trade
// Every stage is idempotent; backtest resumes from the prediction log after
// an interruption.
class Engine {
public:
    explicit Engine(RunConfig config);

    md::IngestSummary ingest();
    void build_factors();
    long render_charts();  // number of charts rendered
    long annotate();       // number of annotated training examples
    std::vector<std::string> export_finetune();
    std::map<std::string, std::string> finetune();  // role name -> model ref
    void backtest();
    nlohmann::json report();
    long trade(bool dry_run);  // number of order intents

    const RunConfig& config() const { return config_; }
    std::string run_dir() const { return config_.run_dir(); }

    // Test seams; defaults are built from the config (mock or http).
    void set_chat_provider(std::shared_ptr<agents::ChatProvider> provider);
    void set_finetune_provider(std::shared_ptr<agents::FinetuneProvider> provider);

private:
    agents::ChatProvider& chat_provider();
    agents::FinetuneProvider& finetune_provider();
    RunManifest open_manifest();

    RunConfig config_;
    std::shared_ptr<agents::ChatProvider> chat_;
    std::shared_ptr<agents::FinetuneProvider> finetune_;
};

}  // namespace ca::orch
