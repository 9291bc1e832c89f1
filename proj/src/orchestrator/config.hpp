#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "agents/types.hpp"
#include "common/dates.hpp"
#include "market_data/providers.hpp"

namespace ca::orch {

struct AblationConfig {
    bool disable_interteam = false;
    std::vector<std::string> disabled_agents;  // by role name

    bool agent_disabled(const std::string& role) const {
        for (const auto& r : disabled_agents)
            if (r == role) return true;
        return false;
    }
};

struct LlmConfig {
    std::string mode = "mock";  // mock | http
    std::string mock_script;    // JSONL fixture for mock mode
    std::string endpoint;
    std::string api_key_env = "CA_API_KEY";
    std::string model = "gpt-4o";
    std::string finetune_base_model = "gpt-4o-2024-08-06";
    int parallelism = 4;
    int timeout_seconds = 60;
    int max_retries = 2;
};

struct TradingConfig {
    std::string endpoint;  // paper-trading endpoint; empty -> dry-run file only
    bool live = false;     // refused; live order routing is out of scope
};

struct RunConfig {
    std::string data_dir = "data";
    std::string runs_dir = "runs";
    std::string templates_dir = "templates";
    std::string literature_dir = "literature";

    std::vector<std::string> assets;
    std::string market_symbol = "market";
    Date start_date{};
    Date end_date{};
    Date train_end_date{};  // last calendar day of the training split
    std::optional<Date> test_end_date;

    std::size_t universe_size = 30;
    Weekday week_boundary = std::chrono::Sunday;
    double rf_weekly = 0.0;
    unsigned seed = 42;
    bool exclude_stablecoins = false;
    std::vector<std::string> stablecoins;
    std::size_t news_cap = 50;
    bool judge_enabled = false;
    bool exclude_fallback_weeks = false;

    AblationConfig ablation;
    LlmConfig llm;
    bool offline = false;
    md::ProviderEndpoint prices, onchain, search, news;
    TradingConfig trading;

    // Derived week grid.
    Date epoch_week_end() const;
    long week_of(Date d) const;          // week index containing d
    long train_end_week() const;         // last formation week of the split
    long first_test_week() const;        // first predicted week
    std::optional<long> last_test_week() const;

    std::string run_id;      // derived from the resolved config hash
    std::string config_hash;
    nlohmann::json resolved;  // archived copy (secrets resolved by env name only)

    std::string run_dir() const { return runs_dir + "/" + run_id; }
};

// Parses the JSON config, applies environment overrides (CA_OFFLINE, api key
// env vars), computes the config hash and run id. Throws Error(Config).
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const nlohmann::json& j);

// Value overrides from the CLI (key=value); recomputes hash/run id.
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

}  // namespace ca::orch
