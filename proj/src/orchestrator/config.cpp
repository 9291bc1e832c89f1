#include "orchestrator/config.hpp"

#include <cstdlib>

#include "common/error.hpp"
#include "common/fsio.hpp"
#include "common/hash.hpp"

namespace ca::orch {

using nlohmann::json;
using std::chrono::days;

namespace {

std::string env_or_empty(const std::string& name) {
    if (name.empty()) return "";
    const char* v = std::getenv(name.c_str());
    return v ? v : "";
}

md::ProviderEndpoint endpoint_from_json(const json& j) {
    md::ProviderEndpoint ep;
    ep.base_url = j.value("base_url", "");
    ep.api_key = env_or_empty(j.value("api_key_env", ""));
    ep.fixture_dir = j.value("fixture_dir", "");
    ep.timeout_seconds = j.value("timeout_seconds", 30);
    ep.max_retries = j.value("max_retries", 2);
    ep.backoff_ms = j.value("backoff_ms", 250);
    return ep;
}

void finalize(RunConfig& config) {
    if (!(config.start_date < config.end_date)) {
        throw Error(ErrorKind::Config, "start_date must precede end_date");
    }
    if (!(config.start_date < config.train_end_date) ||
        !(config.train_end_date < config.end_date)) {
        throw Error(ErrorKind::Config, "train_end_date must fall inside [start_date, end_date)");
    }
    if (config.assets.empty()) {
        throw Error(ErrorKind::Config, "config lists no assets");
    }

    // Hash over the archived config; the run id keys every artifact path.
    config.config_hash = sha256_hex(config.resolved.dump());
    config.run_id = "run-" + config.config_hash.substr(0, 12);
}

}  // namespace

Date RunConfig::epoch_week_end() const {
    Date e = next_week_end(start_date, week_boundary);
    if (e - days{6} < start_date) e += days{7};
    return e;
}

long RunConfig::week_of(Date d) const {
    return weeks_between(epoch_week_end(), next_week_end(d, week_boundary));
}

long RunConfig::train_end_week() const { return week_of(train_end_date); }

long RunConfig::first_test_week() const { return train_end_week() + 1; }

std::optional<long> RunConfig::last_test_week() const {
    if (!test_end_date) return std::nullopt;
    return week_of(*test_end_date);
}

RunConfig config_from_json(const json& j) {
    RunConfig config;
    config.data_dir = j.value("data_dir", config.data_dir);
    config.runs_dir = j.value("runs_dir", config.runs_dir);
    config.templates_dir = j.value("templates_dir", config.templates_dir);
    config.literature_dir = j.value("literature_dir", config.literature_dir);

    config.assets = j.value("assets", std::vector<std::string>{});
    config.market_symbol = j.value("market_symbol", config.market_symbol);
    config.start_date = parse_date(j.at("start_date").get<std::string>());
    config.end_date = parse_date(j.at("end_date").get<std::string>());
    config.train_end_date = parse_date(j.at("train_end_date").get<std::string>());
    if (j.contains("test_end_date")) {
        config.test_end_date = parse_date(j.at("test_end_date").get<std::string>());
    }

    config.universe_size = j.value("universe_size", 30);
    config.week_boundary = parse_weekday(j.value("week_boundary", "sunday"));
    config.rf_weekly = j.value("rf_weekly", 0.0);
    config.seed = j.value("seed", 42u);
    config.exclude_stablecoins = j.value("exclude_stablecoins", false);
    config.stablecoins = j.value("stablecoins", std::vector<std::string>{});
    config.news_cap = j.value("news_cap", 50);
    config.judge_enabled = j.value("judge_enabled", false);
    config.exclude_fallback_weeks = j.value("exclude_fallback_weeks", false);

    if (j.contains("ablation")) {
        const json& ab = j.at("ablation");
        config.ablation.disable_interteam = ab.value("disable_interteam", false);
        config.ablation.disabled_agents = ab.value("disabled_agents", std::vector<std::string>{});
    }

    if (j.contains("llm")) {
        const json& l = j.at("llm");
        config.llm.mode = l.value("mode", "mock");
        config.llm.mock_script = l.value("mock_script", "");
        config.llm.endpoint = l.value("endpoint", "");
        config.llm.api_key_env = l.value("api_key_env", "CA_API_KEY");
        config.llm.model = l.value("model", "gpt-4o");
        config.llm.finetune_base_model = l.value("finetune_base_model", "gpt-4o-2024-08-06");
        config.llm.parallelism = l.value("parallelism", 4);
        config.llm.timeout_seconds = l.value("timeout_seconds", 60);
        config.llm.max_retries = l.value("max_retries", 2);
    }
    if (config.llm.mode != "mock" && config.llm.mode != "http") {
        throw Error(ErrorKind::Config, "llm.mode must be 'mock' or 'http'");
    }

    const json providers = j.value("data_providers", json::object());
    config.offline = providers.value("offline", false);
    if (env_or_empty("CA_OFFLINE") == "1") config.offline = true;
    config.prices = endpoint_from_json(providers.value("prices", json::object()));
    config.onchain = endpoint_from_json(providers.value("onchain", json::object()));
    config.search = endpoint_from_json(providers.value("search", json::object()));
    config.news = endpoint_from_json(providers.value("news", json::object()));

    if (j.contains("trading")) {
        config.trading.endpoint = j.at("trading").value("endpoint", "");
        config.trading.live = j.at("trading").value("live", false);
    }

    config.resolved = j;
    config.resolved["offline_effective"] = config.offline;
    finalize(config);
    return config;
}

RunConfig load_config(const std::string& path) {
    json j = json::parse(fsio::read_text(path), nullptr, false);
    if (j.is_discarded()) {
        throw Error(ErrorKind::Config, "config file is not valid JSON: " + path);
    }
    try {
        return config_from_json(j);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, std::string("bad config: ") + e.what());
    }
}

void apply_override(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "offline") {
        config.offline = value == "1" || value == "true";
    } else if (key == "no-interteam") {
        config.ablation.disable_interteam = value == "1" || value == "true";
    } else if (key == "judge") {
        config.judge_enabled = value == "1" || value == "true";
    } else if (key == "mock-script") {
        config.llm.mock_script = value;
    } else if (key == "test-end-date") {
        config.test_end_date = parse_date(value);
    } else {
        throw Error(ErrorKind::Config, "unknown override '" + key + "'");
    }
    config.resolved["overrides"][key] = value;
    finalize(config);
}

}  // namespace ca::orch
