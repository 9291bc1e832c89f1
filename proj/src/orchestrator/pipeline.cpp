#include "orchestrator/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>

#include "agents/agent.hpp"
#include "agents/finetune_job.hpp"
#include "agents/http_provider.hpp"
#include "agents/mock_provider.hpp"
#include "charts/chart.hpp"
#include "collab/collab.hpp"
#include "common/csv.hpp"
#include "common/error.hpp"
#include "common/fsio.hpp"
#include "common/hash.hpp"
#include "common/numfmt.hpp"
#include "common/parallel.hpp"
#include "evaluation/judge.hpp"
#include "evaluation/report.hpp"
#include "factors/quintiles.hpp"
#include "orchestrator/trading.hpp"
#include "portfolio/portfolio.hpp"
#include "prompts/prompt_forge.hpp"

namespace ca::orch {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string week_key(long week) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04ld", week);
    return buf;
}

// ---------------------------------------------------------------------------
// Cached data assembled for factor/prompt construction.

struct DataContext {
    std::map<std::string, std::vector<md::WeeklyAssetRecord>> asset_weeks;
    std::map<std::string, std::map<long, double>> asset_returns;  // week -> return
    std::map<std::string, std::map<long, std::optional<double>>> asset_mcaps;
    std::vector<md::MarketWeekRecord> market_weeks;
    std::map<long, double> market_returns;
    std::map<long, std::vector<md::NewsHeadline>> news;
    long last_week = -1;
};

DataContext load_data(const RunConfig& config) {
    DataContext data;
    md::MarketDataStore store(config.data_dir);
    for (const auto& asset : store.list_assets()) {
        if (asset == config.market_symbol) continue;
        auto weeks = store.load_asset_weeks(asset);
        for (const auto& rec : weeks) {
            if (rec.weekly_return) data.asset_returns[asset][rec.week_index] = *rec.weekly_return;
            data.asset_mcaps[asset][rec.week_index] = rec.market_cap_last_day;
        }
        data.asset_weeks[asset] = std::move(weeks);
    }
    data.market_weeks = store.load_market_weeks(config.market_symbol);
    for (const auto& rec : data.market_weeks) {
        if (rec.market_return) data.market_returns[rec.week_index] = *rec.market_return;
        data.last_week = std::max(data.last_week, rec.week_index);
        if (!rec.news.empty()) data.news[rec.week_index] = rec.news;
    }
    return data;
}

std::map<std::string, double> universe_marketcaps(const RunConfig& config, const DataContext& data,
                                                  long week) {
    std::map<std::string, double> caps;
    for (const auto& [asset, by_week] : data.asset_mcaps) {
        if (config.exclude_stablecoins &&
            std::find(config.stablecoins.begin(), config.stablecoins.end(), asset) !=
                config.stablecoins.end()) {
            continue;
        }
        auto it = by_week.find(week);
        if (it != by_week.end() && it->second) caps[asset] = *it->second;
    }
    return caps;
}

std::vector<std::string> universe_at(const RunConfig& config, const DataContext& data, long week) {
    auto caps = universe_marketcaps(config, data, week);
    if (caps.empty()) return {};
    return md::select_universe(week, caps, config.universe_size).members;
}

// ---------------------------------------------------------------------------
// Quintile labels feeding the factor prompts.

std::map<std::string, std::map<std::string, QuintileLabel>> cross_sectional_labels(
    const std::map<std::string, factors::CryptoFactorVector>& vectors) {
    std::map<std::string, std::map<std::string, QuintileLabel>> by_asset;
    for (const auto& [field, member] : factors::crypto_field_order()) {
        std::map<std::string, double> values;
        for (const auto& [asset, vec] : vectors) {
            if (vec.*member) values[asset] = *(vec.*member);
        }
        if (values.empty()) continue;
        auto cat = factors::quintile_categorize_cross_sectional(values);
        for (const auto& [asset, label] : cat.labels) by_asset[asset][field] = label;
    }
    return by_asset;
}

std::map<std::string, QuintileLabel> fixed_reference_labels(
    const factors::MarketFactorVector& current,
    const std::vector<factors::MarketFactorVector>& reference) {
    std::map<std::string, QuintileLabel> labels;
    for (const auto& [field, member] : factors::market_field_order()) {
        if (!(current.*member)) continue;
        std::vector<double> ref_values;
        for (const auto& vec : reference) {
            if (vec.*member) ref_values.push_back(*(vec.*member));
        }
        labels[field] = ref_values.size() >= 5
                            ? factors::quintile_categorize_fixed_reference(*(current.*member),
                                                                           ref_values)
                            : QuintileLabel::Medium;
    }
    return labels;
}

// ---------------------------------------------------------------------------
// Prompt log: append-only JSONL, deduped like the prediction log.

class PromptLog {
public:
    explicit PromptLog(std::string path) : path_(std::move(path)) {
        for (const auto& line : fsio::read_lines(path_)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            keys_.insert(key(j.value("role", ""), j.value("subject", ""), j.value("week", 0L),
                             j.value("purpose", "predict")));
        }
    }

    void append(const agents::CompletionRequest& request,
                const std::vector<prompts::Provenance>& provenance) {
        std::string k = key(role_name(request.role), request.subject, request.week_index,
                            request.purpose);
        if (keys_.count(k)) return;
        json entry = {{"role", role_name(request.role)},
                      {"subject", request.subject},
                      {"week", request.week_index},
                      {"purpose", request.purpose},
                      {"system", request.system},
                      {"user", request.user},
                      {"provenance", provenance}};
        if (request.image_ref) entry["image_ref"] = *request.image_ref;
        fsio::append_line(path_, entry.dump());
        keys_.insert(k);
    }

private:
    static std::string key(const std::string& role, const std::string& subject, long week,
                           const std::string& purpose) {
        return role + "|" + subject + "|" + std::to_string(week) + "|" + purpose;
    }

    std::string path_;
    std::set<std::string> keys_;
};

std::vector<prompts::Provenance> crypto_factor_provenance(const std::string& asset, long week) {
    return {{"crypto_factors", asset, week - 4, week}};
}

std::vector<prompts::Provenance> market_factor_provenance(long week, long train_end_week) {
    return {{"market_factors", kMarketSubject, week - 4, week},
            {"reference_cutoffs", kMarketSubject, 0, train_end_week}};
}

// ---------------------------------------------------------------------------
// Training-example persistence (annotations.jsonl).

json example_to_json(const prompts::TrainingExample& e) {
    return json{{"subject", e.subject},
                {"week", e.week_index},
                {"modality", prompts::modality_name(e.modality)},
                {"info_text", e.info_text},
                {"image_ref", e.image_ref},
                {"ground_truth", trend_text(e.ground_truth)},
                {"explanation", e.explanation},
                {"provenance", e.provenance}};
}

prompts::TrainingExample example_from_json(const json& j) {
    prompts::TrainingExample e;
    e.subject = j.at("subject").get<std::string>();
    e.week_index = j.at("week").get<long>();
    std::string modality = j.at("modality").get<std::string>();
    e.modality = modality == "chart"   ? prompts::Modality::Chart
                 : modality == "news"  ? prompts::Modality::News
                                       : prompts::Modality::Factors;
    e.info_text = j.at("info_text").get<std::string>();
    e.image_ref = j.at("image_ref").get<std::string>();
    e.ground_truth = trend_from_text(j.at("ground_truth").get<std::string>());
    e.explanation = j.at("explanation").get<std::string>();
    for (const auto& p : j.value("provenance", json::array())) {
        e.provenance.push_back(p.get<prompts::Provenance>());
    }
    return e;
}

}  // namespace

// ---------------------------------------------------------------------------

Engine::Engine(RunConfig config) : config_(std::move(config)) {}

void Engine::set_chat_provider(std::shared_ptr<agents::ChatProvider> provider) {
    chat_ = std::move(provider);
}

void Engine::set_finetune_provider(std::shared_ptr<agents::FinetuneProvider> provider) {
    finetune_ = std::move(provider);
}

agents::ChatProvider& Engine::chat_provider() {
    if (!chat_) {
        if (config_.llm.mode == "mock") {
            if (config_.llm.mock_script.empty()) {
                throw Error(ErrorKind::Config, "mock llm mode needs llm.mock_script");
            }
            chat_ = std::make_shared<agents::MockChatProvider>(config_.llm.mock_script);
        } else {
            agents::ProviderConfig pc;
            pc.endpoint = config_.llm.endpoint;
            pc.api_key = std::getenv(config_.llm.api_key_env.c_str())
                             ? std::getenv(config_.llm.api_key_env.c_str())
                             : "";
            pc.timeout_seconds = config_.llm.timeout_seconds;
            pc.max_retries = config_.llm.max_retries;
            pc.parallelism = config_.llm.parallelism;
            chat_ = std::make_shared<agents::HttpChatProvider>(pc, config_.llm.model);
        }
    }
    return *chat_;
}

agents::FinetuneProvider& Engine::finetune_provider() {
    if (!finetune_) {
        if (config_.llm.mode == "mock") {
            auto mock = std::make_shared<agents::MockFinetuneProvider>();
            mock->script_job("ftjob-mock", {{"running", "", ""},
                                            {"succeeded", "ft:mock:" + config_.llm.model, ""}});
            finetune_ = mock;
        } else {
            agents::ProviderConfig pc;
            pc.endpoint = config_.llm.endpoint;
            pc.api_key = std::getenv(config_.llm.api_key_env.c_str())
                             ? std::getenv(config_.llm.api_key_env.c_str())
                             : "";
            finetune_ = std::make_shared<agents::HttpFinetuneProvider>(pc);
        }
    }
    return *finetune_;
}

RunManifest Engine::open_manifest() {
    std::string manifest_path = run_dir() + "/manifest.json";
    if (fs::exists(manifest_path)) {
        RunManifest m = RunManifest::load(run_dir());
        if (m.run_id() != config_.run_id) {
            throw Error(ErrorKind::State, "run directory " + run_dir() + " belongs to another run");
        }
        return m;
    }
    RunManifest m(run_dir(), config_.run_id, config_.config_hash);
    m.archive_config(config_.resolved);
    return m;
}

md::IngestSummary Engine::ingest() {
    RunManifest manifest = open_manifest();
    md::IngestPlan plan;
    plan.assets = config_.assets;
    plan.market_symbol = config_.market_symbol;
    plan.from = config_.start_date;
    plan.to = config_.end_date;
    plan.week_boundary = config_.week_boundary;
    plan.parallelism = config_.llm.parallelism;
    plan.offline = config_.offline;
    plan.prices = config_.prices;
    plan.onchain = config_.onchain;
    plan.search = config_.search;
    plan.news = config_.news;

    md::MarketDataStore store(config_.data_dir);
    auto summary = md::fetch_and_cache(plan, store);

    if (fs::exists(config_.data_dir + "/manifest.json")) {
        manifest.set_input_hash("data_manifest",
                                sha256_hex(fsio::read_text(config_.data_dir + "/manifest.json")));
    }
    manifest.set_stage("ingest", "done");
    manifest.save();
    return summary;
}

void Engine::build_factors() {
    RunManifest manifest = open_manifest();
    DataContext data = load_data(config_);
    const std::string out_dir = run_dir() + "/factors";

    std::vector<factors::MarketFactorVector> market_rows;
    for (long w = 4; w <= data.last_week; ++w) {
        auto vec = factors::compute_market_factors(data.market_weeks, w, 0,
                                                   config_.train_end_week());
        market_rows.push_back(std::move(vec));
    }
    factors::export_market_factors(out_dir, market_rows);

    for (long w = 4; w <= data.last_week; ++w) {
        auto members = universe_at(config_, data, w);
        if (members.empty()) continue;
        std::vector<factors::CryptoFactorVector> rows;
        for (const auto& asset : members) {
            rows.push_back(factors::compute_crypto_factors(data.asset_weeks.at(asset), w));
        }
        factors::export_crypto_factors(out_dir, w, rows);
    }

    manifest.set_stage("factors", "done");
    manifest.save();
}

long Engine::render_charts() {
    RunManifest manifest = open_manifest();
    DataContext data = load_data(config_);
    const std::string charts_dir = run_dir() + "/charts";

    std::map<std::string, charts::ChartRef> index;
    long rendered = 0;
    for (long w = 4; w <= data.last_week; ++w) {
        for (const auto& asset : universe_at(config_, data, w)) {
            // Last 30 daily candles ending at the formation week's close, with
            // earlier history feeding the moving-average warm-up.
            std::vector<md::Candle> all_days;
            for (const auto& rec : data.asset_weeks.at(asset)) {
                if (rec.week_index > w) break;
                all_days.insert(all_days.end(), rec.daily_candles.begin(),
                                rec.daily_candles.end());
            }
            if (all_days.size() < 30) continue;

            charts::ChartSpec spec;
            spec.asset_id = asset;
            spec.end_date = all_days.back().date;
            std::vector<md::Candle> window(all_days.end() - 30, all_days.end());

            size_t ma_history = std::min(all_days.size(), static_cast<size_t>(59));
            std::vector<double> closes;
            for (size_t i = all_days.size() - ma_history; i < all_days.size(); ++i) {
                closes.push_back(all_days[i].close);
            }
            auto ma_full = charts::compute_moving_average(closes, 30);
            std::vector<double> ma(ma_full.end() - 30, ma_full.end());

            auto rendered_chart = charts::render_chart(spec, window, &ma);
            std::string rel = asset + "/" + week_key(w) + ".png";
            fsio::write_bytes(charts_dir + "/" + rel, rendered_chart.png);
            index[asset + "/" + std::to_string(w)] = {"charts/" + rel, rendered_chart.hash};
            ++rendered;
        }
    }
    charts::write_chart_index(charts_dir + "/index.json", index);

    manifest.set_stage("charts", "done");
    manifest.save();
    return rendered;
}

namespace {

// Shared between annotate and backtest: everything needed to prompt about one
// formation week.
struct FormationInputs {
    factors::MarketFactorVector market_vec;
    std::map<std::string, QuintileLabel> market_labels;
    std::string market_text;
    std::string news_text;
    std::vector<std::string> universe;
    std::map<std::string, factors::CryptoFactorVector> crypto_vecs;
    std::map<std::string, std::map<std::string, QuintileLabel>> crypto_labels;
};

FormationInputs build_formation_inputs(const RunConfig& config, const DataContext& data, long f,
                                       const std::vector<factors::MarketFactorVector>& reference) {
    FormationInputs out;
    out.market_vec = factors::compute_market_factors(data.market_weeks, f, 0,
                                                     config.train_end_week());
    out.market_labels = fixed_reference_labels(out.market_vec, reference);
    out.market_text = prompts::factors_to_text(out.market_vec, out.market_labels);

    auto news_it = data.news.find(f);
    out.news_text = news_it == data.news.end()
                        ? ""
                        : prompts::news_to_text(news_it->second, config.news_cap);

    out.universe = universe_at(config, data, f);
    for (const auto& asset : out.universe) {
        out.crypto_vecs[asset] = factors::compute_crypto_factors(data.asset_weeks.at(asset), f);
    }
    out.crypto_labels = cross_sectional_labels(out.crypto_vecs);
    return out;
}

std::vector<factors::MarketFactorVector> reference_market_vectors(const RunConfig& config,
                                                                  const DataContext& data) {
    std::vector<factors::MarketFactorVector> reference;
    for (long w = 4; w <= config.train_end_week() && w <= data.last_week; ++w) {
        reference.push_back(
            factors::compute_market_factors(data.market_weeks, w, 0, config.train_end_week()));
    }
    return reference;
}

}  // namespace

long Engine::annotate() {
    RunManifest manifest = open_manifest();
    DataContext data = load_data(config_);
    prompts::TemplateStore store(config_.templates_dir);
    PromptLog prompt_log(run_dir() + "/prompts.jsonl");
    auto reference = reference_market_vectors(config_, data);

    std::map<RoleId, std::string> literature;
    for (RoleId expert : {RoleId::CryptoFactor, RoleId::Technical, RoleId::MarketFactor,
                          RoleId::News}) {
        literature[expert] = prompts::load_literature(config_.literature_dir, expert);
    }

    auto chart_index_path = run_dir() + "/charts/index.json";
    std::map<std::string, charts::ChartRef> chart_index;
    if (fs::exists(chart_index_path)) chart_index = charts::read_chart_index(chart_index_path);

    std::vector<prompts::TrainingExample> examples;
    long skipped = 0;

    const long first = 4;
    const long last = std::min(config_.train_end_week() - 1, data.last_week - 1);
    for (long t = first; t <= last; ++t) {
        // Market examples need next week's market return as ground truth.
        auto truth_it = data.market_returns.find(t + 1);
        if (truth_it != data.market_returns.end()) {
            Trend truth = factors::compute_ground_truth(kMarketSubject, t, data.market_returns).label;
            FormationInputs inputs = build_formation_inputs(config_, data, t, reference);

            prompts::TrainingExample mf;
            mf.subject = kMarketSubject;
            mf.week_index = t;
            mf.modality = prompts::Modality::Factors;
            mf.info_text = inputs.market_text;
            mf.ground_truth = truth;
            mf.provenance = market_factor_provenance(t, config_.train_end_week());
            examples.push_back(mf);

            if (!inputs.news_text.empty()) {
                prompts::TrainingExample news;
                news.subject = kMarketSubject;
                news.week_index = t;
                news.modality = prompts::Modality::News;
                news.info_text = inputs.news_text;
                news.ground_truth = truth;
                news.provenance = {{"news", kMarketSubject, t, t}};
                examples.push_back(news);
            }

            for (const auto& asset : inputs.universe) {
                auto asset_truth = data.asset_returns.find(asset);
                if (asset_truth == data.asset_returns.end() ||
                    !asset_truth->second.count(t + 1)) {
                    ++skipped;
                    continue;
                }
                Trend at = factors::compute_ground_truth(asset, t, asset_truth->second).label;

                prompts::TrainingExample cf;
                cf.subject = asset;
                cf.week_index = t;
                cf.modality = prompts::Modality::Factors;
                cf.info_text =
                    prompts::factors_to_text(inputs.crypto_vecs.at(asset),
                                             inputs.crypto_labels.count(asset)
                                                 ? inputs.crypto_labels.at(asset)
                                                 : std::map<std::string, QuintileLabel>{});
                cf.ground_truth = at;
                cf.provenance = crypto_factor_provenance(asset, t);
                examples.push_back(cf);

                auto chart = chart_index.find(asset + "/" + std::to_string(t));
                if (chart != chart_index.end()) {
                    prompts::TrainingExample ch;
                    ch.subject = asset;
                    ch.week_index = t;
                    ch.modality = prompts::Modality::Chart;
                    ch.image_ref = chart->second.path;
                    ch.ground_truth = at;
                    ch.provenance = {{"chart", asset, t - 4, t}};
                    examples.push_back(ch);
                }
            }
        }
    }

    // Explainer annotation, order-preserving; failures skip the example.
    agents::ChatProvider& provider = chat_provider();
    std::string body;
    long annotated = 0;
    for (auto& example : examples) {
        auto prompt = prompts::build_explain_prompt(store, example,
                                                    literature.at(prompts::expert_for(example)));
        auto request = agents::to_request(prompt, RoleId::Explainer, example.subject,
                                          example.week_index, "annotate");
        prompt_log.append(request, prompt.provenance);
        auto explanation = agents::annotate_explanation(provider, request);
        if (!explanation) {
            ++skipped;
            continue;
        }
        example.explanation = *explanation;
        body += example_to_json(example).dump();
        body.push_back('\n');
        ++annotated;
    }
    fsio::write_text(run_dir() + "/annotations.jsonl", body);

    manifest.set_stage("annotate", skipped > 0 ? "done (skipped " + std::to_string(skipped) + ")"
                                               : "done");
    manifest.save();
    return annotated;
}

std::vector<std::string> Engine::export_finetune() {
    RunManifest manifest = open_manifest();
    prompts::TemplateStore store(config_.templates_dir);

    std::vector<prompts::TrainingExample> examples;
    for (const auto& line : fsio::read_lines(run_dir() + "/annotations.jsonl")) {
        if (!line.empty()) examples.push_back(example_from_json(json::parse(line)));
    }
    if (examples.empty()) {
        throw Error(ErrorKind::State, "no annotated examples; run the annotate stage first");
    }

    std::vector<std::string> paths;
    for (RoleId expert : {RoleId::CryptoFactor, RoleId::Technical, RoleId::MarketFactor,
                          RoleId::News}) {
        paths.push_back(prompts::export_finetune_dataset(store, run_dir() + "/finetune", examples,
                                                         expert));
    }
    manifest.set_stage("export-finetune", "done");
    manifest.save();
    return paths;
}

std::map<std::string, std::string> Engine::finetune() {
    RunManifest manifest = open_manifest();
    agents::FinetuneProvider& provider = finetune_provider();

    std::map<std::string, std::string> bindings;
    std::string bindings_path = run_dir() + "/model_bindings.json";
    if (fs::exists(bindings_path)) {
        json existing = json::parse(fsio::read_text(bindings_path));
        for (const auto& [k, v] : existing.items()) bindings[k] = v.get<std::string>();
    }

    agents::FinetuneLaunchOptions options;
    options.base_model = config_.llm.finetune_base_model;
    options.state_dir = run_dir();
    for (RoleId expert : {RoleId::CryptoFactor, RoleId::Technical, RoleId::MarketFactor,
                          RoleId::News}) {
        std::string dataset = run_dir() + "/finetune/" + role_name(expert) + ".jsonl";
        bindings[role_name(expert)] = agents::launch_finetune(provider, dataset, expert, options);
        fsio::write_text(bindings_path, json(bindings).dump(2) + "\n");
    }

    manifest.set_stage("finetune", "done");
    manifest.save();
    return bindings;
}

// ---------------------------------------------------------------------------

namespace {

struct LedgerRow {
    long week = 0;
    Trend decision = Trend::Fall;
    double crypto_weight = 0.0;
    std::string holdings;
    double weekly_return = 0.0;
    double value = 1.0;
};

void write_ledger(const std::string& path, const std::vector<LedgerRow>& rows) {
    csv::Table t;
    t.header = {"week", "decision", "crypto_weight", "holdings", "weekly_return", "value"};
    for (const auto& r : rows) {
        t.rows.push_back({std::to_string(r.week), trend_text(r.decision),
                          num_to_string(r.crypto_weight), r.holdings,
                          num_to_string(r.weekly_return), num_to_string(r.value)});
    }
    csv::write_file(path, t);
}

std::string holdings_text(const std::map<std::string, double>& holdings) {
    std::string out;
    for (const auto& [asset, weight] : holdings) {
        if (!out.empty()) out.push_back(';');
        out += asset + ":" + num_to_string(weight);
    }
    return out;
}

}  // namespace

void Engine::backtest() {
    RunManifest manifest = open_manifest();
    DataContext data = load_data(config_);
    prompts::TemplateStore store(config_.templates_dir);
    agents::ChatProvider& provider = chat_provider();
    agents::PredictionLog plog(run_dir() + "/predictions.jsonl");
    PromptLog prompt_log(run_dir() + "/prompts.jsonl");
    auto reference = reference_market_vectors(config_, data);

    std::map<std::string, std::string> bindings;
    std::string bindings_path = run_dir() + "/model_bindings.json";
    if (fs::exists(bindings_path)) {
        json existing = json::parse(fsio::read_text(bindings_path));
        for (const auto& [k, v] : existing.items()) bindings[k] = v.get<std::string>();
    }
    auto role_binding = [&](RoleId role) {
        agents::AgentRole r;
        r.role_id = role;
        auto it = bindings.find(role_name(role));
        r.model_ref = it == bindings.end() ? config_.llm.model : it->second;
        return r;
    };

    auto chart_index_path = run_dir() + "/charts/index.json";
    std::map<std::string, charts::ChartRef> chart_index;
    if (fs::exists(chart_index_path)) chart_index = charts::read_chart_index(chart_index_path);

    const long first_t = config_.first_test_week();
    long last_t = data.last_week;  // need realized returns at t
    if (auto cap = config_.last_test_week()) last_t = std::min(last_t, *cap);
    if (first_t > last_t) {
        throw Error(ErrorKind::Config, "no test weeks: cached data ends before the test split");
    }

    // Issues one prediction, reusing the log when the key is already there.
    auto get_or_predict = [&](RoleId role, const std::string& subject, long t,
                              const agents::CompletionRequest& request,
                              const std::vector<prompts::Provenance>& provenance) {
        if (auto existing = plog.find(role, subject, t)) return *existing;
        prompt_log.append(request, provenance);
        auto prediction = agents::predict(provider, role_binding(role), request);
        plog.append(prediction);
        return prediction;
    };

    std::vector<LedgerRow> ledger;
    json ensembles = json::array();
    portfolio::PortfolioState state;
    state.value = 1.0;

    for (long t = first_t; t <= last_t; ++t) {
        const long f = t - 1;
        FormationInputs inputs = build_formation_inputs(config_, data, f, reference);

        // --- Market team (stage barrier: completes before any crypto call).
        std::vector<agents::AgentPrediction> market_preds;
        collab::SharedMemory memory;
        memory.week_index = t;
        memory.market_factor_input = inputs.market_text;
        memory.news_input = inputs.news_text;

        if (!config_.ablation.agent_disabled(role_name(RoleId::MarketFactor))) {
            auto prompt = prompts::build_predict_prompt(
                store, RoleId::MarketFactor, kMarketSubject, inputs.market_text, false,
                market_factor_provenance(f, config_.train_end_week()));
            auto request = agents::to_request(prompt, RoleId::MarketFactor, kMarketSubject, t);
            auto pred = get_or_predict(RoleId::MarketFactor, kMarketSubject, t, request,
                                       prompt.provenance);
            memory.market_factor_prediction = pred;
            market_preds.push_back(std::move(pred));
        }
        if (!config_.ablation.agent_disabled(role_name(RoleId::News))) {
            auto prompt = prompts::build_predict_prompt(
                store, RoleId::News, kMarketSubject, inputs.news_text, false,
                {{"news", kMarketSubject, f, f}});
            auto request = agents::to_request(prompt, RoleId::News, kMarketSubject, t);
            auto pred = get_or_predict(RoleId::News, kMarketSubject, t, request, prompt.provenance);
            memory.news_prediction = pred;
            market_preds.push_back(std::move(pred));
        }

        collab::TeamEnsemble market_ens =
            collab::intrateam_ensemble(collab::TeamId::Market, market_preds);
        ensembles.push_back(collab::ensemble_to_json(market_ens));

        // --- Crypto team, one pair of experts per universe member.
        struct CryptoTask {
            std::string asset;
            RoleId role;
            agents::CompletionRequest request;
            std::vector<prompts::Provenance> provenance;
            bool skip = false;
        };
        std::vector<CryptoTask> tasks;
        for (const auto& asset : inputs.universe) {
            if (!config_.ablation.agent_disabled(role_name(RoleId::CryptoFactor))) {
                CryptoTask task;
                task.asset = asset;
                task.role = RoleId::CryptoFactor;
                auto prompt = prompts::build_predict_prompt(
                    store, RoleId::CryptoFactor, asset,
                    prompts::factors_to_text(inputs.crypto_vecs.at(asset),
                                             inputs.crypto_labels.count(asset)
                                                 ? inputs.crypto_labels.at(asset)
                                                 : std::map<std::string, QuintileLabel>{}),
                    false, crypto_factor_provenance(asset, f));
                task.provenance = prompt.provenance;
                task.request = agents::to_request(prompt, RoleId::CryptoFactor, asset, t);
                tasks.push_back(std::move(task));
            }
            if (!config_.ablation.agent_disabled(role_name(RoleId::Technical))) {
                auto chart = chart_index.find(asset + "/" + std::to_string(f));
                if (chart != chart_index.end()) {
                    CryptoTask task;
                    task.asset = asset;
                    task.role = RoleId::Technical;
                    auto prompt = prompts::build_predict_prompt(store, RoleId::Technical, asset,
                                                                chart->second.path, true,
                                                                {{"chart", asset, f - 4, f}});
                    task.provenance = prompt.provenance;
                    task.request = agents::to_request(prompt, RoleId::Technical, asset, t);
                    tasks.push_back(std::move(task));
                }
            }
        }

        // Interteam context wraps every crypto request unless ablated.
        if (!config_.ablation.disable_interteam) {
            for (auto& task : tasks) {
                auto wrapped = collab::build_interteam_context(store, task.request, memory);
                task.request = wrapped.request;
                if (!wrapped.degraded) {
                    for (const auto& p :
                         {std::string("market_factors"), std::string("news")}) {
                        task.provenance.push_back({"market_context:" + p, kMarketSubject, f, f});
                    }
                }
            }
        }

        // Bounded-parallel issue; log order stays deterministic (task order).
        std::vector<agents::AgentPrediction> results(tasks.size());
        std::vector<bool> reused(tasks.size(), false);
        for (size_t i = 0; i < tasks.size(); ++i) {
            if (auto existing = plog.find(tasks[i].role, tasks[i].asset, t)) {
                results[i] = *existing;
                reused[i] = true;
            }
        }
        parallel_for(tasks.size(), static_cast<size_t>(std::max(1, config_.llm.parallelism)),
                     [&](size_t i) {
                         if (reused[i]) return;
                         results[i] = agents::predict(provider, role_binding(tasks[i].role),
                                                      tasks[i].request);
                     });
        for (size_t i = 0; i < tasks.size(); ++i) {
            if (!reused[i]) {
                prompt_log.append(tasks[i].request, tasks[i].provenance);
                plog.append(results[i]);
            }
        }

        // Per-asset ensembles -> rise probabilities.
        std::map<std::string, std::vector<agents::AgentPrediction>> by_asset;
        for (size_t i = 0; i < tasks.size(); ++i) by_asset[tasks[i].asset].push_back(results[i]);

        std::map<std::string, double> probs;
        for (const auto& [asset, preds] : by_asset) {
            bool any_valid = false;
            for (const auto& p : preds) any_valid |= p.valid;
            if (!any_valid) continue;  // week excluded for this asset
            auto ens = collab::intrateam_ensemble(collab::TeamId::Crypto, preds);
            ensembles.push_back(collab::ensemble_to_json(ens));
            probs[asset] = ens.mean_prob;
        }

        auto quintiles = portfolio::form_quintiles(t, probs);
        auto selected = portfolio::select_target(quintiles);
        auto decision = portfolio::allocate(t, market_ens.decision, selected);

        std::map<std::string, double> realized;
        for (const auto& asset : selected) {
            auto it = data.asset_returns.find(asset);
            if (it != data.asset_returns.end() && it->second.count(t)) {
                realized[asset] = it->second.at(t);
            }
        }
        state = portfolio::step(state, decision, realized);

        LedgerRow row;
        row.week = t;
        row.decision = market_ens.decision;
        row.crypto_weight = decision.crypto_weight;
        row.holdings = holdings_text(state.holdings);
        row.weekly_return = state.weekly_return;
        row.value = state.value;
        ledger.push_back(row);

        manifest.mark_week_complete(t);
        manifest.set_stage("backtest", "running");
        manifest.save();
    }

    write_ledger(run_dir() + "/ledger.csv", ledger);
    fsio::write_text(run_dir() + "/ensembles.jsonl", [&] {
        std::string body;
        for (const auto& e : ensembles) body += e.dump() + "\n";
        return body;
    }());

    manifest.set_stage("backtest", "done");
    manifest.save();
}

json Engine::report() {
    RunManifest manifest = open_manifest();
    DataContext data = load_data(config_);

    eval::BacktestArtifacts artifacts;
    artifacts.first_test_week = config_.first_test_week();
    artifacts.rf_weekly = config_.rf_weekly;

    csv::Table ledger = csv::read_file(run_dir() + "/ledger.csv");
    std::vector<long> weeks;
    for (const auto& row : ledger.rows) {
        weeks.push_back(std::stol(row[0]));
        artifacts.portfolio_returns.push_back(num_from_string(row[4]));
    }

    // Ensembles: market decisions and per-asset probabilities per week.
    std::map<long, Trend> market_decisions;
    std::map<long, std::map<std::string, double>> crypto_probs;
    for (const auto& line : fsio::read_lines(run_dir() + "/ensembles.jsonl")) {
        if (line.empty()) continue;
        json e = json::parse(line);
        long week = e.at("week").get<long>();
        if (e.at("team").get<std::string>() == "market") {
            market_decisions[week] = trend_from_text(e.at("decision").get<std::string>());
            artifacts.disagreements["market"].push_back(e.at("disagreement").get<double>());
        } else {
            crypto_probs[week][e.at("subject").get<std::string>()] =
                e.at("mean_prob").get<double>();
            artifacts.disagreements["crypto"].push_back(e.at("disagreement").get<double>());
        }
    }

    for (long t : weeks) {
        artifacts.market_returns.push_back(data.market_returns.count(t) ? data.market_returns.at(t)
                                                                        : 0.0);
        artifacts.market_decisions.push_back(market_decisions.count(t) ? market_decisions.at(t)
                                                                       : Trend::Fall);
        artifacts.weekly_quintiles.push_back(
            portfolio::form_quintiles(t, crypto_probs.count(t) ? crypto_probs.at(t)
                                                               : std::map<std::string, double>{}));
        std::map<std::string, double> returns;
        for (const auto& [asset, by_week] : data.asset_returns) {
            if (by_week.count(t)) returns[asset] = by_week.at(t);
        }
        artifacts.weekly_asset_returns.push_back(std::move(returns));
    }

    // Classification pairs per expert and per team.
    agents::PredictionLog plog(run_dir() + "/predictions.jsonl");
    auto truth_of = [&](const std::string& subject, long t) -> std::optional<Trend> {
        const std::map<long, double>* series = nullptr;
        if (subject == kMarketSubject) series = &data.market_returns;
        else if (data.asset_returns.count(subject)) series = &data.asset_returns.at(subject);
        if (!series || !series->count(t)) return std::nullopt;
        return series->at(t) > 0.0 ? Trend::Rise : Trend::Fall;
    };
    long fallback_predictions = 0;
    for (const auto& p : plog.entries()) {
        if (!p.valid) continue;
        if (p.logprob_fallback) ++fallback_predictions;
        auto truth = truth_of(p.subject, p.week_index);
        if (!truth) continue;
        artifacts.classifications[role_name(p.role)].push_back({p.label, *truth});
    }
    for (const auto& [week, decision] : market_decisions) {
        if (auto truth = truth_of(kMarketSubject, week)) {
            artifacts.classifications["market-team"].push_back({decision, *truth});
        }
    }
    for (const auto& [week, probs] : crypto_probs) {
        for (const auto& [asset, prob] : probs) {
            if (auto truth = truth_of(asset, week)) {
                artifacts.classifications["crypto-team"].push_back(
                    {collab::decide(prob), *truth});
            }
        }
    }

    json report = eval::build_report(artifacts);
    report["run_id"] = config_.run_id;
    report["fallback_predictions"] = fallback_predictions;

    if (config_.judge_enabled) {
        prompts::TemplateStore store(config_.templates_dir);
        std::vector<std::pair<std::string, std::string>> responses;
        for (const auto& p : plog.entries()) {
            if (p.valid && !p.explanation.empty()) {
                responses.push_back({agents::PredictionLog::dedup_key(p.role, p.subject,
                                                                      p.week_index),
                                     p.explanation});
            }
        }
        auto outcome = eval::judge_explanations(chat_provider(), store, responses);
        json scores = json::array();
        for (const auto& s : outcome.scores) {
            scores.push_back({{"id", s.response_id},
                              {"professionalism", s.professionalism},
                              {"objectivity", s.objectivity},
                              {"clarity", s.clarity},
                              {"consistency", s.consistency},
                              {"rationale", s.rationale}});
        }
        report["explainability"] = {{"scores", scores},
                                    {"means", outcome.metric_means},
                                    {"skipped", outcome.skipped}};
    }

    eval::write_report_files(run_dir(), report);
    manifest.set_stage("report", "done");
    manifest.save();
    return report;
}

long Engine::trade(bool dry_run) {
    RunManifest manifest = open_manifest();
    csv::Table ledger = csv::read_file(run_dir() + "/ledger.csv");
    if (ledger.rows.empty()) {
        throw Error(ErrorKind::State, "empty ledger; run the backtest first");
    }

    auto parse_holdings = [](const std::string& text) {
        std::map<std::string, double> holdings;
        size_t pos = 0;
        while (pos < text.size()) {
            size_t sep = text.find(';', pos);
            std::string item = text.substr(pos, sep == std::string::npos ? sep : sep - pos);
            size_t colon = item.rfind(':');
            if (colon != std::string::npos) {
                holdings[item.substr(0, colon)] = num_from_string(item.substr(colon + 1));
            }
            if (sep == std::string::npos) break;
            pos = sep + 1;
        }
        return holdings;
    };

    const auto& last = ledger.rows.back();
    std::map<std::string, double> current;
    if (ledger.rows.size() > 1) {
        current = parse_holdings(ledger.rows[ledger.rows.size() - 2][3]);
    }
    auto target = parse_holdings(last[3]);

    portfolio::AllocationDecision decision;
    decision.week_index = std::stol(last[0]);
    decision.market_decision = trend_from_text(last[1]);
    decision.crypto_weight = num_from_string(last[2]);
    for (const auto& [asset, weight] : target) {
        decision.selected_assets.push_back(asset);
        decision.per_asset_weight = weight;
    }

    long intents = execute_paper_trades(decision, current, config_.trading, run_dir(), dry_run);
    manifest.set_stage("trade", "done");
    manifest.save();
    return intents;
}

}  // namespace ca::orch
