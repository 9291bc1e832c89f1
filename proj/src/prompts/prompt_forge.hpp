#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "common/labels.hpp"
#include "common/roles.hpp"
#include "factors/factors.hpp"
#include "market_data/types.hpp"
#include "prompts/templates.hpp"

namespace ca::prompts {

// Where a rendered slot's data came from; the no-look-ahead audit scans these.
struct Provenance {
    std::string source;   // crypto_factors | market_factors | news | chart | ground_truth | literature | market_context
    std::string subject;  // asset id or MARKET
    long min_week = 0;    // inclusive data window
    long max_week = 0;
};

void to_json(nlohmann::json& j, const Provenance& p);
void from_json(const nlohmann::json& j, Provenance& p);

struct RenderedPrompt {
    std::string system;
    std::string user;
    std::optional<std::string> image_ref;
    std::vector<Provenance> provenance;
};

// The "{target}" family of phrases resolved per prediction context.
struct TargetPhrases {
    std::string target;        // next week's ... phrase
    std::string target_short;  // (predicted ...) phrase
    std::string target_title;  // output field prefix
    std::string subject_kind;  // "market" / "cryptocurrency"
};
TargetPhrases target_phrases(bool market);

// One "NAME: Label" line per factor in table order; fields without a value
// render as "NAME: N/A". A labeled value must be present in `labels`.
std::string factors_to_text(const factors::CryptoFactorVector& v,
                            const std::map<std::string, QuintileLabel>& labels);
std::string factors_to_text(const factors::MarketFactorVector& v,
                            const std::map<std::string, QuintileLabel>& labels);

// Newest `cap` headlines of the week, rendered oldest-first.
std::string news_to_text(const std::vector<md::NewsHeadline>& headlines, std::size_t cap = 50);

// Concatenates literature/{expert}/*.txt (sorted) with separators. Missing or
// empty corpus directory -> Error(Config) naming the modality.
std::string load_literature(const std::string& literature_root, RoleId expert);

// Inference-time prompt for one expert. For chart roles `information` is the
// image reference and also lands in image_ref.
RenderedPrompt build_predict_prompt(const TemplateStore& store, RoleId role,
                                    const std::string& subject, const std::string& information,
                                    bool is_chart, std::vector<Provenance> provenance);

enum class Modality { Factors, News, Chart };

const char* modality_name(Modality m);

struct TrainingExample {
    std::string subject;  // asset id or MARKET
    long week_index = 0;  // formation week
    Modality modality = Modality::Factors;
    std::string info_text;
    std::string image_ref;  // set iff modality == Chart
    Trend ground_truth = Trend::Fall;
    std::string explanation;  // filled by the explainer agent
    std::vector<Provenance> provenance;
};

// Which fine-tuned expert consumes this example.
RoleId expert_for(const TrainingExample& example);

// Annotation prompt: explain instruction plus the per-modality explain body.
RenderedPrompt build_explain_prompt(const TemplateStore& store, const TrainingExample& example,
                                    const std::string& literature);

struct ChatMessage {
    std::string role;
    std::string content;
    std::optional<std::string> image_url;
};

struct FineTuneRecord {
    std::vector<ChatMessage> messages;  // system, user, assistant
};

nlohmann::json to_json(const FineTuneRecord& record);
FineTuneRecord finetune_record_from_json(const nlohmann::json& j);

// system/user from the fine-tune templates; assistant is the two-field
// "<Target>: <Rise|Fall>\nExplanation: <text>" form. Empty explanation ->
// Error(Input).
FineTuneRecord build_finetune_record(const TemplateStore& store, const TrainingExample& example);

// One JSON object per line at {out_dir}/{expert}.jsonl for the examples
// belonging to `expert`. Zero matching records -> Error(Input).
std::string export_finetune_dataset(const TemplateStore& store, const std::string& out_dir,
                                    const std::vector<TrainingExample>& examples, RoleId expert);

std::vector<FineTuneRecord> parse_finetune_file(const std::string& path);

}  // namespace ca::prompts
