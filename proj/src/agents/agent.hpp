#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "agents/provider.hpp"
#include "agents/types.hpp"
#include "prompts/prompt_forge.hpp"

namespace ca::agents {

CompletionRequest to_request(const prompts::RenderedPrompt& prompt, RoleId role,
                             const std::string& subject, long week_index,
                             const std::string& purpose = "predict");

// Fixed confidence used when the provider returns no token logprobs:
// symmetric and order-preserving, flagged on the prediction.
constexpr double kFallbackRiseProb = 0.75;

// One completion -> parsed prediction. An unparseable first response triggers
// a single reprompt with a format reminder; a second failure yields an
// invalid prediction (error recorded) rather than a guess. Transport errors
// propagate as Error(Network).
AgentPrediction predict(ChatProvider& provider, const AgentRole& role,
                        const CompletionRequest& request);

// Explanation text for a training pair; nullopt (caller skips the example)
// when the provider fails or returns an empty body.
std::optional<std::string> annotate_explanation(ChatProvider& provider,
                                                const CompletionRequest& request);

// Append-only JSONL store of predictions keyed by (role, subject, week).
// Reloading and re-appending the same key is a no-op, which is what makes
// interrupted runs resumable and retries idempotent.
class PredictionLog {
public:
    explicit PredictionLog(std::string path);

    std::optional<AgentPrediction> find(RoleId role, const std::string& subject,
                                        long week_index) const;
    // Returns false when the key was already logged.
    bool append(const AgentPrediction& prediction);

    std::vector<AgentPrediction> entries() const;
    const std::string& path() const { return path_; }

    static std::string dedup_key(RoleId role, const std::string& subject, long week_index);

private:
    std::string path_;
    mutable std::mutex mutex_;
    std::vector<AgentPrediction> entries_;
    std::map<std::string, size_t> index_;
};

nlohmann::json prediction_to_json(const AgentPrediction& p);
AgentPrediction prediction_from_json(const nlohmann::json& j);

}  // namespace ca::agents
