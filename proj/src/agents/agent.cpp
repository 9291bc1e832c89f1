#include "agents/agent.hpp"

#include <json.hpp>

#include <cmath>

#include "agents/parse.hpp"
#include "common/fsio.hpp"

namespace ca::agents {

using nlohmann::json;

CompletionRequest to_request(const prompts::RenderedPrompt& prompt, RoleId role,
                             const std::string& subject, long week_index,
                             const std::string& purpose) {
    CompletionRequest req;
    req.system = prompt.system;
    req.user = prompt.user;
    req.image_ref = prompt.image_ref;
    req.role = role;
    req.subject = subject;
    req.week_index = week_index;
    req.purpose = purpose;
    return req;
}

namespace {

const char* kFormatReminder =
    "\n\nReminder: respond exactly in the form:\n"
    "(Price trend or Market trend): (Rise or Fall)\nExplanation: (your explanation)";

}  // namespace

AgentPrediction predict(ChatProvider& provider, const AgentRole& role,
                        const CompletionRequest& request) {
    AgentPrediction prediction;
    prediction.role = role.role_id;
    prediction.subject = request.subject;
    prediction.week_index = request.week_index;

    CompletionRequest attempt = request;
    CompletionResponse response;
    ParsedOutput parsed;
    bool ok = false;
    for (int round = 0; round < 2 && !ok; ++round) {
        if (round == 1) attempt.user = request.user + kFormatReminder;
        response = provider.complete(attempt);
        try {
            parsed = parse_prediction_output(response.text);
            ok = true;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Parse) throw;
            prediction.error = e.what();
        }
    }

    prediction.raw = response.text;
    if (!ok) {
        prediction.valid = false;
        return prediction;
    }

    prediction.label = parsed.label;
    prediction.explanation = parsed.explanation;
    prediction.error.clear();

    auto rise_lp = rise_logprob_from_tokens(response);
    if (rise_lp) {
        prediction.logprob_rise = *rise_lp;
    } else {
        double p = parsed.label == Trend::Rise ? kFallbackRiseProb : 1.0 - kFallbackRiseProb;
        prediction.logprob_rise = std::log(p);
        prediction.logprob_fallback = true;
    }
    prediction.valid = true;
    return prediction;
}

std::optional<std::string> annotate_explanation(ChatProvider& provider,
                                                const CompletionRequest& request) {
    try {
        CompletionResponse response = provider.complete(request);
        std::string text = response.text;
        size_t a = text.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return std::nullopt;
        size_t b = text.find_last_not_of(" \t\r\n");
        return text.substr(a, b - a + 1);
    } catch (const Error&) {
        return std::nullopt;
    }
}

json prediction_to_json(const AgentPrediction& p) {
    return json{{"role", role_name(p.role)},
                {"subject", p.subject},
                {"week", p.week_index},
                {"label", trend_text(p.label)},
                {"logprob_rise", p.logprob_rise},
                {"explanation", p.explanation},
                {"raw", p.raw},
                {"valid", p.valid},
                {"logprob_fallback", p.logprob_fallback},
                {"error", p.error}};
}

AgentPrediction prediction_from_json(const json& j) {
    AgentPrediction p;
    p.role = role_from_name(j.at("role").get<std::string>());
    p.subject = j.at("subject").get<std::string>();
    p.week_index = j.at("week").get<long>();
    p.label = trend_from_text(j.at("label").get<std::string>());
    p.logprob_rise = j.at("logprob_rise").get<double>();
    p.explanation = j.at("explanation").get<std::string>();
    p.raw = j.at("raw").get<std::string>();
    p.valid = j.at("valid").get<bool>();
    p.logprob_fallback = j.at("logprob_fallback").get<bool>();
    p.error = j.at("error").get<std::string>();
    return p;
}

PredictionLog::PredictionLog(std::string path) : path_(std::move(path)) {
    for (const auto& line : fsio::read_lines(path_)) {
        if (line.empty()) continue;
        AgentPrediction p = prediction_from_json(json::parse(line));
        index_[dedup_key(p.role, p.subject, p.week_index)] = entries_.size();
        entries_.push_back(std::move(p));
    }
}

std::string PredictionLog::dedup_key(RoleId role, const std::string& subject, long week_index) {
    return std::string(role_name(role)) + "|" + subject + "|" + std::to_string(week_index);
}

std::optional<AgentPrediction> PredictionLog::find(RoleId role, const std::string& subject,
                                                   long week_index) const {
    std::lock_guard lock(mutex_);
    auto it = index_.find(dedup_key(role, subject, week_index));
    if (it == index_.end()) return std::nullopt;
    return entries_[it->second];
}

bool PredictionLog::append(const AgentPrediction& prediction) {
    std::lock_guard lock(mutex_);
    std::string key = dedup_key(prediction.role, prediction.subject, prediction.week_index);
    if (index_.count(key)) return false;
    fsio::append_line(path_, prediction_to_json(prediction).dump());
    index_[key] = entries_.size();
    entries_.push_back(prediction);
    return true;
}

std::vector<AgentPrediction> PredictionLog::entries() const {
    std::lock_guard lock(mutex_);
    return entries_;
}

}  // namespace ca::agents
