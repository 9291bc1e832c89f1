#include "agents/mock_provider.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>

#include "common/error.hpp"
#include "common/fsio.hpp"

namespace ca::agents {

using nlohmann::json;

MockChatProvider::MockChatProvider(const std::string& script_path) {
    load_script(script_path);
}

void MockChatProvider::load_script(const std::string& script_path) {
    for (const auto& line : fsio::read_lines(script_path)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        script(role_from_name(j.at("role").get<std::string>()),
               j.at("subject").get<std::string>(), j.at("week").get<long>(),
               j.at("text").get<std::string>(), j.value("logprob", -0.01),
               j.value("no_logprobs", false), j.value("purpose", "predict"));
    }
}

void MockChatProvider::script(RoleId role, const std::string& subject, long week,
                              const std::string& text, double logprob, bool no_logprobs,
                              const std::string& purpose) {
    std::lock_guard lock(mutex_);
    script_[key(role, subject, week, purpose)].push_back({text, logprob, no_logprobs});
}

std::string MockChatProvider::key(RoleId role, const std::string& subject, long week,
                                  const std::string& purpose) {
    return std::string(role_name(role)) + "|" + subject + "|" + std::to_string(week) + "|" + purpose;
}

namespace {

// Splits the scripted text into (prefix, classification token, suffix) so the
// response carries a realistic token list with the trend token's logprob.
std::vector<TokenLogprob> tokenize(const std::string& text, double trend_logprob) {
    std::string folded(text);
    std::transform(folded.begin(), folded.end(), folded.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    size_t rise = folded.find("rise");
    size_t fall = folded.find("fall");
    size_t at = std::min(rise, fall);
    if (at == std::string::npos) {
        return {{text, -0.1}};
    }
    std::vector<TokenLogprob> tokens;
    if (at > 0) tokens.push_back({text.substr(0, at), -0.001});
    tokens.push_back({text.substr(at, 4), trend_logprob});
    if (at + 4 < text.size()) tokens.push_back({text.substr(at + 4), -0.001});
    return tokens;
}

}  // namespace

CompletionResponse MockChatProvider::complete(const CompletionRequest& request) {
    std::lock_guard lock(mutex_);
    requests_.push_back(request);
    auto it = script_.find(key(request.role, request.subject, request.week_index, request.purpose));
    if (it == script_.end() || it->second.empty()) {
        throw Error(ErrorKind::Provider,
                    "no scripted response for " + key(request.role, request.subject,
                                                      request.week_index, request.purpose));
    }
    Entry entry = it->second.front();
    if (it->second.size() > 1) it->second.pop_front();  // keep last entry for repeated calls

    CompletionResponse response;
    response.text = entry.text;
    if (request.want_logprobs && !entry.no_logprobs) {
        response.token_logprobs = tokenize(entry.text, entry.logprob);
    }
    return response;
}

std::vector<CompletionRequest> MockChatProvider::requests() const {
    std::lock_guard lock(mutex_);
    return requests_;
}

size_t MockChatProvider::call_count() const {
    std::lock_guard lock(mutex_);
    return requests_.size();
}

void MockFinetuneProvider::script_job(const std::string& job_id,
                                      std::vector<FinetuneJobStatus> states) {
    job_id_ = job_id;
    states_ = std::move(states);
    next_state_ = 0;
    rejection_.clear();
}

void MockFinetuneProvider::reject_next(const std::string& message) { rejection_ = message; }

std::string MockFinetuneProvider::create_job(const std::string& dataset_path,
                                             const std::string& base_model) {
    (void)dataset_path;
    (void)base_model;
    ++create_calls;
    if (!rejection_.empty()) {
        std::string msg = rejection_;
        rejection_.clear();
        throw Error(ErrorKind::Provider, msg);
    }
    if (job_id_.empty()) throw Error(ErrorKind::Provider, "no scripted job");
    return job_id_;
}

FinetuneJobStatus MockFinetuneProvider::job_status(const std::string& job_id) {
    if (job_id != job_id_) throw Error(ErrorKind::Provider, "unknown job '" + job_id + "'");
    ++poll_calls;
    if (states_.empty()) throw Error(ErrorKind::Provider, "no scripted states");
    size_t i = std::min(next_state_, states_.size() - 1);
    ++next_state_;
    return states_[i];
}

}  // namespace ca::agents
