#pragma once

#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "agents/provider.hpp"

namespace ca::agents {

// Deterministic provider scripted by JSONL fixtures keyed by
// (role, subject, week, purpose). Each line:
//   {"role":"news","subject":"MARKET","week":6,"text":"Market trend: Rise\n
//    Explanation: ...","logprob":-0.105,...}
// Optional fields: "purpose" (default "predict"), "no_logprobs" (suppress
// token logprobs to exercise the fallback path). Multiple lines with the same
// key are consumed in order (the last one repeats), so retries and reprompts
// can be scripted while reruns stay deterministic.
class MockChatProvider : public ChatProvider {
public:
    MockChatProvider() = default;
    explicit MockChatProvider(const std::string& script_path);

    void load_script(const std::string& script_path);
    void script(RoleId role, const std::string& subject, long week, const std::string& text,
                double logprob, bool no_logprobs = false, const std::string& purpose = "predict");

    CompletionResponse complete(const CompletionRequest& request) override;

    // Request trace for order/barrier assertions.
    std::vector<CompletionRequest> requests() const;
    size_t call_count() const;

private:
    struct Entry {
        std::string text;
        double logprob = 0.0;
        bool no_logprobs = false;
    };

    static std::string key(RoleId role, const std::string& subject, long week,
                           const std::string& purpose);

    mutable std::mutex mutex_;
    std::map<std::string, std::deque<Entry>> script_;
    std::vector<CompletionRequest> requests_;
};

// Scripted fine-tune lifecycle: a fixed job id (or a rejection) plus a state
// sequence walked one step per poll.
class MockFinetuneProvider : public FinetuneProvider {
public:
    void script_job(const std::string& job_id, std::vector<FinetuneJobStatus> states);
    void reject_next(const std::string& message);

    std::string create_job(const std::string& dataset_path, const std::string& base_model) override;
    FinetuneJobStatus job_status(const std::string& job_id) override;

    int create_calls = 0;
    int poll_calls = 0;

private:
    std::string job_id_;
    std::vector<FinetuneJobStatus> states_;
    size_t next_state_ = 0;
    std::string rejection_;
};

}  // namespace ca::agents
