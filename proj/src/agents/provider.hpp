#pragma once

#include <string>

#include "agents/types.hpp"

namespace ca::agents {

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual CompletionResponse complete(const CompletionRequest& request) = 0;
};

struct FinetuneJobStatus {
    std::string state;  // pending | running | succeeded | failed
    std::string model_ref;
    std::string message;

    bool terminal() const { return state == "succeeded" || state == "failed"; }
};

class FinetuneProvider {
public:
    virtual ~FinetuneProvider() = default;
    virtual std::string create_job(const std::string& dataset_path,
                                   const std::string& base_model) = 0;
    virtual FinetuneJobStatus job_status(const std::string& job_id) = 0;
};

}  // namespace ca::agents
