#pragma once

#include <string>

#include "agents/provider.hpp"

namespace ca::agents {

// Chat-completions client (OpenAI-compatible wire shape): POST
// /v1/chat/completions with optional token logprobs and an image-bearing user
// message. Transport failures retry with exponential backoff and finally
// raise Error(Network); 4xx responses raise Error(Provider).
class HttpChatProvider : public ChatProvider {
public:
    HttpChatProvider(ProviderConfig config, std::string model);

    CompletionResponse complete(const CompletionRequest& request) override;

    void set_model(std::string model) { model_ = std::move(model); }

private:
    ProviderConfig config_;
    std::string model_;
};

// Fine-tune job client: uploads the dataset, creates the job, polls status.
class HttpFinetuneProvider : public FinetuneProvider {
public:
    explicit HttpFinetuneProvider(ProviderConfig config);

    std::string create_job(const std::string& dataset_path, const std::string& base_model) override;
    FinetuneJobStatus job_status(const std::string& job_id) override;

private:
    ProviderConfig config_;
};

}  // namespace ca::agents
