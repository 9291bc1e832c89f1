#include "agents/http_provider.hpp"

#include <httplib.h>
#include <json.hpp>

#include <filesystem>
#include <thread>

#include "common/error.hpp"
#include "common/fsio.hpp"

namespace ca::agents {

using nlohmann::json;

namespace {

json request_json(const httplib::Result& res, const std::string& what) {
    json parsed = json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) {
        throw Error(ErrorKind::Provider, what + ": non-JSON response body");
    }
    return parsed;
}

json http_json_call(const ProviderConfig& config, const std::string& method,
                    const std::string& path, const std::string& body,
                    const std::string& content_type) {
    httplib::Client client(config.endpoint);
    client.set_connection_timeout(config.timeout_seconds);
    client.set_read_timeout(config.timeout_seconds);
    httplib::Headers headers;
    if (!config.api_key.empty()) headers.emplace("Authorization", "Bearer " + config.api_key);

    std::string last_error;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(config.backoff_ms << (attempt - 1)));
        }
        httplib::Result res = method == "GET"
                                  ? client.Get(path, headers)
                                  : client.Post(path, headers, body, content_type);
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw Error(ErrorKind::Provider, method + " " + path + " -> status " +
                                                 std::to_string(res->status) + ": " + res->body);
        }
        return request_json(res, method + " " + path);
    }
    throw Error(ErrorKind::Network, method + " " + config.endpoint + path + " failed after " +
                                        std::to_string(config.max_retries + 1) +
                                        " attempts: " + last_error);
}

}  // namespace

HttpChatProvider::HttpChatProvider(ProviderConfig config, std::string model)
    : config_(std::move(config)), model_(std::move(model)) {}

CompletionResponse HttpChatProvider::complete(const CompletionRequest& request) {
    json user_content;
    if (request.image_ref) {
        user_content = json::array({{{"type", "text"}, {"text", request.user}},
                                    {{"type", "image_url"}, {"image_url", {{"url", *request.image_ref}}}}});
    } else {
        user_content = request.user;
    }

    json body = {
        {"model", model_},
        {"temperature", request.temperature},
        {"logprobs", request.want_logprobs},
        {"messages",
         json::array({{{"role", "system"}, {"content", request.system}},
                      {{"role", "user"}, {"content", user_content}}})},
    };

    json res = http_json_call(config_, "POST", "/v1/chat/completions", body.dump(),
                              "application/json");
    const auto& choices = res.at("choices");
    if (choices.empty()) throw Error(ErrorKind::Provider, "completion returned no choices");
    const auto& choice = choices.at(0);

    CompletionResponse out;
    out.text = choice.at("message").at("content").get<std::string>();
    if (choice.contains("logprobs") && choice.at("logprobs").is_object() &&
        choice.at("logprobs").contains("content")) {
        for (const auto& tl : choice.at("logprobs").at("content")) {
            out.token_logprobs.push_back(
                {tl.at("token").get<std::string>(), tl.at("logprob").get<double>()});
        }
    }
    return out;
}

HttpFinetuneProvider::HttpFinetuneProvider(ProviderConfig config) : config_(std::move(config)) {}

std::string HttpFinetuneProvider::create_job(const std::string& dataset_path,
                                             const std::string& base_model) {
    if (!std::filesystem::exists(dataset_path)) {
        throw Error(ErrorKind::Input, "dataset not found: " + dataset_path);
    }

    httplib::Client client(config_.endpoint);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    httplib::MultipartFormDataItems items = {
        {"purpose", "fine-tune", "", ""},
        {"file", fsio::read_text(dataset_path),
         std::filesystem::path(dataset_path).filename().string(), "application/jsonl"},
    };
    auto upload = client.Post("/v1/files", headers, items);
    if (!upload || upload->status != 200) {
        throw Error(ErrorKind::Provider,
                    "dataset upload failed: " +
                        (upload ? std::to_string(upload->status) + " " + upload->body
                                : httplib::to_string(upload.error())));
    }
    std::string file_id = json::parse(upload->body).at("id").get<std::string>();

    json body = {{"training_file", file_id}, {"model", base_model}};
    json res = http_json_call(config_, "POST", "/v1/fine_tuning/jobs", body.dump(),
                              "application/json");
    return res.at("id").get<std::string>();
}

FinetuneJobStatus HttpFinetuneProvider::job_status(const std::string& job_id) {
    json res = http_json_call(config_, "GET", "/v1/fine_tuning/jobs/" + job_id, "", "");
    FinetuneJobStatus status;
    std::string state = res.at("status").get<std::string>();
    if (state == "succeeded") {
        status.state = "succeeded";
        status.model_ref = res.at("fine_tuned_model").get<std::string>();
    } else if (state == "failed" || state == "cancelled") {
        status.state = "failed";
        status.message = res.value("error", json::object()).value("message", state);
    } else if (state == "validating_files" || state == "queued") {
        status.state = "pending";
    } else {
        status.state = "running";
    }
    return status;
}

}  // namespace ca::agents
