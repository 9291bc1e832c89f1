#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "common/labels.hpp"
#include "common/roles.hpp"

namespace ca::agents {

struct AgentRole {
    RoleId role_id = RoleId::CryptoFactor;
    std::string model_ref;  // provider model name or fine-tune job result
};

struct CompletionRequest {
    std::string system;
    std::string user;
    std::optional<std::string> image_ref;
    bool want_logprobs = true;
    double temperature = 0.0;  // argmax decoding; Eq-style ensembling needs it

    // Routing metadata: keys scripted mocks and dedups the prediction log.
    RoleId role = RoleId::CryptoFactor;
    std::string subject;
    long week_index = 0;
    std::string purpose = "predict";  // predict | annotate | judge
};

struct TokenLogprob {
    std::string token;
    double logprob = 0.0;
};

struct CompletionResponse {
    std::string text;
    std::vector<TokenLogprob> token_logprobs;  // empty when the provider has none
};

struct AgentPrediction {
    RoleId role = RoleId::CryptoFactor;
    std::string subject;
    long week_index = 0;
    Trend label = Trend::Fall;
    double logprob_rise = 0.0;  // natural log of P(Rise), <= 0
    std::string explanation;
    std::string raw;
    bool valid = false;
    bool logprob_fallback = false;  // no token logprobs; fixed confidence used
    std::string error;

    double rise_probability() const { return std::exp(logprob_rise); }
};

struct ProviderConfig {
    std::string endpoint;
    std::string api_key;
    int timeout_seconds = 60;
    int max_retries = 2;
    int backoff_ms = 250;
    int parallelism = 4;
};

}  // namespace ca::agents
