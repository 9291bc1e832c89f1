#pragma once

#include <optional>
#include <string>

#include "agents/types.hpp"

namespace ca::agents {

struct ParsedOutput {
    Trend label = Trend::Fall;
    std::string explanation;
};

// Two-field output: a leading "Price trend:"/"Market trend:" line carrying
// Rise or Fall (case-insensitive), then everything after "Explanation:".
// Throws Error(Parse) when the trend line or label is missing.
ParsedOutput parse_prediction_output(const std::string& raw);

// Log probability of Rise derived from the classification token: the first
// token whose text case-insensitively begins "Rise" or "Fall". A Fall token
// with logprob l maps to ln(1 - e^l), clamped away from -inf. Returns nullopt
// when no classification token is found.
std::optional<double> rise_logprob_from_tokens(const CompletionResponse& response);

}  // namespace ca::agents
