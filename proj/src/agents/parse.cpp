#include "agents/parse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "common/error.hpp"

namespace ca::agents {

namespace {

std::string lower(const std::string& s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

constexpr double kMinProbability = 1e-9;

}  // namespace

ParsedOutput parse_prediction_output(const std::string& raw) {
    std::string text = trim(raw);
    std::string folded = lower(text);

    size_t prefix_len = 0;
    if (folded.rfind("price trend", 0) == 0) prefix_len = 11;
    else if (folded.rfind("market trend", 0) == 0) prefix_len = 12;
    else throw Error(ErrorKind::Parse, "output does not start with a trend line");

    size_t pos = prefix_len;
    while (pos < folded.size() && (folded[pos] == ' ' || folded[pos] == ':')) ++pos;
    size_t eol = folded.find('\n');
    std::string value = trim(folded.substr(pos, eol == std::string::npos ? eol : eol - pos));

    ParsedOutput out;
    if (value.rfind("rise", 0) == 0) out.label = Trend::Rise;
    else if (value.rfind("fall", 0) == 0) out.label = Trend::Fall;
    else throw Error(ErrorKind::Parse, "trend line carries neither Rise nor Fall");

    size_t expl = folded.find("explanation:");
    if (expl != std::string::npos) {
        out.explanation = trim(text.substr(expl + 12));
    }
    return out;
}

std::optional<double> rise_logprob_from_tokens(const CompletionResponse& response) {
    for (const auto& tl : response.token_logprobs) {
        std::string token = lower(trim(tl.token));
        bool is_rise = token.rfind("rise", 0) == 0;
        bool is_fall = token.rfind("fall", 0) == 0;
        if (!is_rise && !is_fall) continue;

        // Token probabilities live in (0, 1]; guard against provider noise.
        double p = std::exp(std::min(tl.logprob, 0.0));
        p = std::clamp(p, kMinProbability, 1.0);
        double p_rise = is_rise ? p : 1.0 - p;
        p_rise = std::clamp(p_rise, kMinProbability, 1.0);
        return std::log(p_rise);
    }
    return std::nullopt;
}

}  // namespace ca::agents
