#include "evaluation/judge.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

#include "common/error.hpp"

namespace ca::eval {

namespace {

std::optional<double> parse_metric_line(const std::string& text, const std::string& metric) {
    std::string folded(text);
    std::transform(folded.begin(), folded.end(), folded.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    size_t at = folded.find(metric + ":");
    if (at == std::string::npos) return std::nullopt;
    std::istringstream in(text.substr(at + metric.size() + 1));
    double value = 0.0;
    if (!(in >> value)) return std::nullopt;
    if (value < 0.0 || value > 1.0) return std::nullopt;
    return value;
}

}  // namespace

JudgeOutcome judge_explanations(agents::ChatProvider& provider,
                                const prompts::TemplateStore& store,
                                const std::vector<std::pair<std::string, std::string>>& responses) {
    JudgeOutcome outcome;
    static const std::vector<std::string> kMetrics = {"professionalism", "objectivity", "clarity",
                                                      "consistency", "rationale"};
    std::map<std::string, double> sums;

    for (const auto& [id, text] : responses) {
        agents::CompletionRequest request;
        request.system = "";
        request.user = store.render(prompts::TemplateId::JudgeRubric, {{"response", text}});
        request.want_logprobs = false;
        request.role = RoleId::Judge;
        request.subject = id;
        request.purpose = "judge";

        std::string body;
        try {
            body = provider.complete(request).text;
        } catch (const Error&) {
            outcome.skipped.push_back(id);
            continue;
        }

        ExplainScore score;
        score.response_id = id;
        std::map<std::string, double> parsed;
        bool ok = true;
        for (const auto& metric : kMetrics) {
            auto value = parse_metric_line(body, metric);
            if (!value) {
                ok = false;
                break;
            }
            parsed[metric] = *value;
        }
        if (!ok) {
            outcome.skipped.push_back(id);
            continue;
        }
        score.professionalism = parsed["professionalism"];
        score.objectivity = parsed["objectivity"];
        score.clarity = parsed["clarity"];
        score.consistency = parsed["consistency"];
        score.rationale = parsed["rationale"];
        outcome.scores.push_back(score);
        for (const auto& metric : kMetrics) sums[metric] += parsed[metric];
    }

    if (!outcome.scores.empty()) {
        for (const auto& metric : kMetrics) {
            outcome.metric_means[metric] = sums[metric] / static_cast<double>(outcome.scores.size());
        }
    }
    return outcome;
}

}  // namespace ca::eval
