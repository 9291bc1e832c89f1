#pragma once

#include <map>
#include <string>
#include <vector>

#include "agents/provider.hpp"
#include "prompts/templates.hpp"

namespace ca::eval {

struct ExplainScore {
    std::string response_id;
    double professionalism = 0.0;
    double objectivity = 0.0;
    double clarity = 0.0;
    double consistency = 0.0;
    double rationale = 0.0;
};

struct JudgeOutcome {
    std::vector<ExplainScore> scores;
    std::map<std::string, double> metric_means;  // over scored responses
    std::vector<std::string> skipped;            // unparseable or out-of-range
};

// Scores each (id, explanation) pair on the five rubric metrics via the judge
// agent. Responses whose scores cannot be parsed or fall outside [0, 1] are
// skipped, not clamped.
JudgeOutcome judge_explanations(agents::ChatProvider& provider,
                                const prompts::TemplateStore& store,
                                const std::vector<std::pair<std::string, std::string>>& responses);

}  // namespace ca::eval
