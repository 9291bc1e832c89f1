#include "collab/collab.hpp"

#include <cmath>

#include "common/error.hpp"
#include "common/stats.hpp"

namespace ca::collab {

using nlohmann::json;

Trend decide(double mean_prob) {
    if (mean_prob < 0.0 || mean_prob > 1.0) {
        throw Error(ErrorKind::Input, "mean probability outside [0, 1]");
    }
    return mean_prob > 0.5 ? Trend::Rise : Trend::Fall;
}

TeamEnsemble intrateam_ensemble(TeamId team,
                                const std::vector<agents::AgentPrediction>& predictions) {
    TeamEnsemble ensemble;
    ensemble.team_id = team;

    std::vector<double> probs;
    bool first = true;
    for (const auto& p : predictions) {
        if (!p.valid) continue;  // dropped, not imputed
        if (first) {
            ensemble.subject = p.subject;
            ensemble.week_index = p.week_index;
            first = false;
        } else if (p.subject != ensemble.subject || p.week_index != ensemble.week_index) {
            throw Error(ErrorKind::Input, "ensemble members span different (subject, week)");
        }
        double prob = p.rise_probability();
        ensemble.member_probs[role_name(p.role)] = prob;
        probs.push_back(prob);
    }
    if (probs.empty()) {
        throw Error(ErrorKind::Input, "no valid predictions to ensemble");
    }

    ensemble.mean_prob = stats::mean(probs);
    ensemble.decision = decide(ensemble.mean_prob);
    ensemble.disagreement = stats::stddev_pop(probs);
    return ensemble;
}

json ensemble_to_json(const TeamEnsemble& e) {
    return json{{"team", team_name(e.team_id)},
                {"subject", e.subject},
                {"week", e.week_index},
                {"member_probs", e.member_probs},
                {"mean_prob", e.mean_prob},
                {"decision", trend_text(e.decision)},
                {"disagreement", e.disagreement}};
}

namespace {

std::string prediction_block(const agents::AgentPrediction& p) {
    return std::string("Market trend: ") + trend_text(p.label) +
           "\nExplanation: " + p.explanation;
}

}  // namespace

InterteamResult build_interteam_context(const prompts::TemplateStore& store,
                                        const agents::CompletionRequest& crypto_request,
                                        const SharedMemory& memory) {
    InterteamResult out;
    out.request = crypto_request;
    if (!memory.complete()) {
        out.degraded = true;
        return out;
    }

    out.request.user = store.render(
        prompts::TemplateId::InterteamContext,
        {{"crypto_section", crypto_request.user},
         {"mf_input", memory.market_factor_input},
         {"mf_prediction", prediction_block(memory.market_factor_prediction)},
         {"news_input", memory.news_input},
         {"news_prediction", prediction_block(memory.news_prediction)}});
    return out;
}

}  // namespace ca::collab
