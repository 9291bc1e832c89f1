#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

#include "agents/agent.hpp"
#include "agents/types.hpp"
#include "prompts/prompt_forge.hpp"
#include "prompts/templates.hpp"

namespace ca::collab {

enum class TeamId { Market, Crypto };

inline const char* team_name(TeamId t) { return t == TeamId::Market ? "market" : "crypto"; }

struct TeamEnsemble {
    TeamId team_id = TeamId::Crypto;
    std::string subject;
    long week_index = 0;
    std::map<std::string, double> member_probs;  // role name -> linear rise prob
    double mean_prob = 0.0;
    Trend decision = Trend::Fall;
    double disagreement = 0.0;  // population std of member probs
};

nlohmann::json ensemble_to_json(const TeamEnsemble& e);

// Rise iff the mean probability strictly exceeds 0.5; a tie holds cash.
Trend decide(double mean_prob);

// Arithmetic mean of the members' linear rise probabilities. Invalid
// predictions are dropped; zero valid members -> Error(Input). All members
// must share (subject, week).
TeamEnsemble intrateam_ensemble(TeamId team,
                                const std::vector<agents::AgentPrediction>& predictions);

// Market-team inputs and predictions for one week, written once by the
// market stage and read by every crypto-team request of that week.
struct SharedMemory {
    long week_index = 0;
    std::string market_factor_input;
    agents::AgentPrediction market_factor_prediction;
    std::string news_input;
    agents::AgentPrediction news_prediction;

    bool complete() const {
        return market_factor_prediction.valid && news_prediction.valid &&
               market_factor_prediction.week_index == week_index &&
               news_prediction.week_index == week_index;
    }
};

// Wraps a crypto expert's prompt with the market team's inputs and
// predictions, in the order: crypto section, market-factor input,
// market-factor prediction, news input, news prediction. Incomplete memory
// degrades to the plain crypto prompt with `degraded` set.
struct InterteamResult {
    agents::CompletionRequest request;
    bool degraded = false;
};

InterteamResult build_interteam_context(const prompts::TemplateStore& store,
                                        const agents::CompletionRequest& crypto_request,
                                        const SharedMemory& memory);

}  // namespace ca::collab
