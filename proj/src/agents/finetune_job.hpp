#pragma once

#include <string>

#include "agents/provider.hpp"
#include "common/roles.hpp"

namespace ca::agents {

struct FinetuneLaunchOptions {
    std::string base_model = "gpt-4o-2024-08-06";
    std::string state_dir;       // pending-state files live here
    int poll_interval_ms = 0;    // 0 in tests
    int max_polls = 100;
};

// Submits the dataset as a fine-tune job and polls to a terminal state,
// persisting progress to {state_dir}/finetune_{role}.json. If that file holds
// a non-terminal job, polling resumes without resubmitting. Returns the
// fine-tuned model_ref on success; throws Error(Provider) on rejection or
// failure, Error(State) when polling budget runs out (state stays resumable).
std::string launch_finetune(FinetuneProvider& provider, const std::string& dataset_path,
                            RoleId role, const FinetuneLaunchOptions& options);

}  // namespace ca::agents
