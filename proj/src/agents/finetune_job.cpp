#include "agents/finetune_job.hpp"

#include <json.hpp>

#include <filesystem>
#include <thread>

#include "common/error.hpp"
#include "common/fsio.hpp"

namespace ca::agents {

using nlohmann::json;

namespace {

std::string state_path(const FinetuneLaunchOptions& options, RoleId role) {
    return options.state_dir + "/finetune_" + role_name(role) + ".json";
}

void save_state(const std::string& path, const std::string& job_id, const std::string& dataset,
                const std::string& state, const std::string& model_ref) {
    json j = {{"job_id", job_id}, {"dataset", dataset}, {"state", state}, {"model_ref", model_ref}};
    fsio::write_text(path, j.dump(2) + "\n");
}

}  // namespace

std::string launch_finetune(FinetuneProvider& provider, const std::string& dataset_path,
                            RoleId role, const FinetuneLaunchOptions& options) {
    const std::string path = state_path(options, role);

    std::string job_id;
    if (std::filesystem::exists(path)) {
        json existing = json::parse(fsio::read_text(path));
        std::string state = existing.value("state", "");
        if (state == "succeeded") return existing.at("model_ref").get<std::string>();
        if (state == "pending" || state == "running") {
            job_id = existing.at("job_id").get<std::string>();
        }
    }

    if (job_id.empty()) {
        if (!std::filesystem::exists(dataset_path) ||
            std::filesystem::file_size(dataset_path) == 0) {
            throw Error(ErrorKind::Input, "fine-tune dataset missing or empty: " + dataset_path);
        }
        job_id = provider.create_job(dataset_path, options.base_model);
        save_state(path, job_id, dataset_path, "pending", "");
    }

    for (int poll = 0; poll < options.max_polls; ++poll) {
        FinetuneJobStatus status = provider.job_status(job_id);
        if (status.state == "succeeded") {
            save_state(path, job_id, dataset_path, "succeeded", status.model_ref);
            return status.model_ref;
        }
        if (status.state == "failed") {
            save_state(path, job_id, dataset_path, "failed", "");
            throw Error(ErrorKind::Provider,
                        "fine-tune job " + job_id + " failed: " + status.message);
        }
        save_state(path, job_id, dataset_path, status.state, "");
        if (options.poll_interval_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(options.poll_interval_ms));
        }
    }
    throw Error(ErrorKind::State,
                "fine-tune job " + job_id + " still pending after polling budget; rerun to resume");
}

}  // namespace ca::agents
