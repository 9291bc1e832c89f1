#include "orchestrator/manifest.hpp"

#include <algorithm>
#include <filesystem>

#include "common/error.hpp"
#include "common/fsio.hpp"

namespace ca::orch {

using nlohmann::json;

namespace {
constexpr const char* kEngineVersion = "0.1.0";
}

RunManifest::RunManifest(std::string run_dir, std::string run_id, std::string config_hash)
    : run_dir_(std::move(run_dir)),
      run_id_(std::move(run_id)),
      config_hash_(std::move(config_hash)),
      version_(kEngineVersion) {}

RunManifest RunManifest::load(const std::string& run_dir) {
    json j = json::parse(fsio::read_text(run_dir + "/manifest.json"));
    RunManifest m(run_dir, j.at("run_id").get<std::string>(),
                  j.at("config_hash").get<std::string>());
    m.version_ = j.value("version", kEngineVersion);
    const json input_hashes = j.value("input_hashes", json::object());
    for (const auto& [k, v] : input_hashes.items()) m.input_hashes_[k] = v.get<std::string>();
    const json stages = j.value("stages", json::object());
    for (const auto& [k, v] : stages.items()) m.stages_[k] = v.get<std::string>();
    m.completed_weeks_ = j.value("completed_weeks", std::vector<long>{});
    m.config_ = j.value("config", json::object());
    return m;
}

void RunManifest::set_input_hash(const std::string& name, const std::string& hash) {
    input_hashes_[name] = hash;
}

void RunManifest::set_stage(const std::string& stage, const std::string& status) {
    stages_[stage] = status;
}

std::string RunManifest::stage(const std::string& stage) const {
    auto it = stages_.find(stage);
    return it == stages_.end() ? "pending" : it->second;
}

void RunManifest::mark_week_complete(long week) {
    if (std::find(completed_weeks_.begin(), completed_weeks_.end(), week) ==
        completed_weeks_.end()) {
        completed_weeks_.push_back(week);
        std::sort(completed_weeks_.begin(), completed_weeks_.end());
    }
}

long RunManifest::last_completed_week() const {
    return completed_weeks_.empty() ? -1 : completed_weeks_.back();
}

void RunManifest::archive_config(const json& resolved) { config_ = resolved; }

void RunManifest::save() const {
    json j = {{"run_id", run_id_},
              {"config_hash", config_hash_},
              {"version", version_},
              {"input_hashes", input_hashes_},
              {"stages", stages_},
              {"completed_weeks", completed_weeks_},
              {"config", config_}};
    fsio::write_text(run_dir_ + "/manifest.json", j.dump(2) + "\n");
}

}  // namespace ca::orch
