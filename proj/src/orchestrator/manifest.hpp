#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace ca::orch {

// Per-run manifest under runs/{run_id}/manifest.json. Carries no wall-clock
// fields so reruns of the same config are byte-identical.
class RunManifest {
public:
    RunManifest(std::string run_dir, std::string run_id, std::string config_hash);

    static RunManifest load(const std::string& run_dir);

    void set_input_hash(const std::string& name, const std::string& hash);
    void set_stage(const std::string& stage, const std::string& status);  // pending|done|failed
    std::string stage(const std::string& stage) const;
    void mark_week_complete(long week);
    long last_completed_week() const;  // -1 when none
    void archive_config(const nlohmann::json& resolved);

    void save() const;

    const std::string& run_id() const { return run_id_; }
    const std::string& run_dir() const { return run_dir_; }

private:
    std::string run_dir_;
    std::string run_id_;
    std::string config_hash_;
    std::string version_;
    std::map<std::string, std::string> input_hashes_;
    std::map<std::string, std::string> stages_;
    std::vector<long> completed_weeks_;
    nlohmann::json config_;
};

}  // namespace ca::orch
