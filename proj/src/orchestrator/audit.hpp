#pragma once

#include <string>
#include <vector>

namespace ca::orch {

struct AuditResult {
    long prompts_scanned = 0;
    std::vector<std::string> violations;
};

// Scans every rendered prompt's provenance in {run_dir}/prompts.jsonl:
//  - prediction prompts for week t may reference data weeks <= t-1;
//  - annotation prompts for formation week t may reference data weeks <= t,
//    ground truth <= t+1, and training-split reference cutoffs
//    <= train_end_week.
AuditResult audit_no_lookahead(const std::string& run_dir, long train_end_week);

// Every (asset, week) in the run's factor tables and chart index must exist
// in the market-data cache.
AuditResult audit_referential_integrity(const std::string& run_dir, const std::string& data_dir);

}  // namespace ca::orch
