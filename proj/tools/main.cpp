// Command-line driver; all engine access goes through the shared-library C
// API. Exit codes: 0 ok, 1 config error, 2 runtime error.

#include <CLI11.hpp>
#include <cryptoagents/cryptoagents.h>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

struct EngineDeleter {
    void operator()(ca_engine* e) const { ca_engine_destroy(e); }
};
using EnginePtr = std::unique_ptr<ca_engine, EngineDeleter>;

int status_to_exit(ca_status status) {
    switch (status) {
        case CA_OK: return 0;
        case CA_ERR_CONFIG: return 1;
        default: return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-agent crypto portfolio research engine"};
    app.require_subcommand(1);

    std::string config_path = "config.json";
    bool offline = false;
    bool no_interteam = false;
    app.add_option("-c,--config", config_path, "Path to the JSON run config")
        ->capture_default_str();
    app.add_flag("--offline", offline, "Force fixture mode for all data providers");
    app.add_flag("--no-interteam", no_interteam, "Disable interteam context sharing");

    auto* ingest = app.add_subcommand("ingest", "Fetch and cache market data");
    auto* factors = app.add_subcommand("factors", "Compute and export factor tables");
    auto* charts = app.add_subcommand("charts", "Render candlestick charts");
    auto* annotate = app.add_subcommand("annotate", "Generate explained training examples");
    auto* export_ft = app.add_subcommand("export-finetune", "Export per-expert datasets");
    bool export_only = false;
    auto* finetune = app.add_subcommand("finetune", "Launch fine-tune jobs and bind models");
    finetune->add_flag("--export-only", export_only, "Export datasets without launching jobs");
    auto* backtest = app.add_subcommand("backtest", "Run the weekly prediction/portfolio loop");
    auto* report = app.add_subcommand("report", "Evaluate the finished backtest");
    auto* trade = app.add_subcommand("trade", "Emit order intents for the latest allocation");
    bool dry_run = false;
    bool live = false;
    trade->add_flag("--dry-run", dry_run, "Write intents to a file; no network calls");
    trade->add_flag("--live", live, "(refused) live order routing is not implemented");
    auto* audit = app.add_subcommand("audit", "Scan rendered prompts for look-ahead violations");

    CLI11_PARSE(app, argc, argv);

    char errbuf[512] = {0};
    EnginePtr engine(ca_engine_create(config_path.c_str(), errbuf, sizeof(errbuf)));
    if (!engine) {
        std::fprintf(stderr, "error: %s\n", errbuf);
        return 1;
    }

    auto check = [&](ca_status status, const char* stage) {
        if (status != CA_OK) {
            std::fprintf(stderr, "%s failed: %s\n", stage, ca_last_error(engine.get()));
        } else {
            std::printf("%s: ok (run %s)\n", stage, ca_run_id(engine.get()));
        }
        return status_to_exit(status);
    };

    if (offline && ca_engine_set_option(engine.get(), "offline", "1") != CA_OK) {
        std::fprintf(stderr, "error: %s\n", ca_last_error(engine.get()));
        return 1;
    }
    if (no_interteam && ca_engine_set_option(engine.get(), "no-interteam", "1") != CA_OK) {
        std::fprintf(stderr, "error: %s\n", ca_last_error(engine.get()));
        return 1;
    }

    if (*ingest) return check(ca_ingest(engine.get()), "ingest");
    if (*factors) return check(ca_build_factors(engine.get()), "factors");
    if (*charts) return check(ca_render_charts(engine.get()), "charts");
    if (*annotate) return check(ca_annotate(engine.get()), "annotate");
    if (*export_ft) return check(ca_export_finetune(engine.get()), "export-finetune");
    if (*finetune) {
        ca_status status = ca_export_finetune(engine.get());
        if (status == CA_OK && !export_only) status = ca_finetune(engine.get());
        return check(status, export_only ? "export-finetune" : "finetune");
    }
    if (*backtest) return check(ca_backtest(engine.get()), "backtest");
    if (*report) return check(ca_report(engine.get()), "report");
    if (*trade) {
        if (live) {
            std::fprintf(stderr, "trade --live is not implemented; use --dry-run or a paper endpoint\n");
            return 1;
        }
        return check(ca_trade(engine.get(), dry_run ? 1 : 0), "trade");
    }
    if (*audit) {
        long violations = -1;
        ca_status status = ca_audit(engine.get(), &violations);
        if (status == CA_OK) {
            std::printf("audit: %ld violation(s)\n", violations);
            return violations == 0 ? 0 : 2;
        }
        return check(status, "audit");
    }
    return 1;
}
