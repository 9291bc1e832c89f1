#include "cryptoagents/cryptoagents.h"

#include <cstring>
#include <memory>
#include <string>

#include "common/error.hpp"
#include "orchestrator/audit.hpp"
#include "orchestrator/config.hpp"
#include "orchestrator/pipeline.hpp"

struct ca_engine {
    std::unique_ptr<ca::orch::Engine> engine;
    std::string last_error;
    std::string run_id;
    std::string run_dir;
};

namespace {

ca_status fail(ca_engine* handle, const ca::Error& e) {
    handle->last_error = std::string(ca::error_kind_name(e.kind())) + ": " + e.what();
    return e.kind() == ca::ErrorKind::Config ? CA_ERR_CONFIG : CA_ERR_RUNTIME;
}

template <typename Fn>
ca_status run_stage(ca_engine* handle, Fn&& fn) {
    if (!handle) return CA_ERR_CONFIG;
    handle->last_error.clear();
    try {
        fn();
        return CA_OK;
    } catch (const ca::Error& e) {
        return fail(handle, e);
    } catch (const std::exception& e) {
        handle->last_error = e.what();
        return CA_ERR_RUNTIME;
    }
}

void refresh_ids(ca_engine* handle) {
    handle->run_id = handle->engine->config().run_id;
    handle->run_dir = handle->engine->run_dir();
}

}  // namespace

extern "C" {

const char* ca_version(void) { return "0.1.0"; }

ca_engine* ca_engine_create(const char* config_path, char* errbuf, size_t errbuf_len) {
    auto describe = [&](const std::string& message) {
        if (errbuf && errbuf_len > 0) {
            std::strncpy(errbuf, message.c_str(), errbuf_len - 1);
            errbuf[errbuf_len - 1] = '\0';
        }
    };
    if (!config_path) {
        describe("config_path is null");
        return nullptr;
    }
    try {
        auto handle = std::make_unique<ca_engine>();
        handle->engine = std::make_unique<ca::orch::Engine>(ca::orch::load_config(config_path));
        refresh_ids(handle.get());
        return handle.release();
    } catch (const std::exception& e) {
        describe(e.what());
        return nullptr;
    }
}

void ca_engine_destroy(ca_engine* engine) { delete engine; }

ca_status ca_engine_set_option(ca_engine* engine, const char* key, const char* value) {
    if (!engine || !key || !value) return CA_ERR_CONFIG;
    return run_stage(engine, [&] {
        auto config = engine->engine->config();
        ca::orch::apply_override(config, key, value);
        engine->engine = std::make_unique<ca::orch::Engine>(std::move(config));
        refresh_ids(engine);
    });
}

const char* ca_last_error(const ca_engine* engine) {
    return engine ? engine->last_error.c_str() : "null engine";
}

const char* ca_run_id(const ca_engine* engine) { return engine ? engine->run_id.c_str() : ""; }

const char* ca_run_dir(const ca_engine* engine) { return engine ? engine->run_dir.c_str() : ""; }

ca_status ca_ingest(ca_engine* engine) {
    return run_stage(engine, [&] { engine->engine->ingest(); });
}

ca_status ca_build_factors(ca_engine* engine) {
    return run_stage(engine, [&] { engine->engine->build_factors(); });
}

ca_status ca_render_charts(ca_engine* engine) {
    return run_stage(engine, [&] { engine->engine->render_charts(); });
}

ca_status ca_annotate(ca_engine* engine) {
    return run_stage(engine, [&] { engine->engine->annotate(); });
}

ca_status ca_export_finetune(ca_engine* engine) {
    return run_stage(engine, [&] { engine->engine->export_finetune(); });
}

ca_status ca_finetune(ca_engine* engine) {
    return run_stage(engine, [&] { engine->engine->finetune(); });
}

ca_status ca_backtest(ca_engine* engine) {
    return run_stage(engine, [&] { engine->engine->backtest(); });
}

ca_status ca_report(ca_engine* engine) {
    return run_stage(engine, [&] { engine->engine->report(); });
}

ca_status ca_trade(ca_engine* engine, int dry_run) {
    return run_stage(engine, [&] { engine->engine->trade(dry_run != 0); });
}

ca_status ca_audit(ca_engine* engine, long* violations) {
    return run_stage(engine, [&] {
        auto result = ca::orch::audit_no_lookahead(engine->engine->run_dir(),
                                                   engine->engine->config().train_end_week());
        if (violations) *violations = static_cast<long>(result.violations.size());
    });
}

}  // extern "C"
