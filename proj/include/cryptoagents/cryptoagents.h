/* C API for the cryptoagents engine.
 *
 * All functionality is reachable through an opaque engine handle created from
 * a JSON config file. Stage functions return CA_OK (0) on success; on failure
 * they return a status code and the message is available via ca_last_error()
 * until the next call on the same handle. Handles are not thread-safe; use
 * one handle per thread.
 */
#ifndef CRYPTOAGENTS_H
#define CRYPTOAGENTS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ca_engine ca_engine;

typedef enum ca_status {
    CA_OK = 0,
    CA_ERR_CONFIG = 1,  /* bad config, bad arguments, unknown option */
    CA_ERR_RUNTIME = 2  /* any failure while running a stage */
} ca_status;

const char* ca_version(void);

/* NULL on failure; when errbuf is non-NULL the message is copied into it. */
ca_engine* ca_engine_create(const char* config_path, char* errbuf, size_t errbuf_len);
void ca_engine_destroy(ca_engine* engine);

/* Config overrides applied before stages run, e.g. ("offline", "1"),
 * ("no-interteam", "1"), ("test-end-date", "2024-01-07"). */
ca_status ca_engine_set_option(ca_engine* engine, const char* key, const char* value);

const char* ca_last_error(const ca_engine* engine);
const char* ca_run_id(const ca_engine* engine);
const char* ca_run_dir(const ca_engine* engine);

/* Pipeline stages, in order. Each is idempotent. */
ca_status ca_ingest(ca_engine* engine);
ca_status ca_build_factors(ca_engine* engine);
ca_status ca_render_charts(ca_engine* engine);
ca_status ca_annotate(ca_engine* engine);
ca_status ca_export_finetune(ca_engine* engine);
ca_status ca_finetune(ca_engine* engine);
ca_status ca_backtest(ca_engine* engine);
ca_status ca_report(ca_engine* engine);
/* dry_run != 0 writes order intents to a file instead of posting them. */
ca_status ca_trade(ca_engine* engine, int dry_run);

/* No-look-ahead provenance audit over every rendered prompt of the run.
 * Returns CA_OK with *violations = 0 when clean. */
ca_status ca_audit(ca_engine* engine, long* violations);

#ifdef __cplusplus
}
#endif

#endif /* CRYPTOAGENTS_H */
