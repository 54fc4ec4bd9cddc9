/* moldflux: steady-state mold heat-flux estimation library (C API).
 *
 * All functions return MF_OK (0) on success or a negative mf_status code.
 * The thread-local message for the most recent failure is available from
 * mf_last_error(). Handles are opaque and must be released with the matching
 * free function.
 */
#ifndef MOLDFLUX_H
#define MOLDFLUX_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mf_status {
    MF_OK = 0,
    MF_ERR_CONFIG = -1,      /* bad configuration / unknown key / integrity */
    MF_ERR_NUMERICAL = -2,   /* no convergence, singular system, stagnation */
    MF_ERR_IO = -3,          /* file read/write failure */
    MF_ERR_INVALID = -4,     /* bad argument to an API call */
    MF_ERR_INTERNAL = -5
} mf_status;

/* Message describing the most recent failure on this thread ("" if none). */
const char* mf_last_error(void);

/* ---- configuration ---------------------------------------------------- */

typedef struct mf_config mf_config;

mf_config* mf_config_new(void);
void mf_config_free(mf_config* cfg);

/* Applies a named preset: "analytical" or "industrial". */
mf_status mf_config_preset(mf_config* cfg, const char* name);

/* Loads an INI-style configuration file over the current values. */
mf_status mf_config_load(mf_config* cfg, const char* path);

/* Sets one "section.key" entry, e.g. ("method.eta", "0.3"). */
mf_status mf_config_set(mf_config* cfg, const char* key, const char* value);

/* Writes the canonical value of one key into buf (NUL-terminated,
 * truncating to buf_len). */
mf_status mf_config_get(const mf_config* cfg, const char* key, char* buf,
                        size_t buf_len);

/* ---- execution -------------------------------------------------------- */

/* Runs one subcommand: direct, converge, invert, offline, online,
 * noise-study, eta-sweep, pg-sweep, inspect-artifact. Outputs and a
 * manifest JSON are written under the configured output directory. When
 * report/report_len are given, a short human-readable report is copied
 * into report (NUL-terminated, truncating). */
mf_status mf_run(const mf_config* cfg, const char* subcommand, char* report,
                 size_t report_len);

/* ---- artifact inspection ---------------------------------------------- */

typedef struct mf_artifact mf_artifact;

mf_status mf_artifact_open(const char* path, mf_artifact** out);
void mf_artifact_free(mf_artifact* art);

/* Basis size M of an open artifact. */
mf_status mf_artifact_size(const mf_artifact* art, int* m);

/* Metadata hash identifying the grid/physics/basis the artifact was built
 * for. */
mf_status mf_artifact_hash(const mf_artifact* art, unsigned long long* hash);

#ifdef __cplusplus
}
#endif

#endif /* MOLDFLUX_H */
