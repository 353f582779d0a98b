/* C interface for the oflx shared library.
 *
 * All objects are opaque handles created and destroyed by the library.
 * Every fallible call returns an oflx_status; on failure the handle output
 * (if any) is left untouched and oflx_last_error() describes the problem
 * for the calling thread. Strings returned through `const char*` are owned
 * by the handle they came from; strings returned through `char**` must be
 * released with oflx_string_free().
 */
#ifndef OFLX_H
#define OFLX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum oflx_status {
  OFLX_OK = 0,
  OFLX_ERR_INVALID = 1,  /* malformed arguments, specs, or file contents */
  OFLX_ERR_DOMAIN = 2,   /* values outside the mathematical preconditions */
  OFLX_ERR_IO = 3,       /* file system failures */
  OFLX_ERR_INTERNAL = 4  /* unexpected condition; report as a bug */
} oflx_status;

typedef struct oflx_field oflx_field;    /* one velocity snapshot */
typedef struct oflx_series oflx_series;  /* a validated time series */
typedef struct oflx_report oflx_report;  /* a rendered analysis report */

/* Semantic version of the library. */
const char* oflx_version(void);

/* Message for the most recent failing call on this thread ("" if none). */
const char* oflx_last_error(void);

/* Caps the worker pool (n < 1 restores the OFLX_THREADS / hardware default).
 * Results are bit-identical at every worker count. */
void oflx_set_threads(int n);

void oflx_field_free(oflx_field* f);
void oflx_series_free(oflx_series* s);
void oflx_report_free(oflx_report* r);
void oflx_string_free(char* s);

/* --- generation ---------------------------------------------------------
 * spec_json is a FieldSpec document, e.g.
 *   {"kind":"lacunary","grid":{"nx":32,"ny":32,"nzHalf":32,"Lz":3.14},
 *    "alpha":0.4,"modeCount":4,"seed":7,
 *    "modulation":"steady","times":[0.0,0.1,0.2]}
 * Deterministic for a fixed spec. */
oflx_status oflx_field_generate(const char* spec_json, oflx_field** out);
oflx_status oflx_series_generate(const char* spec_json, oflx_series** out);

/* --- snapshot I/O (OFLX1 binary format) -------------------------------- */
oflx_status oflx_field_read(const char* path, oflx_field** out);
oflx_status oflx_field_write(const oflx_field* f, const char* path);

/* Builds a series from snapshot files; times are taken from the headers
 * and must start at 0 and increase strictly. */
oflx_status oflx_series_from_files(const char* const* paths, size_t count,
                                   oflx_series** out);

/* --- introspection ------------------------------------------------------ */
oflx_status oflx_field_grid(const oflx_field* f, uint32_t* nx, uint32_t* ny,
                            uint32_t* nz_half, double* lz, double* time);

/* Snapshot metadata (grid, time, support tag) as a JSON document. */
oflx_status oflx_field_meta_json(const oflx_field* f, char** out);

oflx_status oflx_series_size(const oflx_series* s, size_t* n);

/* Borrowed reference, valid while the series lives; do not free. */
oflx_status oflx_series_field(const oflx_series* s, size_t k,
                              const oflx_field** out);

/* SHA-256 of a file, hex-encoded into hex64 (64 chars + NUL). */
oflx_status oflx_file_digest(const char* path, char hex64[65]);

/* --- analyses -----------------------------------------------------------
 * options_json fields (all optional unless noted):
 *   verify:    epsilon, gamma, tol, boundaryTol
 *   structure: directions ([[1,0,0],...]), scaleCount, baseStep
 *   budget:    epsilons (required array), t, identityTol
 *   strip:     epsilons (required array)
 *   modulus:   delta
 * config_json (may be NULL or "") is embedded verbatim in the report for
 * reproducibility; callers put the resolved run configuration and input
 * digests there. */
oflx_status oflx_run_verify(const oflx_series* u, const char* options_json,
                            const char* config_json, oflx_report** out);
oflx_status oflx_run_structure(const oflx_series* u, const char* options_json,
                               const char* config_json, oflx_report** out);
oflx_status oflx_run_budget(const oflx_series* u, const char* options_json,
                            const char* config_json, oflx_report** out);
oflx_status oflx_run_strip(const oflx_series* u, const char* options_json,
                           const char* config_json, oflx_report** out);
oflx_status oflx_run_modulus(const oflx_series* u, const char* options_json,
                             const char* config_json, oflx_report** out);

/* Owned by the report; valid until oflx_report_free. */
const char* oflx_report_json(const oflx_report* r);
const char* oflx_report_csv(const oflx_report* r);

/* 1 if every check in the report passed, else 0. */
int oflx_report_passed(const oflx_report* r);

#ifdef __cplusplus
}
#endif

#endif /* OFLX_H */
