/* pulsechain shared-library API.
 *
 * Opaque handles plus status codes; every function that can fail returns a
 * pulse_status and leaves a human-readable message in pulse_last_error().
 * Strings returned through char** outputs are owned by the caller and must
 * be released with pulse_string_free().
 */
#ifndef PULSECHAIN_PULSE_H
#define PULSECHAIN_PULSE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pulse_corpus pulse_corpus;
typedef struct pulse_backend pulse_backend;

typedef enum pulse_status {
  PULSE_OK = 0,
  PULSE_ERR_IO = 1,
  PULSE_ERR_CONFIG = 2,
  PULSE_ERR_MANIFEST_SCHEMA = 3,
  PULSE_ERR_MISSING_DOCUMENT = 4,
  PULSE_ERR_NOT_FOUND = 5,
  PULSE_ERR_OFFLINE_UNAVAILABLE = 6,
  PULSE_ERR_TRANSCRIPT_MISS = 7,
  PULSE_ERR_ENDPOINT = 8,
  PULSE_ERR_AUTH_MISSING = 9,
  PULSE_ERR_DIMENSION_MISMATCH = 10,
  PULSE_ERR_EMPTY_TEXT = 11,
  PULSE_ERR_K_EXCEEDS_N = 12,
  PULSE_ERR_AMBIGUOUS_INTENT = 13,
  PULSE_ERR_PARSE_FAILURE = 14,
  PULSE_ERR_EMPTY_CLUSTER = 15,
  PULSE_ERR_EXTRACTION_FAILED = 16,
  PULSE_ERR_DUPLICATE_DOC = 17,
  PULSE_ERR_EMPTY_CHAIN = 18,
  PULSE_ERR_NO_TABLE = 19,
  PULSE_ERR_INVALID_VALUE = 20,
  PULSE_ERR_SIZE_MISMATCH = 21,
  PULSE_ERR_TOO_SMALL = 22,
  PULSE_ERR_NO_SAMPLES = 23,
  PULSE_ERR_EMPTY_INPUT = 24,
  PULSE_ERR_INTERNAL = 99
} pulse_status;

const char* pulse_version(void);
const char* pulse_status_name(pulse_status status);

/* Thread-local message for the most recent failure on this thread. */
const char* pulse_last_error(void);

void pulse_string_free(char* s);

/* ---- corpus ---------------------------------------------------------- */

pulse_status pulse_corpus_load(const char* manifest_path, pulse_corpus** out);
void pulse_corpus_free(pulse_corpus* corpus);

int pulse_corpus_cluster_count(const pulse_corpus* corpus);
int pulse_corpus_document_count(const pulse_corpus* corpus);

/* Counts per split plus paper averages, as a JSON document. */
pulse_status pulse_corpus_summary(const pulse_corpus* corpus, char** out_json);

/* Citation edges as a JSON array of {from, to, via_reference}. */
pulse_status pulse_corpus_citation_graph(pulse_corpus* corpus, char** out_json);

/* Metadata fetch: live GET <endpoint>/<paper_id>, or <fixture_dir>/<id>.json
 * when offline is nonzero. */
pulse_status pulse_fetch_metadata(const char* paper_id, const char* endpoint,
                                  const char* fixture_dir, int offline, char** out_json);

/* ---- backend --------------------------------------------------------- */

typedef struct pulse_backend_options {
  const char* mode;            /* "live" | "record" | "replay" */
  const char* endpoint;        /* required for live/record */
  const char* transcript_path; /* required for record/replay */
  int parallelism;             /* <=0 -> default 4 */
  int max_attempts;            /* <=0 -> default 3 */
  int backoff_base_ms;         /* <=0 -> default 500 */
} pulse_backend_options;

pulse_status pulse_backend_open(const pulse_backend_options* options, pulse_backend** out);
void pulse_backend_free(pulse_backend* backend);

/* Network attempts made so far; stays 0 for replay backends. */
long pulse_backend_network_attempts(const pulse_backend* backend);

/* ---- pipeline -------------------------------------------------------- */

typedef struct pulse_run_options {
  const char* out_dir;    /* default "out" */
  const char* prompt_dir; /* NULL -> builtin templates */
  int parallelism;        /* <=0 -> 4 */
  int repair_limit;       /* <=0 -> 3 */
  int raster_width;       /* <=0 -> 1024 */
  int raster_height;      /* <=0 -> 768 */
} pulse_run_options;

/* Classify + dispatch one instruction over one cluster; writes the artifact
 * tree and returns the run report as JSON. */
pulse_status pulse_run(pulse_corpus* corpus, pulse_backend* backend, const char* cluster_id,
                       const char* instruction, const pulse_run_options* options,
                       char** report_json);

/* Embed abstracts, K-Means with the given k/seed, write clusters_out.json
 * to out_path, return a summary (assignments + inertia) as JSON. */
pulse_status pulse_cluster_documents(pulse_corpus* corpus, pulse_backend* backend, int k,
                                     unsigned seed, const char* embed_model,
                                     const char* out_path, char** summary_json);

/* Compare golden/actual artifact directories; write eval_report.json when
 * report_path is non-NULL. */
pulse_status pulse_eval_dirs(const char* golden_dir, const char* actual_dir,
                             const char* report_path, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* PULSECHAIN_PULSE_H */
