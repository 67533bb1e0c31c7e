#include "pulsechain/pulse.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "core/backend.hpp"
#include "core/clusterer.hpp"
#include "core/corpus.hpp"
#include "core/error.hpp"
#include "core/io.hpp"
#include "core/metrics.hpp"
#include "core/pipeline.hpp"

using namespace pulse;

struct pulse_corpus {
  Corpus corpus;
};

struct pulse_backend {
  Backend backend;
  explicit pulse_backend(BackendConfig config) : backend(std::move(config)) {}
};

namespace {

thread_local std::string g_last_error;

pulse_status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return PULSE_ERR_IO;
    case ErrorCode::Config: return PULSE_ERR_CONFIG;
    case ErrorCode::ManifestSchema: return PULSE_ERR_MANIFEST_SCHEMA;
    case ErrorCode::MissingDocument: return PULSE_ERR_MISSING_DOCUMENT;
    case ErrorCode::NotFound: return PULSE_ERR_NOT_FOUND;
    case ErrorCode::OfflineUnavailable: return PULSE_ERR_OFFLINE_UNAVAILABLE;
    case ErrorCode::TranscriptMiss: return PULSE_ERR_TRANSCRIPT_MISS;
    case ErrorCode::EndpointError: return PULSE_ERR_ENDPOINT;
    case ErrorCode::AuthMissing: return PULSE_ERR_AUTH_MISSING;
    case ErrorCode::DimensionMismatch: return PULSE_ERR_DIMENSION_MISMATCH;
    case ErrorCode::EmptyText: return PULSE_ERR_EMPTY_TEXT;
    case ErrorCode::KExceedsN: return PULSE_ERR_K_EXCEEDS_N;
    case ErrorCode::AmbiguousIntent: return PULSE_ERR_AMBIGUOUS_INTENT;
    case ErrorCode::ParseFailure: return PULSE_ERR_PARSE_FAILURE;
    case ErrorCode::EmptyCluster: return PULSE_ERR_EMPTY_CLUSTER;
    case ErrorCode::ExtractionFailed: return PULSE_ERR_EXTRACTION_FAILED;
    case ErrorCode::DuplicateDoc: return PULSE_ERR_DUPLICATE_DOC;
    case ErrorCode::EmptyChain: return PULSE_ERR_EMPTY_CHAIN;
    case ErrorCode::NoTable: return PULSE_ERR_NO_TABLE;
    case ErrorCode::InvalidValue: return PULSE_ERR_INVALID_VALUE;
    case ErrorCode::SizeMismatch: return PULSE_ERR_SIZE_MISMATCH;
    case ErrorCode::TooSmall: return PULSE_ERR_TOO_SMALL;
    case ErrorCode::NoSamples: return PULSE_ERR_NO_SAMPLES;
    case ErrorCode::EmptyInput: return PULSE_ERR_EMPTY_INPUT;
  }
  return PULSE_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
pulse_status guarded(Fn&& fn) {
  try {
    fn();
    return PULSE_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PULSE_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return PULSE_ERR_INTERNAL;
  }
}

pulse_status invalid_argument(const char* message) {
  g_last_error = message;
  return PULSE_ERR_CONFIG;
}

}  // namespace

extern "C" {

const char* pulse_version(void) { return "0.1.0"; }

const char* pulse_status_name(pulse_status status) {
  switch (status) {
    case PULSE_OK: return "ok";
    case PULSE_ERR_IO: return "io";
    case PULSE_ERR_CONFIG: return "config";
    case PULSE_ERR_MANIFEST_SCHEMA: return "manifest_schema";
    case PULSE_ERR_MISSING_DOCUMENT: return "missing_document";
    case PULSE_ERR_NOT_FOUND: return "not_found";
    case PULSE_ERR_OFFLINE_UNAVAILABLE: return "offline_unavailable";
    case PULSE_ERR_TRANSCRIPT_MISS: return "transcript_miss";
    case PULSE_ERR_ENDPOINT: return "endpoint";
    case PULSE_ERR_AUTH_MISSING: return "auth_missing";
    case PULSE_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case PULSE_ERR_EMPTY_TEXT: return "empty_text";
    case PULSE_ERR_K_EXCEEDS_N: return "k_exceeds_n";
    case PULSE_ERR_AMBIGUOUS_INTENT: return "ambiguous_intent";
    case PULSE_ERR_PARSE_FAILURE: return "parse_failure";
    case PULSE_ERR_EMPTY_CLUSTER: return "empty_cluster";
    case PULSE_ERR_EXTRACTION_FAILED: return "extraction_failed";
    case PULSE_ERR_DUPLICATE_DOC: return "duplicate_doc";
    case PULSE_ERR_EMPTY_CHAIN: return "empty_chain";
    case PULSE_ERR_NO_TABLE: return "no_table";
    case PULSE_ERR_INVALID_VALUE: return "invalid_value";
    case PULSE_ERR_SIZE_MISMATCH: return "size_mismatch";
    case PULSE_ERR_TOO_SMALL: return "too_small";
    case PULSE_ERR_NO_SAMPLES: return "no_samples";
    case PULSE_ERR_EMPTY_INPUT: return "empty_input";
    case PULSE_ERR_INTERNAL: return "internal";
  }
  return "internal";
}

const char* pulse_last_error(void) { return g_last_error.c_str(); }

void pulse_string_free(char* s) { std::free(s); }

pulse_status pulse_corpus_load(const char* manifest_path, pulse_corpus** out) {
  if (manifest_path == nullptr || out == nullptr)
    return invalid_argument("pulse_corpus_load: null argument");
  *out = nullptr;
  return guarded([&]() {
    auto handle = new pulse_corpus{load_manifest(manifest_path)};
    *out = handle;
  });
}

void pulse_corpus_free(pulse_corpus* corpus) { delete corpus; }

int pulse_corpus_cluster_count(const pulse_corpus* corpus) {
  return corpus == nullptr ? 0 : static_cast<int>(corpus->corpus.clusters.size());
}

int pulse_corpus_document_count(const pulse_corpus* corpus) {
  return corpus == nullptr ? 0 : static_cast<int>(corpus->corpus.documents.size());
}

pulse_status pulse_corpus_summary(const pulse_corpus* corpus, char** out_json) {
  if (corpus == nullptr || out_json == nullptr)
    return invalid_argument("pulse_corpus_summary: null argument");
  return guarded([&]() { *out_json = dup_string(corpus_summary(corpus->corpus).dump(2) + "\n"); });
}

pulse_status pulse_corpus_citation_graph(pulse_corpus* corpus, char** out_json) {
  if (corpus == nullptr || out_json == nullptr)
    return invalid_argument("pulse_corpus_citation_graph: null argument");
  return guarded([&]() {
    auto edges = build_citation_graph(corpus->corpus);
    nlohmann::json array = nlohmann::json::array();
    for (const auto& edge : edges) {
      nlohmann::json ej;
      ej["from"] = edge.from_doc;
      ej["to"] = edge.to_doc;
      ej["via_reference"] = edge.via_reference;
      array.push_back(ej);
    }
    *out_json = dup_string(array.dump(2) + "\n");
  });
}

pulse_status pulse_fetch_metadata(const char* paper_id, const char* endpoint,
                                  const char* fixture_dir, int offline, char** out_json) {
  if (paper_id == nullptr || out_json == nullptr)
    return invalid_argument("pulse_fetch_metadata: null argument");
  return guarded([&]() {
    MetadataSource source;
    source.endpoint = endpoint ? endpoint : "";
    source.fixture_dir = fixture_dir ? fixture_dir : "";
    source.offline = offline != 0;
    Metadata meta = fetch_metadata(paper_id, source);
    nlohmann::json mj;
    mj["title"] = meta.title;
    mj["date"] = meta.date;
    mj["venue"] = meta.venue;
    *out_json = dup_string(mj.dump(2) + "\n");
  });
}

pulse_status pulse_backend_open(const pulse_backend_options* options, pulse_backend** out) {
  if (options == nullptr || options->mode == nullptr || out == nullptr)
    return invalid_argument("pulse_backend_open: null argument");
  *out = nullptr;
  return guarded([&]() {
    BackendConfig config;
    config.mode = parse_backend_mode(options->mode);
    config.endpoint = options->endpoint ? options->endpoint : "";
    config.transcript_path = options->transcript_path ? options->transcript_path : "";
    if (options->parallelism > 0) config.parallelism = options->parallelism;
    if (options->max_attempts > 0) config.max_attempts = options->max_attempts;
    if (options->backoff_base_ms > 0) config.backoff_base_ms = options->backoff_base_ms;
    *out = new pulse_backend(std::move(config));
  });
}

void pulse_backend_free(pulse_backend* backend) { delete backend; }

long pulse_backend_network_attempts(const pulse_backend* backend) {
  return backend == nullptr ? 0 : backend->backend.stats().network_attempts.load();
}

pulse_status pulse_run(pulse_corpus* corpus, pulse_backend* backend, const char* cluster_id,
                       const char* instruction, const pulse_run_options* options,
                       char** report_json) {
  if (corpus == nullptr || backend == nullptr || cluster_id == nullptr || instruction == nullptr)
    return invalid_argument("pulse_run: null argument");
  return guarded([&]() {
    RunOptions run_options;
    if (options != nullptr) {
      if (options->out_dir != nullptr) run_options.out_dir = options->out_dir;
      if (options->prompt_dir != nullptr) run_options.prompt_dir = options->prompt_dir;
      if (options->parallelism > 0) run_options.parallelism = options->parallelism;
      if (options->repair_limit > 0) run_options.repair_limit = options->repair_limit;
      if (options->raster_width > 0) run_options.raster_width = options->raster_width;
      if (options->raster_height > 0) run_options.raster_height = options->raster_height;
    }
    Instruction inst;
    inst.raw = instruction;
    inst.cluster_id = cluster_id;
    PromptSet prompts = PromptSet::from_dir(run_options.prompt_dir);
    inst.intent = classify_intent(inst.raw, &backend->backend, prompts, run_options.plan_model);
    RunReport report = run(inst, corpus->corpus, backend->backend, run_options);
    if (report_json != nullptr) *report_json = dup_string(report.to_json().dump(2) + "\n");
  });
}

pulse_status pulse_cluster_documents(pulse_corpus* corpus, pulse_backend* backend, int k,
                                     unsigned seed, const char* embed_model,
                                     const char* out_path, char** summary_json) {
  if (corpus == nullptr || backend == nullptr)
    return invalid_argument("pulse_cluster_documents: null argument");
  return guarded([&]() {
    std::vector<const Document*> docs;
    docs.reserve(corpus->corpus.documents.size());
    for (const auto& doc : corpus->corpus.documents) docs.push_back(&doc);
    std::string model = embed_model ? embed_model : "abstract-embedder";
    auto vectors = embed_abstracts(docs, backend->backend, model);
    ClusterAssignment assignment = assign_clusters(vectors, k, seed);
    nlohmann::json out = clusters_out_json(corpus->corpus, assignment);
    if (out_path != nullptr) write_file(out_path, out.dump(2) + "\n");

    nlohmann::json summary;
    summary["k"] = assignment.k;
    summary["inertia"] = assignment.inertia;
    summary["iterations"] = assignment.inertia_trace.size();
    nlohmann::json assignments;
    for (const auto& [doc_id, index] : assignment.assignments) assignments[doc_id] = index;
    summary["assignments"] = assignments;
    if (summary_json != nullptr) *summary_json = dup_string(summary.dump(2) + "\n");
  });
}

pulse_status pulse_eval_dirs(const char* golden_dir, const char* actual_dir,
                             const char* report_path, char** report_json) {
  if (golden_dir == nullptr || actual_dir == nullptr)
    return invalid_argument("pulse_eval_dirs: null argument");
  return guarded([&]() {
    nlohmann::json report = eval_directories(
        golden_dir, actual_dir, report_path ? std::filesystem::path(report_path)
                                            : std::filesystem::path());
    if (report_json != nullptr) *report_json = dup_string(report.dump(2) + "\n");
  });
}

}  // extern "C"
