#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/backend.hpp"
#include "core/corpus.hpp"
#include "core/extracted.hpp"
#include "core/prompts.hpp"

namespace pulse {

enum class Intent { MethodTracking, ExperimentalAnalysis };

const char* intent_name(Intent intent);  // output directory names

struct Instruction {
  std::string raw;
  Intent intent = Intent::MethodTracking;
  std::string cluster_id;
};

/// Keyword rules decide first; a configured backend breaks ties; otherwise
/// AmbiguousIntent.
Intent classify_intent(const std::string& raw, Backend* backend,
                       const PromptSet& prompts = PromptSet::builtin(),
                       const std::string& model = "plan-router");

/// Eq-style per-document normalization: abstract, introduction, tables,
/// references, timestamp.
ExtractedDocument extract_document(const Document& doc);

struct RunOptions {
  std::string out_dir = "out";
  int parallelism = 4;
  int repair_limit = 3;
  int raster_width = 1024;
  int raster_height = 768;
  std::string mmap_model = "mmap-extractor";
  std::string lchart_model = "lchart-extractor";
  std::string plan_model = "plan-router";
  std::string prompt_dir;  // empty -> builtin templates
  bool zero_timings = false;  // forced on in Replay mode
};

struct DocFailure {
  std::string doc_id;
  std::string error;
};

struct RunReport {
  std::string cluster_id;
  Intent intent = Intent::MethodTracking;
  std::vector<std::string> succeeded;  // doc ids in chain order
  std::vector<DocFailure> failed;
  bool render_success = false;
  std::string render_error;
  std::vector<std::string> artifacts;  // paths relative to out_dir
  long elapsed_ms = 0;
  std::string backend_mode;
  long backend_requests = 0;
  long network_attempts = 0;

  nlohmann::json to_json() const;
};

/// Dispatch one instruction over one cluster and write the artifact tree
/// out/<cluster>/<intent>/. Per-document failures never abort the run.
RunReport run(const Instruction& instruction, const Corpus& corpus, Backend& backend,
              const RunOptions& options);

/// pulse.toml-style flat key/value config.
struct Config {
  std::string endpoint;
  std::string manifest;
  std::string transcript;
  std::string prompt_dir;
  std::string mmap_model = "mmap-extractor";
  std::string lchart_model = "lchart-extractor";
  std::string plan_model = "plan-router";
  int parallelism = 4;
  int repair_limit = 3;
  int raster_width = 1024;
  int raster_height = 768;

  static Config load(const std::string& path);
};

}  // namespace pulse
