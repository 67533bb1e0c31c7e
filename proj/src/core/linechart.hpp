#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/backend.hpp"
#include "core/extracted.hpp"
#include "core/mindmap.hpp"  // Figure, RenderOptions
#include "core/prompts.hpp"

namespace pulse::linechart {

using mindmap::Figure;
using mindmap::RenderOptions;

enum class Direction { HigherBetter, LowerBetter };

const char* direction_name(Direction d);

/// Keyword default (fid/lpips/kid/cmmd are lower-better), prompt-overridable.
Direction default_direction(const std::string& metric);

struct Provenance {
  std::string doc_id;
  int table_ordinal = 0;
  int row = 0;
  int col = 0;
};

struct MetricObservation {
  std::string model;
  std::string metric;
  std::optional<std::string> dataset;
  double value = 0.0;
  Direction direction = Direction::HigherBetter;
  Provenance source;
};

struct ExperimentRecord {
  std::string doc_id;
  Table table;
  std::vector<std::string> models;
  std::vector<MetricObservation> observations;
  std::map<std::string, int> baseline_years;  // model -> cited year
  int host_year = 0;                          // publication year of the host paper
  std::vector<ParseNote> notes;
};

struct ExtractOptions {
  std::string model = "lchart-extractor";
  int max_tokens = 2048;
  int repair_limit = 3;
  PromptSet prompts = PromptSet::builtin();
};

/// Highest numeric-cell count, +10 when a header mentions a metric keyword;
/// ties go to the earliest ordinal.
const Table& select_main_table(const ExtractedDocument& xdoc);

std::string build_extract_prompt(const Table& table,
                                 const std::vector<ReferenceEntry>& references,
                                 const PromptSet& prompts);

/// The exact first-attempt request extract_record sends.
ChatRequest extraction_request(const Table& table, const std::vector<ReferenceEntry>& references,
                               const ExtractOptions& options);

/// Backend-driven record extraction with bounded repair loop. Observation
/// values are read from the table cells the reply points at, never from the
/// reply itself.
ExperimentRecord extract_record(const ExtractedDocument& xdoc, const Table& table,
                                Backend& backend, const ExtractOptions& options);

struct TrendPoint {
  int year = 0;
  std::string model;
  double value = 0.0;
  std::vector<Provenance> provenance;
};

struct TrendSeries {
  std::string metric;
  std::string dataset;  // "default" when the table names none
  Direction direction = Direction::HigherBetter;
  std::vector<TrendPoint> points;  // strictly increasing years
};

struct AlignStats {
  int total = 0;
  int kept = 0;
  int deduped = 0;
  int skipped = 0;
};

struct ExperimentChain {
  std::string cluster_id;
  std::vector<TrendSeries> series;
  AlignStats stats;
};

/// Group observations by (metric, dataset), date each point by baseline year
/// or host year, keep the best value per year, and sort.
ExperimentChain align_chain(const std::vector<ExperimentRecord>& records,
                            const std::string& cluster_id);

nlohmann::json echain_to_json(const ExperimentChain& chain);

struct ChartSeriesSpec {
  std::string label;
  Direction direction = Direction::HigherBetter;
  std::vector<TrendPoint> points;
};

struct ChartSpec {
  std::string title;
  int year_min = 0;
  int year_max = 0;
  double y_min = 0.0;
  double y_max = 0.0;
  std::string y_label;
  std::vector<ChartSeriesSpec> series;
};

ChartSpec build_chart_spec(const ExperimentChain& chain, const std::string& title);

Figure render_linechart(const ChartSpec& spec, const RenderOptions& options);

}  // namespace pulse::linechart
