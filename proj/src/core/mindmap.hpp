#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/backend.hpp"
#include "core/date.hpp"
#include "core/extracted.hpp"
#include "core/metrics.hpp"
#include "core/prompts.hpp"

namespace pulse::mindmap {

struct MotivationMethodPair {
  std::string doc_id;
  std::string motivation;
  std::string method;
  Date published_at;
  int repair_count = 0;
};

struct MethodChain {
  std::string cluster_id;
  std::vector<MotivationMethodPair> pairs;  // nondecreasing (published_at, doc_id)
};

/// Cluster label and doc titles needed by the markdown and figure emitters.
struct ChainContext {
  std::string cluster_label;
  std::map<std::string, std::string> titles;  // doc id -> title
};

struct ExtractOptions {
  std::string model = "mmap-extractor";
  int max_tokens = 1024;
  int repair_limit = 3;       // total malformed replies tolerated
  std::size_t field_cap = 2000;  // characters per field, word-boundary truncation
  PromptSet prompts = PromptSet::builtin();
};

std::string build_extract_prompt(const ExtractedDocument& xdoc, const PromptSet& prompts);

/// The exact first-attempt request extract_pair sends; transcript tooling
/// and tests key their canned replies off this.
ChatRequest extraction_request(const ExtractedDocument& xdoc, const ExtractOptions& options);

/// Parse a fenced two-field reply; returns violations instead of throwing.
struct ParsedPair {
  std::string motivation;
  std::string method;
  std::vector<std::string> violations;
};
ParsedPair parse_pair_reply(const std::string& reply);

/// Backend-driven (motivation, method) extraction with bounded repair loop.
MotivationMethodPair extract_pair(const ExtractedDocument& xdoc, Backend& backend,
                                  const ExtractOptions& options);

/// Stable sort by (published_at, doc_id); duplicate doc ids are an error.
MethodChain sort_chain(std::vector<MotivationMethodPair> pairs, const std::string& cluster_id);

/// `# label` / `## year` / `### title (date)` with Motivation/Method bullets.
std::string emit_chain_markdown(const MethodChain& chain, const ChainContext& ctx);

struct Violation {
  std::string kind;  // SchemaViolation | DuplicateNode | OrderViolation
  std::string detail;
};

/// Empty result means the document conforms.
std::vector<Violation> validate_chain_markdown(const std::string& text);

// ---------------------------------------------------------------------------
// Mind-map figure

struct LayoutNode {
  std::string id;
  std::vector<std::string> lines;  // wrapped label
  int x = 0, y = 0, width = 0, height = 0;
  int depth = 0;  // 0 root, 1 year, 2 leaf
};

struct LayoutEdge {
  std::size_t from = 0;
  std::size_t to = 0;
};

struct MindMapLayout {
  std::vector<LayoutNode> nodes;
  std::vector<LayoutEdge> edges;
  int width = 0, height = 0;
};

struct RenderOptions {
  int raster_width = 1024;
  int raster_height = 768;
  std::size_t wrap_width = 60;
};

MindMapLayout layout_mindmap(const MethodChain& chain, const ChainContext& ctx,
                             const RenderOptions& options);

struct Figure {
  std::string svg;
  GrayImage raster;
};

Figure render_mindmap(const MethodChain& chain, const ChainContext& ctx,
                      const RenderOptions& options);

}  // namespace pulse::mindmap
