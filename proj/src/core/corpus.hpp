#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "core/date.hpp"
#include "core/docparse.hpp"

namespace pulse {

enum class Split { Train, Test };

const char* split_name(Split split);

struct Document {
  std::string id;
  std::string title;
  std::vector<std::string> authors;
  Date published_at;
  std::optional<std::string> venue;
  std::string source_path;  // relative to the manifest directory
  std::vector<Section> sections;
  std::vector<ReferenceEntry> references;

  const Section* find_section(SectionKind kind) const;
  std::string full_body() const;
};

struct Cluster {
  std::string id;
  std::string label;
  Split split = Split::Train;
  std::vector<std::string> doc_ids;
};

struct CitationEdge {
  std::string from_doc;
  std::string to_doc;
  int via_reference = 0;  // index field of the matching ReferenceEntry
};

class Corpus {
 public:
  std::vector<Cluster> clusters;
  std::vector<Document> documents;

  const Document* find_document(const std::string& id) const;
  Document* find_document(const std::string& id);
  const Cluster* find_cluster(const std::string& id) const;

  void rebuild_index();

 private:
  std::unordered_map<std::string, std::size_t> doc_index_;
};

/// Load `corpus.json` plus every referenced markdown document.
Corpus load_manifest(const std::string& manifest_path);

/// Edge A->B iff a reference entry of A title-matches B after normalization.
/// Also fills ReferenceEntry::matched_doc. Deterministic and deduplicated.
std::vector<CitationEdge> build_citation_graph(Corpus& corpus);

/// Cluster/document counts and per-split paper averages (2 decimals).
nlohmann::json corpus_summary(const Corpus& corpus);

struct Metadata {
  std::string title;
  std::string date;
  std::string venue;
};

struct MetadataSource {
  std::string endpoint;     // e.g. "http://host:port"; GET <endpoint>/<paper_id>
  std::string fixture_dir;  // offline mode reads <fixture_dir>/<paper_id>.json
  bool offline = false;
};

Metadata fetch_metadata(const std::string& paper_id, const MetadataSource& source);

}  // namespace pulse
