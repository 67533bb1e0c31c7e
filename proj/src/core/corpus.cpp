#include "core/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include <httplib.h>

#include "core/error.hpp"
#include "core/io.hpp"
#include "core/text.hpp"

namespace pulse {

namespace fs = std::filesystem;
using nlohmann::json;

const char* split_name(Split split) { return split == Split::Train ? "train" : "test"; }

const Section* Document::find_section(SectionKind kind) const {
  for (const auto& s : sections)
    if (s.kind == kind) return &s;
  return nullptr;
}

std::string Document::full_body() const {
  std::string body;
  for (const auto& s : sections) {
    body += s.raw_heading;
    body += s.body;
  }
  return body;
}

const Document* Corpus::find_document(const std::string& id) const {
  auto it = doc_index_.find(id);
  return it == doc_index_.end() ? nullptr : &documents[it->second];
}

Document* Corpus::find_document(const std::string& id) {
  auto it = doc_index_.find(id);
  return it == doc_index_.end() ? nullptr : &documents[it->second];
}

const Cluster* Corpus::find_cluster(const std::string& id) const {
  for (const auto& c : clusters)
    if (c.id == id) return &c;
  return nullptr;
}

void Corpus::rebuild_index() {
  doc_index_.clear();
  for (std::size_t i = 0; i < documents.size(); ++i) doc_index_[documents[i].id] = i;
}

namespace {

std::string require_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string())
    raise(ErrorCode::ManifestSchema, where + ": missing string field '" + key + "'");
  return obj[key].get<std::string>();
}

Split parse_split(const std::string& s, const std::string& where) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  raise(ErrorCode::ManifestSchema, where + ": split must be 'train' or 'test', got '" + s + "'");
}

Document load_document(const json& doc_json, const fs::path& base_dir, const std::string& where) {
  Document doc;
  doc.id = require_string(doc_json, "id", where);
  doc.source_path = require_string(doc_json, "path", where);
  doc.title = require_string(doc_json, "title", where);
  std::string date_str = require_string(doc_json, "published_at", where);
  auto date = parse_date(date_str);
  if (!date)
    raise(ErrorCode::ManifestSchema,
          where + ": bad published_at '" + date_str + "' for doc '" + doc.id + "'");
  doc.published_at = *date;
  if (doc_json.contains("authors")) {
    if (!doc_json["authors"].is_array())
      raise(ErrorCode::ManifestSchema, where + ": authors must be an array");
    for (const auto& a : doc_json["authors"]) doc.authors.push_back(a.get<std::string>());
  }
  if (doc_json.contains("venue") && doc_json["venue"].is_string())
    doc.venue = doc_json["venue"].get<std::string>();

  fs::path doc_path = base_dir / doc.source_path;
  if (!fs::exists(doc_path))
    raise(ErrorCode::MissingDocument, "document file absent: " + doc_path.string() +
                                          " (doc '" + doc.id + "')");
  std::string body = read_file(doc_path);
  doc.sections = segment_sections(body);
  if (const Section* refs = doc.find_section(SectionKind::References))
    doc.references = parse_references(*refs);
  return doc;
}

}  // namespace

Corpus load_manifest(const std::string& manifest_path) {
  fs::path path(manifest_path);
  if (!fs::exists(path)) raise(ErrorCode::Io, "manifest not found: " + manifest_path);
  json manifest;
  try {
    manifest = json::parse(read_file(path));
  } catch (const json::exception& e) {
    raise(ErrorCode::ManifestSchema, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!manifest.is_object() || !manifest.contains("clusters") || !manifest["clusters"].is_array())
    raise(ErrorCode::ManifestSchema, "manifest must be an object with a 'clusters' array");

  fs::path base_dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  Corpus corpus;
  std::map<std::string, json> seen_docs;  // id -> manifest entry, to reject conflicts

  for (const auto& cluster_json : manifest["clusters"]) {
    Cluster cluster;
    std::string where = "cluster";
    cluster.id = require_string(cluster_json, "id", where);
    where = "cluster '" + cluster.id + "'";
    cluster.label = require_string(cluster_json, "label", where);
    cluster.split = parse_split(require_string(cluster_json, "split", where), where);
    if (!cluster_json.contains("docs") || !cluster_json["docs"].is_array() ||
        cluster_json["docs"].empty())
      raise(ErrorCode::ManifestSchema, where + ": docs must be a nonempty array");

    std::set<std::string> in_cluster;
    for (const auto& doc_json : cluster_json["docs"]) {
      std::string doc_id = require_string(doc_json, "id", where);
      if (!in_cluster.insert(doc_id).second)
        raise(ErrorCode::ManifestSchema, where + ": duplicate doc id '" + doc_id + "'");
      cluster.doc_ids.push_back(doc_id);

      auto seen = seen_docs.find(doc_id);
      if (seen != seen_docs.end()) {
        if (seen->second != doc_json)
          raise(ErrorCode::ManifestSchema,
                "doc '" + doc_id + "' listed twice with conflicting metadata");
        continue;  // same document shared by another cluster
      }
      seen_docs.emplace(doc_id, doc_json);
      corpus.documents.push_back(load_document(doc_json, base_dir, where));
    }
    corpus.clusters.push_back(std::move(cluster));
  }

  corpus.rebuild_index();
  return corpus;
}

std::vector<CitationEdge> build_citation_graph(Corpus& corpus) {
  // normalized title -> doc id; ambiguous titles are dropped from matching
  std::map<std::string, std::string> title_index;
  std::set<std::string> ambiguous;
  for (const auto& doc : corpus.documents) {
    std::string key = normalize_title(doc.title);
    if (key.empty()) continue;
    auto [it, inserted] = title_index.emplace(key, doc.id);
    if (!inserted && it->second != doc.id) ambiguous.insert(key);
  }
  for (const auto& key : ambiguous) title_index.erase(key);

  std::vector<std::string> doc_ids;
  doc_ids.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) doc_ids.push_back(doc.id);
  std::sort(doc_ids.begin(), doc_ids.end());

  std::vector<CitationEdge> edges;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& from_id : doc_ids) {
    Document* doc = corpus.find_document(from_id);
    for (auto& ref : doc->references) {
      std::string norm = normalize_title(ref.raw);
      for (const auto& [title, to_id] : title_index) {
        if (to_id == from_id) continue;
        if (norm.find(title) == std::string::npos) continue;
        ref.matched_doc = to_id;
        if (seen.emplace(from_id, to_id).second)
          edges.push_back(CitationEdge{from_id, to_id, ref.index});
        break;
      }
    }
  }
  return edges;
}

nlohmann::json corpus_summary(const Corpus& corpus) {
  int train_clusters = 0, test_clusters = 0;
  long train_docs = 0, test_docs = 0;
  for (const auto& c : corpus.clusters) {
    if (c.split == Split::Train) {
      ++train_clusters;
      train_docs += static_cast<long>(c.doc_ids.size());
    } else {
      ++test_clusters;
      test_docs += static_cast<long>(c.doc_ids.size());
    }
  }
  auto avg2 = [](long docs, int clusters) {
    if (clusters == 0) return 0.0;
    double avg = static_cast<double>(docs) / clusters;
    return std::round(avg * 100.0) / 100.0;
  };
  json summary;
  summary["clusters_total"] = corpus.clusters.size();
  summary["clusters_train"] = train_clusters;
  summary["clusters_test"] = test_clusters;
  summary["documents_total"] = corpus.documents.size();
  summary["train_avg_papers"] = avg2(train_docs, train_clusters);
  summary["test_avg_papers"] = avg2(test_docs, test_clusters);
  return summary;
}

Metadata fetch_metadata(const std::string& paper_id, const MetadataSource& source) {
  json payload;
  if (source.offline) {
    if (source.fixture_dir.empty())
      raise(ErrorCode::OfflineUnavailable, "offline metadata fetch without a fixture dir");
    fs::path fixture = fs::path(source.fixture_dir) / (paper_id + ".json");
    if (!fs::exists(fixture))
      raise(ErrorCode::OfflineUnavailable, "no fixture for paper id '" + paper_id + "'");
    payload = json::parse(read_file(fixture));
  } else {
    if (source.endpoint.empty()) raise(ErrorCode::Config, "metadata endpoint not configured");
    httplib::Client client(source.endpoint);
    client.set_connection_timeout(5);
    auto res = client.Get("/" + paper_id);
    if (!res) raise(ErrorCode::EndpointError, "metadata endpoint unreachable");
    if (res->status == 404) raise(ErrorCode::NotFound, "unknown paper id '" + paper_id + "'");
    if (res->status != 200)
      raise(ErrorCode::EndpointError, "metadata fetch failed with status " +
                                          std::to_string(res->status));
    payload = json::parse(res->body);
  }
  if (!payload.contains("title") || !payload.contains("date"))
    raise(ErrorCode::NotFound, "metadata record for '" + paper_id + "' lacks title/date");
  Metadata meta;
  meta.title = payload["title"].get<std::string>();
  meta.date = payload["date"].get<std::string>();
  if (payload.contains("venue") && payload["venue"].is_string())
    meta.venue = payload["venue"].get<std::string>();
  return meta;
}

}  // namespace pulse
